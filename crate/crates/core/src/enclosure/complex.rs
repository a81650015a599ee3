//! Rectangular complex enclosures: a box `re x im` of real enclosures.
//!
//! Only the operations needed by the digit-measure evaluators are
//! provided: ring arithmetic, integer powers, and the modulus. Complex
//! interval division is deliberately absent; the evaluation paths that
//! would need it are rewritten to divide by a real modulus instead.

use num_bigint::BigInt;
use num_traits::Zero;

use super::Enclosure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: Enclosure,
    pub im: Enclosure,
}

impl ComplexBox {
    pub fn new(re: Enclosure, im: Enclosure) -> Self {
        ComplexBox { re, im }
    }

    pub fn one(prec: u32) -> Self {
        ComplexBox::new(Enclosure::one(prec), Enclosure::zero(prec))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBox::new(Enclosure::zero(prec), Enclosure::zero(prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn add(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn sub(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox::new(self.re.sub(&other.re), self.im.sub(&other.im))
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, other: &ComplexBox) -> ComplexBox {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        ComplexBox::new(re, im)
    }

    /// Scales by a real enclosure.
    pub fn mul_real(&self, s: &Enclosure) -> ComplexBox {
        ComplexBox::new(self.re.mul(s), self.im.mul(s))
    }

    /// Subtracts the real constant one.
    pub fn sub_one(&self) -> ComplexBox {
        let one = Enclosure::one(self.re.precision());
        ComplexBox::new(self.re.sub(&one), self.im.clone())
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut n: u32) -> ComplexBox {
        if n == 0 {
            return ComplexBox::one(self.precision());
        }
        let mut base = self.clone();
        let mut acc: Option<ComplexBox> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                let squared = base.mul(&base);
                base = squared;
            }
        }
        acc.expect("n > 0")
    }

    /// Enclosure of `|z|`; the result never dips below zero.
    pub fn modulus(&self) -> Enclosure {
        let sum = self.re.square().add(&self.im.square());
        // Squares can round a hair below zero; the true value cannot.
        let sum = if sum.lo_int() < &BigInt::zero() {
            Enclosure::from_raw(BigInt::zero(), sum.hi_int().clone(), sum.precision())
        } else {
            sum
        };
        sum.sqrt().expect("modulus operand is nonnegative")
    }
}

/// `e(x) = e^{2 pi i x}` as a complex box: `(cos 2 pi x, sin 2 pi x)`.
///
/// The result always lies within the unit square `[-1,1] x [-1,1]`.
pub fn unit_circle(x: &Enclosure) -> ComplexBox {
    let (c, s) = x.cos_sin_2pi();
    ComplexBox::new(c, s)
}
