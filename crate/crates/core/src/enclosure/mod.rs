//! Rigorous real enclosures: directed-rounded intervals over dyadic
//! endpoints.
//!
//! An [`Enclosure`] stores `lo` and `hi` as big integers scaled by
//! `2^precision`, with `lo` always rounded toward minus infinity and `hi`
//! toward plus infinity. Every operation returns an enclosure containing
//! the exact image of every point of its inputs; this containment contract
//! is the correctness basis for everything built on top.

mod complex;
mod constants;
mod functions;

pub use complex::{unit_circle, ComplexBox};
pub(crate) use constants::{ln2_enclosure, pi_enclosure};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default working precision in binary fraction bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Arithmetic operations dispatched by [`Enclosure::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary functions dispatched by [`Enclosure::elementary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryFn {
    Log,
    Exp,
}

/// Position of an enclosure relative to an exact rational threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRelation {
    Below,
    Above,
    Straddles,
}

/// A directed-rounded real interval `[lo, hi] = [lo_n, hi_n] / 2^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

/// Floor division by a power of two, explicit about rounding direction.
pub(crate) fn shr_floor(x: &BigInt, s: u32) -> BigInt {
    match x.sign() {
        Sign::NoSign => BigInt::zero(),
        Sign::Plus => x >> s,
        Sign::Minus => {
            let add = (BigUint::one() << s) - 1u32;
            -BigInt::from((x.magnitude() + add) >> s)
        }
    }
}

/// Ceiling division by a power of two.
pub(crate) fn shr_ceil(x: &BigInt, s: u32) -> BigInt {
    -shr_floor(&-x, s)
}

pub(crate) fn div_floor_big(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

pub(crate) fn div_ceil_big(n: &BigInt, d: &BigInt) -> BigInt {
    -(-n).div_floor(d)
}

fn isqrt_floor(v: &BigUint) -> BigUint {
    v.sqrt()
}

impl Enclosure {
    pub(crate) fn from_raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi, prec }
    }

    /// Point enclosure of an exact rational; width is at most one ulp and
    /// zero when the rational is dyadic at this precision.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r.numer() << prec;
        let lo = div_floor_big(&scaled, r.denom());
        let hi = div_ceil_big(&scaled, r.denom());
        Enclosure::from_raw(lo, hi, prec)
    }

    /// Enclosure spanning two exact rationals.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        assert!(lo <= hi);
        let l = div_floor_big(&(lo.numer() << prec), lo.denom());
        let h = div_ceil_big(&(hi.numer() << prec), hi.denom());
        Enclosure::from_raw(l, h, prec)
    }

    /// Exact integer as a zero-width enclosure.
    pub fn from_int(v: i64, prec: u32) -> Self {
        let n = BigInt::from(v) << prec;
        Enclosure::from_raw(n.clone(), n, prec)
    }

    pub fn zero(prec: u32) -> Self {
        Enclosure::from_raw(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Enclosure::from_int(1, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn width_rational(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Width measured in units in the last place at the working precision.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo_rational() <= *r && *r <= self.hi_rational()
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo_rational() <= other.lo_rational() && other.hi_rational() <= self.hi_rational()
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo_rational() <= other.hi_rational() && other.lo_rational() <= self.hi_rational()
    }

    /// Approximate endpoints for display only.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = self.lo_rational().to_f64().unwrap_or(f64::NEG_INFINITY);
        let hi = self.hi_rational().to_f64().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    fn aligned(&self, other: &Enclosure) -> (Enclosure, Enclosure) {
        match self.prec.cmp(&other.prec) {
            Ordering::Equal => (self.clone(), other.clone()),
            Ordering::Less => (self.rescale_up(other.prec), other.clone()),
            Ordering::Greater => (self.clone(), other.rescale_up(self.prec)),
        }
    }

    fn rescale_up(&self, prec: u32) -> Enclosure {
        debug_assert!(prec >= self.prec);
        let s = prec - self.prec;
        Enclosure::from_raw(&self.lo << s, &self.hi << s, prec)
    }

    /// Re-rounds outward to a different working precision.
    pub fn with_precision(&self, prec: u32) -> Enclosure {
        if prec >= self.prec {
            self.rescale_up(prec)
        } else {
            let s = self.prec - prec;
            Enclosure::from_raw(shr_floor(&self.lo, s), shr_ceil(&self.hi, s), prec)
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::from_raw(-&self.hi, -&self.lo, self.prec)
    }

    /// Exact: endpoint addition at a common scale introduces no rounding.
    pub fn add(&self, other: &Enclosure) -> Enclosure {
        let (a, b) = self.aligned(other);
        Enclosure::from_raw(a.lo + b.lo, a.hi + b.hi, a.prec)
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        self.add(&other.neg())
    }

    /// Exact translation by an integer.
    pub fn sub_int(&self, n: &BigInt) -> Enclosure {
        let shifted = n << self.prec;
        Enclosure::from_raw(&self.lo - &shifted, &self.hi - &shifted, self.prec)
    }

    /// Exact scaling by an integer (no rounding).
    pub fn scale_int(&self, k: &BigInt) -> Enclosure {
        if k.is_negative() {
            Enclosure::from_raw(&self.hi * k, &self.lo * k, self.prec)
        } else {
            Enclosure::from_raw(&self.lo * k, &self.hi * k, self.prec)
        }
    }

    /// Exact multiplication by `2^k` for `k >= 0`; outward for `k < 0`.
    pub fn scale_pow2(&self, k: i64) -> Enclosure {
        if k >= 0 {
            Enclosure::from_raw(&self.lo << k as u32, &self.hi << k as u32, self.prec)
        } else {
            let s = (-k) as u32;
            Enclosure::from_raw(shr_floor(&self.lo, s), shr_ceil(&self.hi, s), self.prec)
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let lo_of = |x: BigInt| shr_floor(&x, p);
        let hi_of = |x: BigInt| shr_ceil(&x, p);
        // Point fast path.
        if a.is_point() && b.is_point() {
            let prod = &a.lo * &b.lo;
            return Enclosure::from_raw(lo_of(prod.clone()), hi_of(prod), p);
        }
        let a_pos = !a.lo.is_negative();
        let a_neg = !a.hi.is_positive();
        let b_pos = !b.lo.is_negative();
        let b_neg = !b.hi.is_positive();
        let (lo, hi) = if a_pos && b_pos {
            (&a.lo * &b.lo, &a.hi * &b.hi)
        } else if a_pos && b_neg {
            (&a.hi * &b.lo, &a.lo * &b.hi)
        } else if a_neg && b_pos {
            (&a.lo * &b.hi, &a.hi * &b.lo)
        } else if a_neg && b_neg {
            (&a.hi * &b.hi, &a.lo * &b.lo)
        } else if a_pos {
            // b straddles zero
            (&a.hi * &b.lo, &a.hi * &b.hi)
        } else if a_neg {
            (&a.lo * &b.hi, &a.lo * &b.lo)
        } else if b_pos {
            (&a.lo * &b.hi, &a.hi * &b.hi)
        } else if b_neg {
            (&a.hi * &b.lo, &a.lo * &b.lo)
        } else {
            // both straddle zero
            let c1 = &a.lo * &b.hi;
            let c2 = &a.hi * &b.lo;
            let c3 = &a.lo * &b.lo;
            let c4 = &a.hi * &b.hi;
            (c1.min(c2), c3.max(c4))
        };
        Enclosure::from_raw(lo_of(lo), hi_of(hi), p)
    }

    /// Interval division; the divisor must not contain zero.
    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        let (a, b) = self.aligned(other);
        if b.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = a.prec;
        let quot_floor = |n: &BigInt, d: &BigInt| div_floor_big(&(n << p), d);
        let quot_ceil = |n: &BigInt, d: &BigInt| div_ceil_big(&(n << p), d);
        if a.is_point() && b.is_point() {
            return Ok(Enclosure::from_raw(
                quot_floor(&a.lo, &b.lo),
                quot_ceil(&a.lo, &b.lo),
                p,
            ));
        }
        let candidates = [(&a.lo, &b.lo), (&a.lo, &b.hi), (&a.hi, &b.lo), (&a.hi, &b.hi)];
        let lo = candidates.iter().map(|(n, d)| quot_floor(n, d)).min().unwrap();
        let hi = candidates.iter().map(|(n, d)| quot_ceil(n, d)).max().unwrap();
        Ok(Enclosure::from_raw(lo, hi, p))
    }

    /// Division by a positive integer constant, via scalar division on
    /// the magnitudes.
    pub(crate) fn div_uint(&self, d: u64) -> Enclosure {
        debug_assert!(d > 0);
        fn dfloor(x: &BigInt, d: u64) -> BigInt {
            match x.sign() {
                Sign::NoSign => BigInt::zero(),
                Sign::Plus => BigInt::from(x.magnitude() / d),
                Sign::Minus => -BigInt::from((x.magnitude() + (d - 1)) / d),
            }
        }
        fn dceil(x: &BigInt, d: u64) -> BigInt {
            match x.sign() {
                Sign::NoSign => BigInt::zero(),
                Sign::Plus => BigInt::from((x.magnitude() + (d - 1)) / d),
                Sign::Minus => -BigInt::from(x.magnitude() / d),
            }
        }
        Enclosure::from_raw(dfloor(&self.lo, d), dceil(&self.hi, d), self.prec)
    }

    /// Tight interval square: the result never dips below zero.
    pub fn square(&self) -> Enclosure {
        let p = self.prec;
        let sq_lo = |x: &BigInt| shr_floor(&(x * x), p);
        let sq_hi = |x: &BigInt| shr_ceil(&(x * x), p);
        if !self.lo.is_negative() {
            Enclosure::from_raw(sq_lo(&self.lo), sq_hi(&self.hi), p)
        } else if !self.hi.is_positive() {
            Enclosure::from_raw(sq_lo(&self.hi), sq_hi(&self.lo), p)
        } else {
            let hi = sq_hi(&self.lo).max(sq_hi(&self.hi));
            Enclosure::from_raw(BigInt::zero(), hi, p)
        }
    }

    /// Interval square root; requires a nonnegative lower endpoint.
    pub fn sqrt(&self) -> Result<Enclosure> {
        if self.lo.is_negative() {
            return Err(Error::SqrtNegative);
        }
        let p = self.prec;
        let lo_mag = (self.lo.magnitude()) << p;
        let hi_mag = (self.hi.magnitude()) << p;
        let slo = isqrt_floor(&lo_mag);
        let shi_floor = isqrt_floor(&hi_mag);
        let shi = if &shi_floor * &shi_floor == hi_mag {
            shi_floor
        } else {
            shi_floor + 1u32
        };
        Ok(Enclosure::from_raw(BigInt::from(slo), BigInt::from(shi), p))
    }

    /// Inflates both endpoints outward by a nonnegative rational.
    pub fn widen_rational(&self, eps: &BigRational) -> Enclosure {
        debug_assert!(!eps.is_negative());
        let scaled = eps.numer() << self.prec;
        let delta_hi = div_ceil_big(&scaled, eps.denom());
        Enclosure::from_raw(&self.lo - &delta_hi, &self.hi + &delta_hi, self.prec)
    }

    /// Clamps into `[lo_bound, hi_bound]`; sound only when the true value
    /// is known to lie in that range.
    pub(crate) fn clamp_int(&self, lo_bound: i64, hi_bound: i64) -> Enclosure {
        let lo_b = BigInt::from(lo_bound) << self.prec;
        let hi_b = BigInt::from(hi_bound) << self.prec;
        let lo = self.lo.clone().max(lo_b).min(hi_b.clone());
        let hi = self.hi.clone().min(hi_b).max(lo.clone());
        Enclosure::from_raw(lo, hi, self.prec)
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let (a, b) = self.aligned(other);
        Enclosure::from_raw(a.lo.min(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Integer power by repeated squaring. Intermediate squares use the
    /// tight square (both factors are the same variable).
    pub fn powi(&self, mut n: u32) -> Enclosure {
        let mut base = self.clone();
        let mut acc = Enclosure::one(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Arithmetic dispatcher over the four ring operations.
    pub fn arith(&self, other: &Enclosure, op: ArithOp) -> Result<Enclosure> {
        match op {
            ArithOp::Add => Ok(self.add(other)),
            ArithOp::Sub => Ok(self.sub(other)),
            ArithOp::Mul => Ok(self.mul(other)),
            ArithOp::Div => self.div(other),
        }
    }

    /// Elementary-function dispatcher.
    pub fn elementary(&self, f: ElementaryFn) -> Result<Enclosure> {
        match f {
            ElementaryFn::Log => self.ln(),
            ElementaryFn::Exp => Ok(self.exp()),
        }
    }

    /// Verdict of the enclosure against an exact rational threshold:
    /// `Below` iff `hi < t`, `Above` iff `lo > t`, `Straddles` otherwise.
    pub fn compare_threshold(&self, t: &BigRational) -> ThresholdRelation {
        let scaled_num = t.numer() << self.prec;
        // hi < t  <=>  hi * den < num * 2^prec
        if &self.hi * t.denom() < scaled_num {
            ThresholdRelation::Below
        } else if &self.lo * t.denom() > scaled_num {
            ThresholdRelation::Above
        } else {
            ThresholdRelation::Straddles
        }
    }

    /// True when every point of `self` is strictly less than every point
    /// of `other`.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    /// True when every point of `self` is at least every point of `other`.
    pub fn certainly_ge(&self, other: &Enclosure) -> bool {
        let (a, b) = self.aligned(other);
        a.lo >= b.hi
    }

    pub fn certainly_gt(&self, other: &Enclosure) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Lower endpoint printed as a decimal rounded toward minus infinity
    /// with `digits` fractional digits.
    pub fn decimal_lo(&self, digits: u32) -> String {
        let pow10 = BigInt::from(10u32).pow(digits);
        let scaled = shr_floor(&(&self.lo * &pow10), self.prec);
        format_scaled_decimal(&scaled, digits)
    }

    /// Upper endpoint printed as a decimal rounded toward plus infinity.
    pub fn decimal_hi(&self, digits: u32) -> String {
        let pow10 = BigInt::from(10u32).pow(digits);
        let scaled = shr_ceil(&(&self.hi * &pow10), self.prec);
        format_scaled_decimal(&scaled, digits)
    }

    pub(crate) fn lo_int(&self) -> &BigInt {
        &self.lo
    }

    pub(crate) fn hi_int(&self) -> &BigInt {
        &self.hi
    }

    /// Zero-width enclosure at the upper endpoint.
    pub fn point_at_hi(&self) -> Enclosure {
        Enclosure::from_raw(self.hi.clone(), self.hi.clone(), self.prec)
    }

    /// Zero-width enclosure at the lower endpoint.
    pub fn point_at_lo(&self) -> Enclosure {
        Enclosure::from_raw(self.lo.clone(), self.lo.clone(), self.prec)
    }
}

/// Formats `scaled / 10^digits` as a plain decimal string.
pub(crate) fn format_scaled_decimal_pub(scaled: &BigInt, digits: u32) -> String {
    format_scaled_decimal(scaled, digits)
}

fn format_scaled_decimal(scaled: &BigInt, digits: u32) -> String {
    let negative = scaled.is_negative();
    let mag = scaled.magnitude().to_string();
    let digits = digits as usize;
    let (int_part, frac_part) = if mag.len() > digits {
        let split = mag.len() - digits;
        (mag[..split].to_string(), mag[split..].to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", mag, width = digits))
    };
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Parses a plain decimal string (as produced by `decimal_lo`/`decimal_hi`)
/// into an exact rational.
pub fn parse_decimal_exact(s: &str) -> Result<BigRational> {
    crate::rational::parse_rational(s)
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_f64_bounds();
        write!(f, "[{lo:.17}, {hi:.17}]")
    }
}
