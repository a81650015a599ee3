//! Rigorous elementary functions on enclosures: exp, natural log, and the
//! pair (cos 2*pi*x, sin 2*pi*x) used by the unit-circle map.
//!
//! All series are truncated Taylor/atanh expansions evaluated in interval
//! arithmetic with an explicit geometric bound on the discarded tail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{ln2_enclosure, pi_enclosure, shr_floor, Enclosure};
use crate::error::{Error, Result};

impl Enclosure {
    /// Enclosure of `e^x`.
    pub fn exp(&self) -> Enclosure {
        let prec = self.prec;
        let ln2 = ln2_enclosure(prec);
        // k = round(mid / ln2); any integer works for containment, a good
        // one keeps the series argument small.
        let mid = shr_floor(&(&self.lo + &self.hi), 1);
        let k = round_div(&mid, ln2.lo_int());
        let r = self.sub(&ln2.scale_int(&k));
        // sum_{n} r^n / n!
        let mut acc = Enclosure::one(prec);
        let mut term = Enclosure::one(prec);
        let eps = tail_eps();
        let mut n: u64 = 1;
        loop {
            term = term.mul(&r).div_uint(n);
            acc = acc.add(&term);
            let bound = term.abs_bound();
            if n >= 4 && bound <= eps {
                // |r| <= 0.75 after reduction, so the tail is below
                // bound * sum (0.75/(n+1))^j < 2 * bound.
                acc = acc.widen_ulps(&(&bound * 2u32 + 1u32));
                break;
            }
            n += 1;
        }
        let k_i64 = i64::try_from(&k).expect("exp argument out of supported range");
        acc.scale_pow2(k_i64)
    }

    /// Enclosure of the natural logarithm; the input must be strictly
    /// positive.
    pub fn ln(&self) -> Result<Enclosure> {
        if !self.lo.is_positive() {
            return Err(Error::LogNonPositive);
        }
        let lo_part = ln_point(&self.lo, self.prec);
        if self.is_point() {
            return Ok(lo_part);
        }
        let hi_part = ln_point(&self.hi, self.prec);
        Ok(lo_part.hull(&hi_part))
    }

    /// Enclosures of `cos(2 pi x)` and `sin(2 pi x)`.
    ///
    /// Arguments are reduced modulo one by exact integer translation, so
    /// large inputs such as `b^j x` lose no accuracy. Inputs at least half
    /// a period wide short-circuit to `[-1, 1]`.
    pub fn cos_sin_2pi(&self) -> (Enclosure, Enclosure) {
        let prec = self.prec;
        assert!(prec >= 2, "trigonometric reduction needs at least 2 bits");
        let full = || {
            (
                Enclosure::from_int(-1, prec).hull(&Enclosure::one(prec)),
                Enclosure::from_int(-1, prec).hull(&Enclosure::one(prec)),
            )
        };
        let half_width = BigInt::one() << (prec - 1);
        if self.width_ulps() >= half_width {
            return full();
        }
        // Center: n = floor(mid + 1/2), t = x - n, so mid(t) in [-1/2, 1/2].
        let mid = shr_floor(&(&self.lo + &self.hi), 1);
        let n = shr_floor(&(&mid + (BigInt::one() << (prec - 1))), prec);
        let t = self.sub_int(&n);
        // Quarter-turn fold: q = round(4 mid(t)), u = t - q/4 keeps the
        // series argument within about an eighth of a turn.
        let mid_t = &mid - (&n << prec);
        let q = shr_floor(&((&mid_t << 2u32) + (BigInt::one() << (prec - 1))), prec);
        let q_i = i64::try_from(&q).expect("fold quadrant fits i64");
        let quarter = &q << (prec - 2);
        let u = Enclosure::from_raw(t.lo_int() - &quarter, t.hi_int() - &quarter, prec);
        let two_pi = pi_enclosure(prec).scale_pow2(1);
        let theta = u.mul(&two_pi);
        let (c, s) = cos_sin_series(&theta);
        let (c, s) = match q_i.rem_euclid(4) {
            0 => (c, s),
            1 => (s.neg(), c),
            2 => (c.neg(), s.neg()),
            _ => (s, c.neg()),
        };
        (c.clamp_int(-1, 1), s.clamp_int(-1, 1))
    }

    /// Upper bound on the absolute value, in scaled units.
    fn abs_bound(&self) -> BigInt {
        self.lo.magnitude().max(self.hi.magnitude()).clone().into()
    }

    /// Symmetric inflation by an absolute count of scaled units.
    fn widen_ulps(&self, ulps: &BigInt) -> Enclosure {
        debug_assert!(!ulps.is_negative());
        Enclosure::from_raw(&self.lo - ulps, &self.hi + ulps, self.prec)
    }
}

fn tail_eps() -> BigInt {
    // Stop a series once a term bound is down to a few scaled units;
    // interval rounding keeps term bounds from ever reaching exactly zero.
    BigInt::from(8)
}

/// Nearest-integer division of scaled values with equal scales.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    ((n << 1u32) + d).div_floor(&(d << 1u32))
}

/// `ln(m / 2^prec)` for a strictly positive dyadic point.
fn ln_point(m: &BigInt, prec: u32) -> Enclosure {
    debug_assert!(m.is_positive());
    let bits = m.bits() as i64;
    // y0 = m / 2^(bits-1) lies in [1, 2); shift once more when y0 >= 3/2
    // so that y lies in [3/4, 3/2) and |z| <= 1/5 below.
    // y0 < 3/2  <=>  2m < 3 * 2^(bits-1), compared exactly.
    let y0_small = (m << 1u32) < (BigInt::from(3) << (bits - 1) as u32);
    let e = if y0_small { bits - 1 } else { bits };
    // y = m / 2^e as an enclosure at working precision.
    let shift = e - prec as i64;
    let y = if shift <= 0 {
        let n = m << (-shift) as u32;
        Enclosure::from_raw(n.clone(), n, prec)
    } else {
        let s = shift as u32;
        Enclosure::from_raw(shr_floor(m, s), super::shr_ceil(m, s), prec)
    };
    // ln(m / 2^prec) = (e - prec) ln 2 + ln y,  ln y = 2 atanh(z)
    let one = Enclosure::one(prec);
    let z = y.sub(&one).div(&y.add(&one)).expect("y + 1 > 0");
    let z2 = z.square();
    let mut acc = z.clone();
    let mut term = z.clone();
    let eps = tail_eps();
    let mut k: u64 = 1;
    loop {
        term = term.mul(&z2);
        let contrib = term.div_uint(2 * k + 1);
        acc = acc.add(&contrib);
        let bound = contrib.abs_bound();
        if bound <= eps {
            // |z| <= 1/5 (plus rounding), so the tail is below
            // bound / (1 - 1/25) < 2 * bound.
            acc = acc.widen_ulps(&(&bound * 2u32 + 1u32));
            break;
        }
        k += 1;
    }
    let atanh2 = acc.scale_pow2(1);
    let exponent = BigInt::from(e - prec as i64);
    ln2_enclosure(prec).scale_int(&exponent).add(&atanh2)
}

/// Interval Taylor evaluation of cos and sin for `|theta|` at most a few
/// units, with geometric tail bounds.
fn cos_sin_series(theta: &Enclosure) -> (Enclosure, Enclosure) {
    let prec = theta.precision();
    let theta2 = theta.square();
    let mut cos_acc = Enclosure::one(prec);
    let mut sin_inner = Enclosure::one(prec);
    let mut c_term = Enclosure::one(prec);
    let mut s_term = Enclosure::one(prec);
    let eps = tail_eps();
    let mut k: u64 = 1;
    loop {
        c_term = c_term.mul(&theta2).div_uint((2 * k - 1) * (2 * k));
        s_term = s_term.mul(&theta2).div_uint((2 * k) * (2 * k + 1));
        if k % 2 == 1 {
            cos_acc = cos_acc.sub(&c_term);
            sin_inner = sin_inner.sub(&s_term);
        } else {
            cos_acc = cos_acc.add(&c_term);
            sin_inner = sin_inner.add(&s_term);
        }
        let cb = c_term.abs_bound();
        let sb = s_term.abs_bound();
        // theta^2 <= 6 after folding, so the term ratio is below 1/2 once
        // (2k+1)(2k+2) >= 12 and the tails are below twice the last bound.
        if k >= 2 && cb <= eps && sb <= eps {
            cos_acc = cos_acc.widen_ulps(&(&cb * 2u32 + 1u32));
            sin_inner = sin_inner.widen_ulps(&(&sb * 2u32 + 1u32));
            break;
        }
        k += 1;
    }
    (cos_acc, theta.mul(&sin_inner))
}
