//! Enclosures of pi and ln 2, computed once per working precision from
//! integer series with explicit error accounting, then cached.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;

use super::{shr_ceil, shr_floor, Enclosure};

const GUARD_BITS: u32 = 32;

static PI_CACHE: Lazy<Mutex<HashMap<u32, (BigInt, BigInt)>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static LN2_CACHE: Lazy<Mutex<HashMap<u32, (BigInt, BigInt)>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// `atan(1/q) * 2^scale` bracketed by integer endpoints.
///
/// Each term is a floored integer division (error < 1 per term), and the
/// alternating tail is bounded by the first omitted term, so the total
/// error is at most `terms + tail + 1` units.
fn atan_inv_scaled(q: u64, scale: u32) -> (BigInt, BigInt) {
    let one_scaled = BigInt::from(1) << scale;
    let q2 = BigInt::from(q) * BigInt::from(q);
    let mut power = BigInt::from(q); // q^(2k+1)
    let mut acc = BigInt::zero();
    let mut terms: u64 = 0;
    let mut k: u64 = 0;
    loop {
        let denom = &power * BigInt::from(2 * k + 1);
        let term = &one_scaled / &denom;
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        terms += 1;
        power *= &q2;
        k += 1;
    }
    // Floored divisions each drop less than 1; the truncated tail is below 1.
    let err = BigInt::from(terms + 2);
    (&acc - &err, &acc + &err)
}

fn compute_pi(prec: u32) -> (BigInt, BigInt) {
    let scale = prec + GUARD_BITS;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let (a5_lo, a5_hi) = atan_inv_scaled(5, scale);
    let (a239_lo, a239_hi) = atan_inv_scaled(239, scale);
    let lo = a5_lo * 16 - a239_hi * 4;
    let hi = a5_hi * 16 - a239_lo * 4;
    (shr_floor(&lo, GUARD_BITS), shr_ceil(&hi, GUARD_BITS))
}

fn compute_ln2(prec: u32) -> (BigInt, BigInt) {
    let scale = prec + GUARD_BITS;
    // ln 2 = 2 atanh(1/3) = 2 sum_k 1 / ((2k+1) 3^(2k+1))
    let one_scaled = BigInt::from(1) << scale;
    let mut power = BigInt::from(3u32);
    let mut acc = BigInt::zero();
    let mut terms: u64 = 0;
    let mut k: u64 = 0;
    loop {
        let denom = &power * BigInt::from(2 * k + 1);
        let term = &one_scaled / &denom;
        if term.is_zero() {
            break;
        }
        acc += term;
        terms += 1;
        power *= 9u32;
        k += 1;
    }
    // All terms positive: floored partial sum is a lower bound; add the
    // per-term floor losses plus a geometric tail bound (< 2 units).
    let lo = &acc * 2;
    let hi = (&acc + BigInt::from(terms + 2)) * 2;
    (shr_floor(&lo, GUARD_BITS), shr_ceil(&hi, GUARD_BITS))
}

pub(crate) fn pi_enclosure(prec: u32) -> Enclosure {
    let mut cache = PI_CACHE.lock().expect("pi cache poisoned");
    let (lo, hi) = cache
        .entry(prec)
        .or_insert_with(|| compute_pi(prec))
        .clone();
    Enclosure::from_raw(lo, hi, prec)
}

pub(crate) fn ln2_enclosure(prec: u32) -> Enclosure {
    let mut cache = LN2_CACHE.lock().expect("ln2 cache poisoned");
    let (lo, hi) = cache
        .entry(prec)
        .or_insert_with(|| compute_ln2(prec))
        .clone();
    Enclosure::from_raw(lo, hi, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;
    use num_bigint::BigInt;

    #[test]
    fn pi_enclosure_is_tight_and_correct() {
        let pi = pi_enclosure(128);
        // 50-digit decimal brackets of pi.
        let below = parse_rational("3.14159265358979323846264338327950288419716939937510").unwrap();
        let above = parse_rational("3.14159265358979323846264338327950288419716939937512").unwrap();
        assert!(pi.lo_rational() < above);
        assert!(pi.hi_rational() > below);
        assert!(pi.contains_rational(&parse_rational("3.141592653589793238462643383279502884197").unwrap()));
        assert!(pi.width_ulps() <= BigInt::from(4));
    }

    #[test]
    fn ln2_enclosure_is_tight_and_correct() {
        let l = ln2_enclosure(128);
        let known = parse_rational("0.69314718055994530941723212145817656807550013436026").unwrap();
        assert!(l.contains_rational(&known));
        assert!(l.width_ulps() <= BigInt::from(4));
    }

    #[test]
    fn constants_scale_with_precision() {
        for prec in [32u32, 64, 128, 256, 512] {
            let pi = pi_enclosure(prec);
            assert_eq!(pi.precision(), prec);
            assert!(pi.width_ulps() <= BigInt::from(8));
        }
    }
}
