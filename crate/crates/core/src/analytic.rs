//! Closed-form analytic bounds, evaluated as enclosures.
//!
//! These are the large-base estimates: an exponential-sum bound for digit
//! sets in arithmetic progression, the lower bound for one-missing
//! systems derived from it, and the scan for the smallest base at which a
//! bound certifiably clears a threshold. Natural logarithms throughout.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::enclosure::{Enclosure, ThresholdRelation};
use crate::error::{Error, Result};
use crate::measure::APDigitSpec;
use crate::rational::in_open_unit;

/// Largest precision the threshold scan will escalate to before giving
/// up on a straddling candidate.
const SCAN_PRECISION_CAP: u32 = 1 << 14;

/// Scan limit for [`smallest_base`].
pub const SMALLEST_BASE_LIMIT: u32 = 1_000_000;

/// `b (1 + log 2l) + 3l + 2`: uniform bound on the exponential sums over
/// a length-`l` progression in base `b`, valid for `3 <= l <= b`.
pub fn expsum_bound(base: u32, length: u32, prec: u32) -> Result<Enclosure> {
    if length < 3 || length > base {
        return Err(Error::Parameter(format!(
            "expsum bound needs 3 <= l <= b, got l={length}, b={base}"
        )));
    }
    let log_2l = Enclosure::from_int(2 * length as i64, prec).ln()?;
    let one = Enclosure::one(prec);
    let b_term = one.add(&log_2l).scale_int(&BigInt::from(base));
    Ok(b_term.add(&Enclosure::from_int(3 * length as i64 + 2, prec)))
}

/// `log(b-1)/log b - log(5 + log(2b) + 2/b)/log b`: lower bound on the
/// dimension of the uniform one-missing measure in base `b >= 3`.
pub fn lower_bound_one_missing(base: u32, prec: u32) -> Result<Enclosure> {
    if base < 3 {
        return Err(Error::Parameter(
            "one-missing bound needs base at least 3".into(),
        ));
    }
    let log_b = Enclosure::from_int(base as i64, prec).ln()?;
    let log_bm1 = Enclosure::from_int(base as i64 - 1, prec).ln()?;
    let log_2b = Enclosure::from_int(2 * base as i64, prec).ln()?;
    let two_over_b = Enclosure::from_rational(
        &BigRational::new(BigInt::from(2), BigInt::from(base)),
        prec,
    );
    let inner = Enclosure::from_int(5, prec).add(&log_2b).add(&two_over_b);
    let correction = inner.ln()?;
    log_bm1.sub(&correction).div(&log_b)
}

/// Dimension and lower bound for the uniform measure on digits in
/// arithmetic progression.
#[derive(Debug, Clone)]
pub struct ApBound {
    /// `log l / log b`, the dimension of the measure.
    pub dim: Enclosure,
    /// `dim - log(4 + log 2l)/log b`.
    pub bound: Enclosure,
    /// Set when `gcd(d, b) > 1`: the step is not coprime to the base, a
    /// case the underlying sum estimate does not formally cover.
    pub coprime_warning: bool,
}

/// Lower bound for digit sets `{a + kd : k < l}` in base `b`.
pub fn lower_bound_ap(base: u32, spec: &APDigitSpec, prec: u32) -> Result<ApBound> {
    spec.validate_against(base)?;
    let log_b = Enclosure::from_int(base as i64, prec).ln()?;
    let log_l = Enclosure::from_int(spec.length as i64, prec).ln()?;
    let dim = log_l.div(&log_b)?;
    let log_2l = Enclosure::from_int(2 * spec.length as i64, prec).ln()?;
    let correction = Enclosure::from_int(4, prec).add(&log_2l).ln()?.div(&log_b)?;
    let bound = dim.sub(&correction);
    let coprime_warning = num_integer::gcd(spec.step as u64, base as u64) > 1;
    Ok(ApBound {
        dim,
        bound,
        coprime_warning,
    })
}

/// Which analytic quantity [`smallest_base`] scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallestBaseKind {
    /// The one-missing lower bound itself.
    OneMissing,
    /// The one-missing lower bound times `log(b-1)/log b`.
    OneMissingTimesDim,
}

fn scan_value(base: u32, kind: SmallestBaseKind, prec: u32) -> Result<Enclosure> {
    let bound = lower_bound_one_missing(base, prec)?;
    match kind {
        SmallestBaseKind::OneMissing => Ok(bound),
        SmallestBaseKind::OneMissingTimesDim => {
            let log_b = Enclosure::from_int(base as i64, prec).ln()?;
            let log_bm1 = Enclosure::from_int(base as i64 - 1, prec).ln()?;
            Ok(bound.mul(&log_bm1.div(&log_b)?))
        }
    }
}

/// Smallest base `b >= 3` whose scanned value certifiably exceeds the
/// threshold. A straddling verdict at a candidate escalates the working
/// precision until the comparison is decided.
pub fn smallest_base(
    threshold: &BigRational,
    kind: SmallestBaseKind,
    prec: u32,
) -> Result<u32> {
    if !in_open_unit(threshold) {
        return Err(Error::Parameter("threshold must lie in (0, 1)".into()));
    }
    for base in 3..=SMALLEST_BASE_LIMIT {
        let mut p = prec;
        loop {
            let value = scan_value(base, kind, p)?;
            match value.compare_threshold(threshold) {
                ThresholdRelation::Above => return Ok(base),
                ThresholdRelation::Below => break,
                ThresholdRelation::Straddles => {
                    p *= 2;
                    if p > SCAN_PRECISION_CAP {
                        return Err(Error::Parameter(format!(
                            "comparison at base {base} undecidable below {SCAN_PRECISION_CAP} bits"
                        )));
                    }
                }
            }
        }
    }
    Err(Error::NoBaseFound {
        limit: SMALLEST_BASE_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn assert_close(e: &Enclosure, v: f64, tol: f64) {
        let v = BigRational::from_float(v).unwrap();
        let tol = BigRational::from_float(tol).unwrap();
        assert!(
            e.lo_rational() <= &v + &tol && e.hi_rational() >= &v - &tol,
            "enclosure {e} not near {v}"
        );
    }

    #[test]
    fn expsum_bound_values() {
        // b=10, l=9: 10(1 + log 18) + 29
        let e = expsum_bound(10, 9, 128).unwrap();
        assert_close(&e, 67.90371757896165, 1e-12);
        // b=3, l=3: 3(1 + log 6) + 11
        let e = expsum_bound(3, 3, 128).unwrap();
        assert_close(&e, 19.375278407684164, 1e-12);
        // l below 3 is out of the lemma's range
        assert!(expsum_bound(5, 2, 128).is_err());
        assert!(expsum_bound(5, 6, 128).is_err());
    }

    #[test]
    fn one_missing_bound_values() {
        let b111 = lower_bound_one_missing(111, 128).unwrap();
        assert_close(&b111, 0.5004080012065093, 1e-12);
        assert!(b111.compare_threshold(&rat("1/2")) == ThresholdRelation::Above);

        let b110 = lower_bound_one_missing(110, 128).unwrap();
        assert!(b110.compare_threshold(&rat("1/2")) == ThresholdRelation::Below);

        // vacuous at the smallest base
        let b3 = lower_bound_one_missing(3, 128).unwrap();
        assert!(b3.hi_rational() < rat("0"));
        assert_close(&b3, -1.198054355693269, 1e-12);

        assert!(lower_bound_one_missing(2, 128).is_err());
    }

    #[test]
    fn one_missing_bound_is_below_dimension() {
        for b in [3u32, 5, 17, 111, 1000] {
            let bound = lower_bound_one_missing(b, 128).unwrap();
            let log_b = Enclosure::from_int(b as i64, 128).ln().unwrap();
            let log_bm1 = Enclosure::from_int(b as i64 - 1, 128).ln().unwrap();
            let dim = log_bm1.div(&log_b).unwrap();
            assert!(bound.certainly_lt(&dim), "correction term must be positive at b={b}");
        }
    }

    #[test]
    fn one_missing_bound_is_monotone_on_scan() {
        let mut prev = lower_bound_one_missing(3, 128).unwrap();
        for b in 4..=2000u32 {
            let cur = lower_bound_one_missing(b, 128).unwrap();
            assert!(
                cur.lo_rational() > prev.lo_rational(),
                "monotonicity broke at b={b}"
            );
            prev = cur;
        }
    }

    #[test]
    fn ap_bound_values() {
        let spec = APDigitSpec::new(0, 1, 9).unwrap();
        let r = lower_bound_ap(10, &spec, 128).unwrap();
        assert_close(&r.dim, 0.9542425094393249, 1e-12);
        assert_close(&r.bound, 0.11599985530421153, 1e-12);
        assert!(!r.coprime_warning);

        // b=3, a=0, d=2, l=2: dim = log2/log3, bound negative
        let spec = APDigitSpec::new(0, 2, 2).unwrap();
        let r = lower_bound_ap(3, &spec, 128).unwrap();
        assert_close(&r.dim, 0.6309297535714574, 1e-12);
        assert!(r.bound.hi_rational() < rat("0"));

        // step sharing a factor with the base gets flagged
        let spec = APDigitSpec::new(0, 2, 3).unwrap();
        let r = lower_bound_ap(6, &spec, 128).unwrap();
        assert!(r.coprime_warning);

        // the full digit set is rejected
        let spec = APDigitSpec::new(0, 1, 4).unwrap();
        assert!(lower_bound_ap(4, &spec, 128).is_err());
    }

    #[test]
    fn smallest_base_thresholds() {
        assert_eq!(
            smallest_base(&rat("1/2"), SmallestBaseKind::OneMissing, 128).unwrap(),
            111
        );
        assert_eq!(
            smallest_base(&rat("1/2"), SmallestBaseKind::OneMissingTimesDim, 128).unwrap(),
            112
        );
        assert!(smallest_base(&rat("3/2"), SmallestBaseKind::OneMissing, 128).is_err());
    }

    #[test]
    fn smallest_base_boundary_is_sharp() {
        // at the returned base the bound clears the threshold and at the
        // previous base it does not
        let t = rat("7/10");
        let b = smallest_base(&t, SmallestBaseKind::OneMissing, 128).unwrap();
        let at = lower_bound_one_missing(b, 128).unwrap();
        let before = lower_bound_one_missing(b - 1, 128).unwrap();
        assert_eq!(at.compare_threshold(&t), ThresholdRelation::Above);
        assert_eq!(before.compare_threshold(&t), ThresholdRelation::Below);
    }

    #[test]
    fn float_evaluation_lies_inside_enclosures() {
        for b in [4u32, 7, 19, 64, 137] {
            let e = lower_bound_one_missing(b, 128).unwrap();
            let b = b as f64;
            let f = ((b - 1.0).ln() - (5.0 + (2.0 * b).ln() + 2.0 / b).ln()) / b.ln();
            assert_close(&e, f, 1e-12);
        }
    }
}
