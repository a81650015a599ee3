//! Property tests for the interval layer and the measure functions:
//! containment under fuzzing, inclusion monotonicity, width control, and
//! the algebraic identities of the exponent calculus.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use digitdim_core::certify::{verify_lower, TauValue, Verdict, VerifyOptions};
use digitdim_core::consequences::{counting_exponent, intrinsic_threshold, rho_counting};
use digitdim_core::enclosure::{unit_circle, ArithOp};
use digitdim_core::measure::DigitSystem;
use digitdim_core::rational::parse_rational;
use digitdim_core::Enclosure;

fn big_rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d.max(1)))
}

fn rat(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

prop_compose! {
    fn small_rational()(n in -1_000_000i64..=1_000_000, d in 1i64..=10_000) -> BigRational {
        big_rat(n, d)
    }
}

prop_compose! {
    fn unit_rational()(n in 1i64..=99_999, d in 100_000i64..=100_000) -> BigRational {
        big_rat(n, d)
    }
}

proptest! {
    /// Exact rational results always lie inside the returned enclosure.
    #[test]
    fn arith_contains_exact_result(
        a in small_rational(),
        b in small_rational(),
        op_idx in 0usize..4,
    ) {
        let op = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div][op_idx];
        let ea = Enclosure::from_rational(&a, 64);
        let eb = Enclosure::from_rational(&b, 64);
        match op {
            ArithOp::Div if eb.contains_zero() => {
                prop_assert!(ea.arith(&eb, op).is_err());
            }
            _ => {
                let exact = match op {
                    ArithOp::Add => &a + &b,
                    ArithOp::Sub => &a - &b,
                    ArithOp::Mul => &a * &b,
                    ArithOp::Div => &a / &b,
                };
                prop_assert!(ea.arith(&eb, op).unwrap().contains_rational(&exact));
            }
        }
    }

    /// Ring operations on point inputs stay within four ulps.
    #[test]
    fn point_ops_width_control(
        an in -1_000_000i64..=1_000_000, ad in 0u32..40,
        bn in -1_000_000i64..=1_000_000, bd in 0u32..40,
        op_idx in 0usize..3,
    ) {
        // dyadic rationals are exact points at 64 fraction bits
        let a = BigRational::new(BigInt::from(an), BigInt::from(1u64) << ad.min(40));
        let b = BigRational::new(BigInt::from(bn), BigInt::from(1u64) << bd.min(40));
        let ea = Enclosure::from_rational(&a, 64);
        let eb = Enclosure::from_rational(&b, 64);
        prop_assert!(ea.is_point() && eb.is_point());
        let op = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul][op_idx];
        let r = ea.arith(&eb, op).unwrap();
        prop_assert!(r.width_ulps() <= BigInt::from(4));
    }

    /// Inclusion monotonicity: enlarging the input never shrinks the
    /// output, checked with a strict inflation margin.
    #[test]
    fn unary_ops_are_inclusion_monotone(
        x in small_rational(),
        inflate_num in 1i64..=1000,
    ) {
        let margin = big_rat(inflate_num, 1_000_000);
        let tight = Enclosure::from_rational(&x, 96);
        let wide = tight.widen_rational(&margin);

        // square
        prop_assert!(wide.square().contains(&tight.square()));
        // exp (bounded domain to keep the test fast)
        if x.numer().magnitude() < &(num_bigint::BigUint::from(50_000u32) * x.denom().magnitude()) {
            prop_assert!(wide.exp().contains(&tight.exp()));
        }
        // log and sqrt on positive inputs
        if wide.certainly_positive() {
            prop_assert!(wide.ln().unwrap().contains(&tight.ln().unwrap()));
            prop_assert!(wide.sqrt().unwrap().contains(&tight.sqrt().unwrap()));
        }
        // unit circle componentwise
        let zt = unit_circle(&tight);
        let zw = unit_circle(&wide);
        prop_assert!(zw.re.contains(&zt.re));
        prop_assert!(zw.im.contains(&zt.im));
    }

    /// The unit-circle image stays in the unit square and its modulus
    /// encloses one for point inputs.
    #[test]
    fn unit_circle_bounds(x in small_rational()) {
        let z = unit_circle(&Enclosure::from_rational(&x, 96));
        prop_assert!(z.re.lo_rational() >= big_rat(-1, 1));
        prop_assert!(z.re.hi_rational() <= big_rat(1, 1));
        prop_assert!(z.im.lo_rational() >= big_rat(-1, 1));
        prop_assert!(z.im.hi_rational() <= big_rat(1, 1));
        prop_assert!(z.modulus().contains_rational(&big_rat(1, 1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Both symbol-modulus evaluation paths agree, and the function is
    /// even, across random one-missing systems and rational points.
    #[test]
    fn symbol_modulus_paths_and_evenness(
        b in 3u32..=12,
        a_seed in 0u32..12,
        x in unit_rational(),
    ) {
        let sys = DigitSystem::make_one_missing(b, a_seed % b).unwrap();
        let pos = sys.symbol_modulus_rational(&x, 128);
        let neg = sys.symbol_modulus_rational(&(-&x), 128);
        prop_assert!(pos.intersects(&neg), "evenness");
        prop_assert!(pos.lo_rational() >= big_rat(0, 1));
        prop_assert!(pos.hi_rational() <= big_rat(1, 1));

        let xe = Enclosure::from_rational(&x, 128);
        if let Some(closed) = sys.symbol_modulus_closed(&xe) {
            prop_assert!(sys.symbol_modulus_direct(&xe).intersects(&closed), "paths");
        }
    }

    /// Cocycle products and grid sums are periodic with the right period.
    #[test]
    fn cocycle_and_grid_periodicity(
        b in 3u32..=6,
        a_seed in 0u32..6,
        level in 1u32..=2,
        x in unit_rational(),
    ) {
        let sys = DigitSystem::make_one_missing(b, a_seed % b).unwrap();
        let s0 = sys.cocycle_product_rational(level, &x, 96);
        let s1 = sys.cocycle_product_rational(level, &(&x + big_rat(1, 1)), 96);
        prop_assert!(s0.intersects(&s1), "unit periodicity of the cocycle");

        let cell = BigRational::new(BigInt::from(1), sys.base_pow(level));
        let f0 = sys.grid_sum_rational(level, &x, 96);
        let f1 = sys.grid_sum_rational(level, &(&x + cell), 96);
        prop_assert!(f0.intersects(&f1), "cell periodicity of the grid sum");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Exponent identities: E + rho = 2 kappa and rho_int kappa = rho,
    /// within enclosure overlap, over the valid parameter domain.
    #[test]
    fn exponent_algebraic_identities(
        k_num in 1i64..=999,
        v_num in 1i64..=999,
    ) {
        let kappa_r = big_rat(k_num, 1000);
        // map v into (1/2, 1)
        let v_r = big_rat(500_000 + v_num * 499, 1_000_000);
        let kappa = Enclosure::from_rational(&kappa_r, 96);
        let v = Enclosure::from_rational(&v_r, 96);
        let e = counting_exponent(&kappa, &v).unwrap();
        let rho = rho_counting(&kappa, &v).unwrap();
        prop_assert!(e.add(&rho).intersects(&kappa.scale_pow2(1)), "E + rho = 2 kappa");
        let (alpha, rho_int) = intrinsic_threshold(&kappa, &v).unwrap();
        prop_assert!(rho_int.mul(&kappa).intersects(&rho), "rho_int * kappa = rho");
        let two = Enclosure::from_int(2, 96);
        prop_assert!(two.sub(&alpha).intersects(&rho_int), "2 - alpha* = rho_int");
        prop_assert!(rho.certainly_positive(), "rho > 0 in the open domain");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Plain floating-point evaluation lands inside the analytic
    /// enclosures.
    #[test]
    fn analytic_bounds_contain_float_evaluation(b in 3u32..=5000) {
        let e = digitdim_core::analytic::lower_bound_one_missing(b, 128).unwrap();
        let bf = b as f64;
        let reference = ((bf - 1.0).ln() - (5.0 + (2.0 * bf).ln() + 2.0 / bf).ln()) / bf.ln();
        let lo = e.lo_rational();
        let hi = e.hi_rational();
        let below = BigRational::from_float(reference - 1e-11).unwrap();
        let above = BigRational::from_float(reference + 1e-11).unwrap();
        prop_assert!(lo <= above && hi >= below);
    }
}

/// Shrinking delta never flips a passing lower verification, checked on
/// the published parameter sets.
#[test]
fn verdict_monotone_in_delta() {
    let opts = VerifyOptions::default();

    let sys = DigitSystem::make_one_missing(4, 0).unwrap();
    let tau = TauValue::Rational(rat("1/2"));
    for delta in ["1e-5", "5e-6"] {
        let cert = verify_lower(&sys, 2, &rat(delta), &tau, &opts).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "delta = {delta}");
    }

    let sys = DigitSystem::make_one_missing(9, 0).unwrap();
    let tau = TauValue::LogRatio { base: 9 };
    for delta in ["1e-4", "5e-5"] {
        let cert = verify_lower(&sys, 1, &rat(delta), &tau, &opts).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "delta = {delta}");
    }
}

/// Empirical dimension diagnostic stays below one half for the base-3
/// system, consistent with its certified upper bound.
#[test]
fn empirical_kappa_below_half_for_base_three() {
    let sys = DigitSystem::make_one_missing(3, 1).unwrap();
    let e = sys.empirical_kappa1(729, 60, 128).unwrap();
    assert!(e.hi_rational() < rat("1/2"), "empirical value {e}");
    assert!(e.lo_rational() > rat("0.45"));
}
