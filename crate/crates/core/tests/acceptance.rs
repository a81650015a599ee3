//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line (visible with `--nocapture`).
//!
//! Run with `cargo test -p digitdim-core --test acceptance --release`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use digitdim_core::analytic::{lower_bound_one_missing, smallest_base, SmallestBaseKind};
use digitdim_core::certify::{
    bound_bracket, induction_sum_check, verify_lower, verify_upper, TauValue, Verdict,
    VerifyOptions,
};
use digitdim_core::consequences::{bd_check, BdVerdict};
use digitdim_core::enclosure::{ArithOp, ThresholdRelation};
use digitdim_core::measure::DigitSystem;
use digitdim_core::rational::parse_rational;
use digitdim_core::Enclosure;

fn rat(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn half_tau() -> TauValue {
    TauValue::Rational(rat("1/2"))
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

/// Small-base lower verifications: tau = 1/2 at L = 2, delta = 1e-5 for
/// six systems, plus the finer L = 4, delta = 5e-7 run for base 5 with
/// digit 1 removed. Grid sizes are pinned.
#[test]
fn acceptance_1_small_base_lower_verifications() {
    let delta = rat("1e-5");
    let cases: [(u32, u32, u64); 6] = [
        (4, 0, 3126),
        (5, 0, 2001),
        (5, 2, 2001),
        (6, 0, 1390),
        (6, 1, 1390),
        (6, 2, 1390),
    ];
    for (b, a, expect_count) in cases {
        let sys = DigitSystem::make_one_missing(b, a).unwrap();
        let cert = verify_lower(&sys, 2, &delta, &half_tau(), &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "lower verification (b={b}, a={a})");
        assert_eq!(cert.grid_count, expect_count, "grid size (b={b}, a={a})");
        assert_eq!(cert.recompute_verdict(), Verdict::Pass);
    }

    let sys = DigitSystem::make_one_missing(5, 1).unwrap();
    let cert = verify_lower(&sys, 4, &rat("5e-7"), &half_tau(), &opts()).unwrap();
    assert_eq!(cert.verdict, Verdict::Pass, "lower verification (b=5, a=1)");
    assert_eq!(cert.grid_count, 1601);

    println!("acceptance 1: PASS - small-base lower verifications reproduce");
}

/// Upper verifications: tau = 1/2, L = 2, delta = 1e-4 certify the
/// dimension stays below one half for (3,0), (3,1), (4,1).
#[test]
fn acceptance_2_upper_verifications() {
    let delta = rat("1e-4");
    for (b, a) in [(3u32, 0u32), (3, 1), (4, 1)] {
        let sys = DigitSystem::make_one_missing(b, a).unwrap();
        let cert = verify_upper(&sys, 2, &delta, &half_tau(), &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "upper verification (b={b}, a={a})");
        assert_eq!(cert.recompute_verdict(), Verdict::Pass);
    }
    println!("acceptance 2: PASS - upper verifications certify dimension below 1/2");
}

/// Large-base lower verifications at tau = log b / (2 log(b-1)): bases 7
/// and 8 at L = 2, delta = 1e-5, and the spot-check bases 9, 20, 50, 111
/// at L = 1, delta = 1e-4, in each case for every digit up to the
/// symmetry midpoint.
#[test]
fn acceptance_3_large_base_verifications() {
    for b in [7u32, 8] {
        let tau = TauValue::LogRatio { base: b };
        for a in 0..=(b - 1) / 2 {
            let sys = DigitSystem::make_one_missing(b, a).unwrap();
            let cert = verify_lower(&sys, 2, &rat("1e-5"), &tau, &opts()).unwrap();
            assert_eq!(cert.verdict, Verdict::Pass, "large-base (b={b}, a={a})");
        }
    }
    for b in [9u32, 20, 50, 111] {
        let tau = TauValue::LogRatio { base: b };
        for a in 0..=(b - 1) / 2 {
            let sys = DigitSystem::make_one_missing(b, a).unwrap();
            let cert = verify_lower(&sys, 1, &rat("1e-4"), &tau, &opts()).unwrap();
            assert_eq!(cert.verdict, Verdict::Pass, "spot-check (b={b}, a={a})");
        }
    }
    println!("acceptance 3: PASS - large-base verifications at tau(b)");
}

/// Analytic thresholds: the closed-form bound clears one half exactly
/// from base 111, the product test from base 112, certified without
/// straddling at at most 256 bits.
#[test]
fn acceptance_4_analytic_thresholds() {
    let prec = 256;
    let half = rat("1/2");

    let bound111 = lower_bound_one_missing(111, prec).unwrap();
    assert_eq!(bound111.compare_threshold(&half), ThresholdRelation::Above);

    let bound112 = lower_bound_one_missing(112, prec).unwrap();
    let log112 = Enclosure::from_int(112, prec).ln().unwrap();
    let log111 = Enclosure::from_int(111, prec).ln().unwrap();
    let kappa112 = log111.div(&log112).unwrap();
    let (product, verdict) = bd_check(&bound112, &kappa112);
    assert_eq!(verdict, BdVerdict::Holds);
    assert_eq!(product.compare_threshold(&half), ThresholdRelation::Above);

    assert_eq!(
        smallest_base(&half, SmallestBaseKind::OneMissing, 128).unwrap(),
        111
    );
    assert_eq!(
        smallest_base(&half, SmallestBaseKind::OneMissingTimesDim, 128).unwrap(),
        112
    );
    println!("acceptance 4: PASS - analytic thresholds at bases 111 and 112");
}

/// Bracket consistency: every certified lower endpoint stays below every
/// certified upper endpoint across levels 1..3, and the level-1 bracket
/// of the base-3 system lands within 0.01 of [0.37, 0.50].
#[test]
fn acceptance_5_bracket_consistency() {
    let delta = rat("1e-4");
    for (b, a) in [(3u32, 1u32), (4, 0), (5, 0)] {
        let sys = DigitSystem::make_one_missing(b, a).unwrap();
        let brackets: Vec<_> = (1..=3)
            .map(|level| bound_bracket(&sys, level, &delta, &opts()).unwrap())
            .collect();
        for lo_side in &brackets {
            let Some(lower) = &lo_side.lower else { continue };
            for hi_side in &brackets {
                if let Some(upper) = &hi_side.upper {
                    assert!(
                        lower.lo_rational() <= upper.hi_rational(),
                        "bracket crossing (b={b}, a={a}, L={}, L'={})",
                        lo_side.level,
                        hi_side.level
                    );
                }
            }
        }
        if (b, a) == (3, 1) {
            let l1 = &brackets[0];
            let lo = l1.lower.as_ref().unwrap().lo_rational();
            let hi = l1.upper.as_ref().unwrap().hi_rational();
            assert!((lo - rat("0.37")).abs() <= rat("0.01"), "level-1 lower endpoint");
            assert!((hi - rat("0.50")).abs() <= rat("0.01"), "level-1 upper endpoint");
        }
    }
    println!("acceptance 5: PASS - brackets nest across levels");
}

/// Oracle equivalence: the induction inequality holds for all small
/// systems, and partial sums of truncated coefficients agree with a plain
/// floating-point product oracle within enclosure width.
#[test]
fn acceptance_6_oracle_equivalence() {
    let ys = [rat("0"), rat("1/7"), rat("1/3")];
    for b in 3u32..=5 {
        for a in 0..b {
            let sys = DigitSystem::make_one_missing(b, a).unwrap();
            for n in 1..=5u32 {
                for y in &ys {
                    let check = induction_sum_check(&sys, n, y, &opts()).unwrap();
                    assert!(
                        check.holds,
                        "induction inequality (b={b}, a={a}, N={n}, y={y})"
                    );
                }
            }
        }
    }

    // float oracle for sums of truncated coefficients
    let depth = 40u32;
    for b in [3u32, 4] {
        let sys = DigitSystem::make_one_missing(b, 1).unwrap();
        for n in 1..=5u32 {
            let count = (b as u64).pow(n);
            let mut sum = Enclosure::zero(128);
            let mut oracle = 0.0f64;
            for xi in 0..count {
                sum = sum.add(&sys.fourier_coefficient_truncated(
                    &BigInt::from(xi),
                    depth,
                    128,
                ));
                oracle += float_truncated_coefficient(b, 1, xi, depth);
            }
            let tol = 1e-9 * (1.0 + oracle.abs());
            let lo = sum.lo_rational();
            let hi = sum.hi_rational();
            let oracle_lo = BigRational::from_float(oracle - tol).unwrap();
            let oracle_hi = BigRational::from_float(oracle + tol).unwrap();
            assert!(
                lo <= oracle_hi && hi >= oracle_lo,
                "coefficient sum oracle mismatch (b={b}, N={n}): [{lo}, {hi}] vs {oracle}"
            );
        }
    }
    println!("acceptance 6: PASS - induction and coefficient-sum oracles agree");
}

fn float_truncated_coefficient(b: u32, missing: u32, xi: u64, depth: u32) -> f64 {
    let mut prod = 1.0f64;
    for j in 1..=depth {
        let x = xi as f64 / (b as f64).powi(j as i32);
        let mut re = 0.0;
        let mut im = 0.0;
        for d in 0..b {
            if d == missing {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * d as f64 * x;
            re += angle.cos();
            im += angle.sin();
        }
        prod *= (re * re + im * im).sqrt() / (b as f64 - 1.0);
    }
    prod
}

/// Containment fuzzing: 1e5 random point operations never exclude the
/// exact rational result, and the two symbol-modulus evaluation paths
/// intersect on a thousand random rationals per base.
#[test]
fn acceptance_7_containment_fuzzing() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let ops = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div];
    let mut performed = 0u32;
    while performed < 100_000 {
        let a = random_rational(&mut rng);
        let b = random_rational(&mut rng);
        let op = ops[rng.gen_range(0..ops.len())];
        let ea = Enclosure::from_rational(&a, 64);
        let eb = Enclosure::from_rational(&b, 64);
        let exact = match op {
            ArithOp::Add => &a + &b,
            ArithOp::Sub => &a - &b,
            ArithOp::Mul => &a * &b,
            ArithOp::Div => {
                if eb.contains_zero() {
                    assert!(ea.arith(&eb, op).is_err(), "division must reject zero");
                    continue;
                }
                &a / &b
            }
        };
        let result = ea.arith(&eb, op).unwrap();
        assert!(
            result.contains_rational(&exact),
            "containment lost: {a} {op:?} {b}"
        );
        performed += 1;
    }

    for b in 3u32..=12 {
        let sys = DigitSystem::make_one_missing(b, (b - 1) / 2).unwrap();
        let mut checked = 0u32;
        while checked < 1000 {
            let x = Enclosure::from_rational(&random_unit_rational(&mut rng), 128);
            let Some(closed) = sys.symbol_modulus_closed(&x) else {
                continue;
            };
            let direct = sys.symbol_modulus_direct(&x);
            assert!(
                direct.intersects(&closed),
                "evaluation paths disagree at base {b}"
            );
            checked += 1;
        }
    }
    println!("acceptance 7: PASS - containment fuzzing and path consistency");
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let numer = rng.gen_range(-1_000_000i64..=1_000_000);
    let denom = rng.gen_range(1i64..=10_000);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

fn random_unit_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let denom = rng.gen_range(2i64..=100_000);
    let numer = rng.gen_range(1i64..denom);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Determinism: the small-base certificates serialize byte-identically
/// for one, four, and eight workers.
#[test]
fn acceptance_8_determinism_across_workers() {
    let delta = rat("1e-5");
    let mut cases: Vec<(u32, u32, u32, BigRational)> = vec![
        (4, 0, 2, delta.clone()),
        (5, 0, 2, delta.clone()),
        (5, 2, 2, delta.clone()),
        (6, 0, 2, delta.clone()),
        (6, 1, 2, delta.clone()),
        (6, 2, 2, delta.clone()),
    ];
    cases.push((5, 1, 4, rat("5e-7")));
    for (b, a, level, d) in cases {
        let sys = DigitSystem::make_one_missing(b, a).unwrap();
        let mut renditions = Vec::new();
        for jobs in [1usize, 4, 8] {
            let run_opts = VerifyOptions {
                jobs,
                ..VerifyOptions::default()
            };
            let cert = verify_lower(&sys, level, &d, &half_tau(), &run_opts).unwrap();
            assert_eq!(cert.verdict, Verdict::Pass);
            renditions.push(cert.to_json());
        }
        assert_eq!(renditions[0], renditions[1], "jobs 1 vs 4 (b={b}, a={a})");
        assert_eq!(renditions[1], renditions[2], "jobs 4 vs 8 (b={b}, a={a})");
    }
    println!("acceptance 8: PASS - certificates byte-identical across worker counts");
}
