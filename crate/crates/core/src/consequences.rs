//! Exponent calculus: turns a certified dimension lower bound `v` and a
//! Hausdorff dimension `kappa` into counting and approximation exponents.
//!
//! With `0 < kappa < 1` and `1/2 < v < 1`:
//!
//! - counting exponent      `E = 2 kappa - (1-kappa)(2v-1)/(1-v)`
//! - counting saving        `rho = (1-kappa)(2v-1)/(1-v)`
//! - intrinsic threshold    `alpha* = E / kappa`
//! - intrinsic saving       `rho_int = 2 - alpha*`
//!
//! plus the product test `v * kappa > 1/2` gating the extrinsic result.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::enclosure::{Enclosure, ThresholdRelation};
use crate::error::{Error, Result};

/// Verdict of the product test against one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdVerdict {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for BdVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BdVerdict::Holds => "holds",
            BdVerdict::Fails => "fails",
            BdVerdict::Inconclusive => "inconclusive",
        })
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn one_enc(prec: u32) -> Enclosure {
    Enclosure::one(prec)
}

fn require_open_unit(x: &Enclosure, name: &str) -> Result<()> {
    let prec = x.precision();
    if !x.certainly_positive() || !x.certainly_lt(&one_enc(prec)) {
        return Err(Error::Parameter(format!("{name} must lie in (0, 1)")));
    }
    Ok(())
}

fn require_above_half(v: &Enclosure) -> Result<()> {
    if v.compare_threshold(&half()) != ThresholdRelation::Above {
        return Err(Error::Parameter(
            "v must certifiably exceed 1/2 for the exponent formulas".into(),
        ));
    }
    Ok(())
}

/// `(1-kappa)(2v-1)/(1-v)`, the power saving in the counting bound.
pub fn rho_counting(kappa: &Enclosure, v: &Enclosure) -> Result<Enclosure> {
    require_open_unit(kappa, "kappa")?;
    require_open_unit(v, "v")?;
    require_above_half(v)?;
    let prec = kappa.precision().max(v.precision());
    let one = one_enc(prec);
    let numer = one.sub(kappa).mul(&v.scale_pow2(1).sub(&one));
    numer.div(&one.sub(v))
}

/// `E = 2 kappa - rho`.
pub fn counting_exponent(kappa: &Enclosure, v: &Enclosure) -> Result<Enclosure> {
    let rho = rho_counting(kappa, v)?;
    Ok(kappa.scale_pow2(1).sub(&rho))
}

/// `(alpha*, rho_int) = (E / kappa, 2 - E / kappa)`.
pub fn intrinsic_threshold(kappa: &Enclosure, v: &Enclosure) -> Result<(Enclosure, Enclosure)> {
    let e = counting_exponent(kappa, v)?;
    let alpha_star = e.div(kappa)?;
    let prec = alpha_star.precision();
    let rho_int = Enclosure::from_int(2, prec).sub(&alpha_star);
    Ok((alpha_star, rho_int))
}

/// Product test `kappa_hat_lower * kappa` against `1/2`.
pub fn bd_check(kappa_hat_lower: &Enclosure, kappa: &Enclosure) -> (Enclosure, BdVerdict) {
    let product = kappa_hat_lower.mul(kappa);
    let verdict = match product.compare_threshold(&half()) {
        ThresholdRelation::Above => BdVerdict::Holds,
        ThresholdRelation::Below => BdVerdict::Fails,
        ThresholdRelation::Straddles => BdVerdict::Inconclusive,
    };
    (product, verdict)
}

/// The target exponent `log b / (2 log(b-1))` for the product test, kept
/// with its numerator and denominator: `tau(b) * (log(b-1)/log b) = 1/2`
/// exactly, which callers can exploit symbolically.
#[derive(Debug, Clone)]
pub struct TauForBd {
    /// `log b`
    pub log_base: Enclosure,
    /// `2 log(b-1)`
    pub double_log_pred: Enclosure,
    /// Their quotient.
    pub value: Enclosure,
}

pub fn tau_for_bd(base: u32, prec: u32) -> Result<TauForBd> {
    if base < 3 {
        return Err(Error::Parameter("tau(b) needs base at least 3".into()));
    }
    let log_base = Enclosure::from_int(base as i64, prec).ln()?;
    let double_log_pred = Enclosure::from_int(base as i64 - 1, prec)
        .ln()?
        .scale_pow2(1);
    let value = log_base.div(&double_log_pred)?;
    Ok(TauForBd {
        log_base,
        double_log_pred,
        value,
    })
}

/// Full exponent report for one `(kappa, v)` pair.
#[derive(Debug, Clone)]
pub struct ExponentReport {
    pub kappa: Enclosure,
    pub v: Enclosure,
    pub counting_exponent: Enclosure,
    pub rho_counting: Enclosure,
    pub alpha_star: Enclosure,
    pub rho_intrinsic: Enclosure,
    pub bd_product: Enclosure,
    pub bd_verdict: BdVerdict,
}

/// Serialized shape, sharing the decimal-pair envelope of certificates.
#[derive(Serialize, Deserialize)]
struct ExponentReportJson {
    system: String,
    kappa: [String; 2],
    v: [String; 2],
    counting_exponent: [String; 2],
    rho_counting: [String; 2],
    alpha_star: [String; 2],
    rho_intrinsic: [String; 2],
    bd_product: [String; 2],
    bd_verdict: String,
    precision_bits: u32,
    tool_version: String,
}

const REPORT_DECIMAL_DIGITS: u32 = 30;

fn pair(e: &Enclosure) -> [String; 2] {
    [
        e.decimal_lo(REPORT_DECIMAL_DIGITS),
        e.decimal_hi(REPORT_DECIMAL_DIGITS),
    ]
}

impl ExponentReport {
    /// Builds the report; `v` is typically the low endpoint of a
    /// certified dimension lower bound.
    pub fn build(kappa: &Enclosure, v: &Enclosure) -> Result<ExponentReport> {
        let rho = rho_counting(kappa, v)?;
        let e = kappa.scale_pow2(1).sub(&rho);
        let alpha_star = e.div(kappa)?;
        let rho_intrinsic = Enclosure::from_int(2, alpha_star.precision()).sub(&alpha_star);
        let (bd_product, bd_verdict) = bd_check(v, kappa);
        Ok(ExponentReport {
            kappa: kappa.clone(),
            v: v.clone(),
            counting_exponent: e,
            rho_counting: rho,
            alpha_star,
            rho_intrinsic,
            bd_product,
            bd_verdict,
        })
    }

    pub fn to_json(&self, system: &str) -> String {
        let json = ExponentReportJson {
            system: system.to_string(),
            kappa: pair(&self.kappa),
            v: pair(&self.v),
            counting_exponent: pair(&self.counting_exponent),
            rho_counting: pair(&self.rho_counting),
            alpha_star: pair(&self.alpha_star),
            rho_intrinsic: pair(&self.rho_intrinsic),
            bd_product: pair(&self.bd_product),
            bd_verdict: self.bd_verdict.to_string(),
            precision_bits: self.kappa.precision(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        serde_json::to_string_pretty(&json).expect("report serializes")
    }
}
