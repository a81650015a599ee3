//! Certified grid verification.
//!
//! The two-sided bounds on the dimension of a digit system reduce to
//! comparing grid extrema of `F_L` against `b^{(1-tau)L}` with an additive
//! Lipschitz slack covering the gaps between grid points. This module
//! evaluates the grid rigorously, renders the comparison as a three-valued
//! verdict, and packages everything into a self-checking [`Certificate`].

use std::fmt;
use std::ops::Range;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::measure::DigitSystem;
use crate::rational::{format_rational, in_open_unit, parse_rational};

/// Number of fractional decimal digits in serialized endpoints.
const CERT_DECIMAL_DIGITS: u32 = 30;

/// Grid points dispatched to a worker at a time.
const GRID_CHUNK: u64 = 4096;

/// Uniform grid `k * delta` for `k = 0, .., ceil((2 b^L delta)^-1)`; the
/// last point reaches at least `1/(2 b^L)`, covering a fundamental
/// half-period of `F_L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    level: u32,
    delta: BigRational,
}

impl GridSpec {
    pub fn new(level: u32, delta: BigRational) -> Result<Self> {
        if level < 1 {
            return Err(Error::Parameter("grid level must be at least 1".into()));
        }
        if !delta.is_positive() {
            return Err(Error::Parameter("delta must be positive".into()));
        }
        Ok(GridSpec { level, delta })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    /// `ceil((2 b^L delta)^-1) + 1` grid points.
    pub fn count(&self, base: u32) -> u64 {
        let cells = BigInt::from(base).pow(self.level);
        let denom = BigRational::from_integer(cells * 2) * &self.delta;
        let limit = denom.recip();
        let k_max = limit.numer().div_ceil(limit.denom());
        k_max.to_u64().expect("grid size fits u64") + 1
    }
}

/// Outcome of one verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

impl Verdict {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "PASS" => Ok(Verdict::Pass),
            "FAIL" => Ok(Verdict::Fail),
            "INCONCLUSIVE" => Ok(Verdict::Inconclusive),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

/// Which side of the dimension the verification certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// A passing run certifies `kappa_1 >= tau`.
    Lower,
    /// A passing run certifies `kappa_1 < tau`.
    Upper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        })
    }
}

impl Direction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Direction::Lower),
            "upper" => Ok(Direction::Upper),
            other => Err(Error::Parse(format!("unknown direction {other:?}"))),
        }
    }
}

/// The target exponent: either an exact rational or the large-base form
/// `log b / (2 log(b-1))`, which is irrational and kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TauValue {
    Rational(BigRational),
    LogRatio { base: u32 },
}

impl TauValue {
    pub fn to_enclosure(&self, prec: u32) -> Result<Enclosure> {
        match self {
            TauValue::Rational(r) => Ok(Enclosure::from_rational(r, prec)),
            TauValue::LogRatio { base } => {
                if *base < 3 {
                    return Err(Error::Parameter("log-ratio tau needs base >= 3".into()));
                }
                let num = Enclosure::from_int(*base as i64, prec).ln()?;
                let den = Enclosure::from_int(*base as i64 - 1, prec)
                    .ln()?
                    .scale_pow2(1);
                num.div(&den)
            }
        }
    }

    pub fn as_string(&self) -> String {
        match self {
            TauValue::Rational(r) => format_rational(r),
            TauValue::LogRatio { base } => format!("log({})/(2*log({}))", base, base - 1),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("log(") {
            let (b_str, tail) = rest
                .split_once(")/(2*log(")
                .ok_or_else(|| Error::Parse(format!("bad tau form {s:?}")))?;
            let b: u32 = b_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad tau base in {s:?}")))?;
            let expect = format!("{}))", b - 1);
            if tail != expect {
                return Err(Error::Parse(format!("bad tau form {s:?}")));
            }
            return Ok(TauValue::LogRatio { base: b });
        }
        Ok(TauValue::Rational(parse_rational(s)?))
    }

    /// Checks `0 < tau < 1` rigorously.
    fn validate_open_unit(&self, prec: u32) -> Result<()> {
        match self {
            TauValue::Rational(r) => {
                if !in_open_unit(r) {
                    return Err(Error::Parameter(format!(
                        "tau must lie in (0, 1), got {}",
                        format_rational(r)
                    )));
                }
            }
            TauValue::LogRatio { .. } => {
                let t = self.to_enclosure(prec)?;
                if !t.certainly_positive() || !t.certainly_lt(&Enclosure::one(prec)) {
                    return Err(Error::Parameter("tau must lie in (0, 1)".into()));
                }
            }
        }
        Ok(())
    }
}

/// Evaluation options shared by the grid operations.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Working precision in fraction bits.
    pub precision: u32,
    /// Worker threads; zero uses the global default pool.
    pub jobs: usize,
    /// Retry once at doubled precision when a verdict is inconclusive.
    pub retry_inconclusive: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            precision: crate::enclosure::DEFAULT_PRECISION,
            jobs: 0,
            retry_inconclusive: true,
        }
    }
}

impl VerifyOptions {
    pub fn with_precision(precision: u32) -> Self {
        VerifyOptions {
            precision,
            ..Default::default()
        }
    }
}

/// An interval with exact rational endpoints on the decimal grid used in
/// serialized certificates. Constructed by rounding an enclosure outward
/// to [`CERT_DECIMAL_DIGITS`] fractional digits, so printing and
/// re-parsing is lossless and the stored verdict is recomputable exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertInterval {
    lo: BigRational,
    hi: BigRational,
}

impl CertInterval {
    fn of(e: &Enclosure) -> Self {
        let lo = parse_rational(&e.decimal_lo(CERT_DECIMAL_DIGITS)).expect("own output");
        let hi = parse_rational(&e.decimal_hi(CERT_DECIMAL_DIGITS)).expect("own output");
        CertInterval { lo, hi }
    }

    fn from_strings(ends: &[String; 2]) -> Result<Self> {
        let lo = parse_rational(&ends[0])?;
        let hi = parse_rational(&ends[1])?;
        if lo > hi {
            return Err(Error::Parse("endpoint pair out of order".into()));
        }
        Ok(CertInterval { lo, hi })
    }

    fn render(&self) -> [String; 2] {
        [
            format_decimal_directed(&self.lo, CERT_DECIMAL_DIGITS, false),
            format_decimal_directed(&self.hi, CERT_DECIMAL_DIGITS, true),
        ]
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (
            self.lo.to_f64().unwrap_or(f64::NEG_INFINITY),
            self.hi.to_f64().unwrap_or(f64::INFINITY),
        )
    }
}

/// Renders a rational as a fixed-point decimal with directed rounding;
/// exact whenever the denominator divides `10^digits`.
fn format_decimal_directed(r: &BigRational, digits: u32, round_up: bool) -> String {
    let scaled = r * BigRational::from_integer(BigInt::from(10u32).pow(digits));
    let int = if round_up {
        scaled.numer().div_ceil(scaled.denom())
    } else {
        scaled.numer().div_floor(scaled.denom())
    };
    crate::enclosure::format_scaled_decimal_pub(&int, digits)
}

/// A self-contained record of one grid verification. The verdict is
/// decided from, and recomputable from, the decimal-grid intervals stored
/// here via [`Certificate::recompute_verdict`].
#[derive(Debug, Clone)]
pub struct Certificate {
    pub system: String,
    pub level: u32,
    pub delta: BigRational,
    pub tau: TauValue,
    pub direction: Direction,
    pub grid_count: u64,
    pub grid_max: CertInterval,
    pub grid_min: CertInterval,
    pub lipschitz: CertInterval,
    pub slack: CertInterval,
    pub threshold: CertInterval,
    pub verdict: Verdict,
    pub precision_bits: u32,
    pub tool_version: String,
    /// Measured, not part of the serialized form.
    pub wall_time: Duration,
}

/// Serialized shape; field order is the canonical key order.
#[derive(Serialize, Deserialize)]
struct CertificateJson {
    system: String,
    #[serde(rename = "L")]
    level: u32,
    delta: String,
    tau: String,
    direction: String,
    grid_count: u64,
    grid_max: [String; 2],
    grid_min: [String; 2],
    lipschitz: [String; 2],
    slack: [String; 2],
    threshold: [String; 2],
    verdict: String,
    precision_bits: u32,
    tool_version: String,
}

impl Certificate {
    /// Re-derives the verdict from the stored intervals; exact rational
    /// comparisons, bit-identical to the stored verdict.
    pub fn recompute_verdict(&self) -> Verdict {
        let observed = match self.direction {
            Direction::Lower => &self.grid_max,
            Direction::Upper => &self.grid_min,
        };
        decide(self.direction, observed, &self.threshold)
    }

    pub fn to_json(&self) -> String {
        let json = CertificateJson {
            system: self.system.clone(),
            level: self.level,
            delta: format_rational(&self.delta),
            tau: self.tau.as_string(),
            direction: self.direction.to_string(),
            grid_count: self.grid_count,
            grid_max: self.grid_max.render(),
            grid_min: self.grid_min.render(),
            lipschitz: self.lipschitz.render(),
            slack: self.slack.render(),
            threshold: self.threshold.render(),
            verdict: self.verdict.to_string(),
            precision_bits: self.precision_bits,
            tool_version: self.tool_version.clone(),
        };
        serde_json::to_string_pretty(&json).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        let json: CertificateJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad certificate: {e}")))?;
        Ok(Certificate {
            system: json.system,
            level: json.level,
            delta: parse_rational(&json.delta)?,
            tau: TauValue::parse(&json.tau)?,
            direction: Direction::parse(&json.direction)?,
            grid_count: json.grid_count,
            grid_max: CertInterval::from_strings(&json.grid_max)?,
            grid_min: CertInterval::from_strings(&json.grid_min)?,
            lipschitz: CertInterval::from_strings(&json.lipschitz)?,
            slack: CertInterval::from_strings(&json.slack)?,
            threshold: CertInterval::from_strings(&json.threshold)?,
            verdict: Verdict::parse(&json.verdict)?,
            precision_bits: json.precision_bits,
            tool_version: json.tool_version,
            wall_time: Duration::ZERO,
        })
    }
}

/// Certified two-sided bounds on the dimension for one `(L, delta)`.
#[derive(Debug, Clone)]
pub struct BoundBracket {
    /// Enclosure whose lower endpoint is a certified lower bound.
    pub lower: Option<Enclosure>,
    /// Enclosure whose upper endpoint is a certified upper bound; absent
    /// when the grid minimum minus the slack is not certainly positive.
    pub upper: Option<Enclosure>,
    pub level: u32,
    pub delta: BigRational,
}

impl BoundBracket {
    pub fn width_rational(&self) -> Option<BigRational> {
        match (&self.lower, &self.upper) {
            (Some(lo), Some(hi)) => Some(hi.hi_rational() - lo.lo_rational()),
            _ => None,
        }
    }
}

/// `2 pi b^L (b^L - 1)`, an upper bound for the Lipschitz constant of
/// `F_L`.
pub fn lipschitz_bound(sys: &DigitSystem, level: u32, prec: u32) -> Enclosure {
    assert!(level >= 1);
    let cells = sys.base_pow(level);
    let factor = &cells * (&cells - BigInt::one());
    crate::enclosure::pi_enclosure(prec)
        .scale_pow2(1)
        .scale_int(&factor)
}

/// Rigorous enclosures of the max and min of `F_L` over the grid.
///
/// The reduction tracks interval endpoints componentwise, so it is
/// associative and commutative: results are identical for any worker
/// count and chunking.
pub fn grid_extrema(
    sys: &DigitSystem,
    grid: &GridSpec,
    opts: &VerifyOptions,
) -> (Enclosure, Enclosure) {
    grid_extrema_at(sys, grid, opts.precision, opts.jobs)
}

struct Extrema {
    max_lo: BigInt,
    max_hi: BigInt,
    min_lo: BigInt,
    min_hi: BigInt,
}

impl Extrema {
    fn merge(mut self, other: Extrema) -> Extrema {
        self.max_lo = self.max_lo.max(other.max_lo);
        self.max_hi = self.max_hi.max(other.max_hi);
        self.min_lo = self.min_lo.min(other.min_lo);
        self.min_hi = self.min_hi.min(other.min_hi);
        self
    }
}

fn grid_extrema_at(
    sys: &DigitSystem,
    grid: &GridSpec,
    prec: u32,
    jobs: usize,
) -> (Enclosure, Enclosure) {
    let count = grid.count(sys.base());
    let chunks: Vec<Range<u64>> = (0..count)
        .step_by(GRID_CHUNK as usize)
        .map(|start| start..(start + GRID_CHUNK).min(count))
        .collect();

    let eval_chunk = |range: &Range<u64>| -> Extrema {
        let mut acc: Option<Extrema> = None;
        for k in range.clone() {
            let x = BigRational::from_integer(BigInt::from(k)) * grid.delta();
            let value = sys.grid_sum_rational(grid.level(), &x, prec);
            let point = Extrema {
                max_lo: value.lo_int().clone(),
                max_hi: value.hi_int().clone(),
                min_lo: value.lo_int().clone(),
                min_hi: value.hi_int().clone(),
            };
            acc = Some(match acc {
                None => point,
                Some(prev) => prev.merge(point),
            });
        }
        acc.expect("chunk is nonempty")
    };

    let reduced = run_chunks(&chunks, jobs, eval_chunk);
    (
        Enclosure::from_raw(reduced.max_lo, reduced.max_hi, prec),
        Enclosure::from_raw(reduced.min_lo, reduced.min_hi, prec),
    )
}

fn run_chunks<F>(chunks: &[Range<u64>], jobs: usize, eval_chunk: F) -> Extrema
where
    F: Fn(&Range<u64>) -> Extrema + Sync,
{
    use rayon::prelude::*;
    let reduce_all = || {
        chunks
            .par_iter()
            .map(&eval_chunk)
            .reduce_with(Extrema::merge)
            .expect("grid is nonempty")
    };
    if jobs == 0 {
        reduce_all()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool");
        pool.install(reduce_all)
    }
}

/// `b^{(1 - tau) L}` as an enclosure.
fn power_term(sys: &DigitSystem, level: u32, tau: &TauValue, prec: u32) -> Result<Enclosure> {
    let tau_enc = tau.to_enclosure(prec)?;
    let one = Enclosure::one(prec);
    let exponent = one.sub(&tau_enc).scale_int(&BigInt::from(level));
    let ln_b = Enclosure::from_int(sys.base() as i64, prec).ln()?;
    Ok(exponent.mul(&ln_b).exp())
}

fn decide(direction: Direction, observed: &CertInterval, threshold: &CertInterval) -> Verdict {
    match direction {
        Direction::Lower => {
            if observed.hi < threshold.lo {
                Verdict::Pass
            } else if observed.lo >= threshold.hi {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
        Direction::Upper => {
            if observed.lo > threshold.hi {
                Verdict::Pass
            } else if observed.hi <= threshold.lo {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

/// Grid verification of the lower-bound inequality
/// `max_grid F_L < b^{(1-tau)L} - delta b^L (b^L - 1) pi`;
/// a PASS certifies `kappa_1 >= tau`.
pub fn verify_lower(
    sys: &DigitSystem,
    level: u32,
    delta: &BigRational,
    tau: &TauValue,
    opts: &VerifyOptions,
) -> Result<Certificate> {
    verify(sys, Direction::Lower, level, delta, tau, opts)
}

/// Grid verification of the upper-bound inequality
/// `min_grid F_L > b^{(1-tau)L} + 2 delta b^L (b^L - 1) pi`;
/// a PASS certifies `kappa_1 < tau`.
pub fn verify_upper(
    sys: &DigitSystem,
    level: u32,
    delta: &BigRational,
    tau: &TauValue,
    opts: &VerifyOptions,
) -> Result<Certificate> {
    verify(sys, Direction::Upper, level, delta, tau, opts)
}

pub fn verify(
    sys: &DigitSystem,
    direction: Direction,
    level: u32,
    delta: &BigRational,
    tau: &TauValue,
    opts: &VerifyOptions,
) -> Result<Certificate> {
    let grid = GridSpec::new(level, delta.clone())?;
    tau.validate_open_unit(opts.precision)?;
    let started = Instant::now();
    let mut prec = opts.precision;
    let mut attempt = 0;
    loop {
        let (grid_max, grid_min) = grid_extrema_at(sys, &grid, prec, opts.jobs);
        let lipschitz = lipschitz_bound(sys, level, prec);
        // Slack per the printed inequalities: Lip * delta / 2 for the
        // lower test, Lip * delta for the upper test.
        let slack = match direction {
            Direction::Lower => lipschitz.mul(&Enclosure::from_rational(
                &(delta / BigRational::from_integer(BigInt::from(2))),
                prec,
            )),
            Direction::Upper => lipschitz.mul(&Enclosure::from_rational(delta, prec)),
        };
        let base_term = power_term(sys, level, tau, prec)?;
        let threshold = match direction {
            Direction::Lower => base_term.sub(&slack),
            Direction::Upper => base_term.add(&slack),
        };
        if direction == Direction::Lower && !threshold.certainly_positive() {
            return Err(Error::Parameter(
                "threshold is not positive: delta too large for this tau and L".into(),
            ));
        }
        // Round everything outward to the decimal certificate grid first;
        // the verdict is decided from what the certificate will store.
        let grid_max_ci = CertInterval::of(&grid_max);
        let grid_min_ci = CertInterval::of(&grid_min);
        let threshold_ci = CertInterval::of(&threshold);
        let observed = match direction {
            Direction::Lower => &grid_max_ci,
            Direction::Upper => &grid_min_ci,
        };
        let verdict = decide(direction, observed, &threshold_ci);
        if verdict == Verdict::Inconclusive && opts.retry_inconclusive && attempt == 0 {
            attempt = 1;
            prec *= 2;
            continue;
        }
        return Ok(Certificate {
            system: sys.canonical_string(),
            level,
            delta: delta.clone(),
            tau: tau.clone(),
            direction,
            grid_count: grid.count(sys.base()),
            grid_max: grid_max_ci,
            grid_min: grid_min_ci,
            lipschitz: CertInterval::of(&lipschitz),
            slack: CertInterval::of(&slack),
            threshold: threshold_ci,
            verdict,
            precision_bits: prec,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time: started.elapsed(),
        });
    }
}

/// Two-sided dimension bounds from one grid pass:
///
/// - lower bound: `-log(b^-L (grid_max + Lip delta/2)) / (L log b)` taken
///   at the upper end of the inner enclosure;
/// - upper bound: same with the grid minimum minus the slack, taken at
///   the lower end, and only when that quantity is certainly positive.
pub fn bound_bracket(
    sys: &DigitSystem,
    level: u32,
    delta: &BigRational,
    opts: &VerifyOptions,
) -> Result<BoundBracket> {
    let grid = GridSpec::new(level, delta.clone())?;
    let prec = opts.precision;
    let (grid_max, grid_min) = grid_extrema_at(sys, &grid, prec, opts.jobs);
    bracket_from_extrema(sys, level, delta, &grid_max, &grid_min, prec)
}

fn bracket_from_extrema(
    sys: &DigitSystem,
    level: u32,
    delta: &BigRational,
    grid_max: &Enclosure,
    grid_min: &Enclosure,
    prec: u32,
) -> Result<BoundBracket> {
    let lipschitz = lipschitz_bound(sys, level, prec);
    let half_delta = delta / BigRational::from_integer(BigInt::from(2));
    let slack = lipschitz.mul(&Enclosure::from_rational(&half_delta, prec));
    let cells = sys.base_pow(level);
    let cells_u64 = cells
        .to_u64()
        .ok_or_else(|| Error::Parameter("b^L too large for bracketing".into()))?;
    let log_scale = Enclosure::from_int(sys.base() as i64, prec)
        .ln()?
        .scale_int(&BigInt::from(level));

    let divisor = Enclosure::from_int(cells_u64 as i64, prec);
    let inner_max = grid_max.add(&slack).div(&divisor)?;
    let lower = Some(inner_max.point_at_hi().ln()?.neg().div(&log_scale)?);

    let inner_min = grid_min.sub(&slack).div(&divisor)?;
    let upper = if inner_min.certainly_positive() {
        Some(inner_min.point_at_lo().ln()?.neg().div(&log_scale)?)
    } else {
        None
    };

    Ok(BoundBracket {
        lower,
        upper,
        level,
        delta: delta.clone(),
    })
}

/// Stopping state of [`refine_dimension`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefineStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub bracket: BoundBracket,
    pub status: RefineStatus,
    pub grid_evals_used: u64,
}

/// Iterates `L = 1, 2, ..` with a delta schedule
/// `delta_L = min(1e-4, b^-2L)`, halved until the Lipschitz slack is below
/// one percent of `F_L(0)`, keeping the best certified endpoints seen,
/// until the bracket width reaches `eps` or the evaluation budget runs
/// out.
pub fn refine_dimension(
    sys: &DigitSystem,
    eps: &BigRational,
    max_grid_evals: u64,
    opts: &VerifyOptions,
) -> Result<RefineOutcome> {
    if !eps.is_positive() {
        return Err(Error::Parameter("eps must be positive".into()));
    }
    let prec = opts.precision;
    let mut used: u64 = 0;
    let mut best_lower: Option<Enclosure> = None;
    let mut best_upper: Option<Enclosure> = None;
    let mut last_level = 1;
    let mut last_delta = parse_rational("1e-4").expect("literal");

    let mut level = 1u32;
    loop {
        let floor_delta = parse_rational("1e-4").expect("literal");
        let schedule = BigRational::new(BigInt::one(), sys.base_pow(2 * level));
        let mut delta = floor_delta.min(schedule);

        // The budget counts F_L evaluations; probing F_L(0) costs one.
        if used >= max_grid_evals {
            break;
        }
        used += 1;
        let probe = sys.grid_sum_rational(level, &BigRational::zero(), prec);
        let hundredth = probe.hi_rational() / BigRational::from_integer(BigInt::from(100));
        loop {
            let slack = lipschitz_bound(sys, level, prec)
                .mul(&Enclosure::from_rational(
                    &(&delta / BigRational::from_integer(BigInt::from(2))),
                    prec,
                ));
            if slack.hi_rational() <= hundredth {
                break;
            }
            delta /= BigRational::from_integer(BigInt::from(2));
        }

        let grid = GridSpec::new(level, delta.clone())?;
        let count = grid.count(sys.base());
        if used + count > max_grid_evals {
            break;
        }
        let (grid_max, grid_min) = grid_extrema_at(sys, &grid, prec, opts.jobs);
        used += count;
        let bracket = bracket_from_extrema(sys, level, &delta, &grid_max, &grid_min, prec)?;
        last_level = level;
        last_delta = delta.clone();
        if let Some(lo) = bracket.lower {
            best_lower = Some(match best_lower {
                Some(prev) if prev.lo_rational() >= lo.lo_rational() => prev,
                _ => lo,
            });
        }
        if let Some(hi) = bracket.upper {
            best_upper = Some(match best_upper {
                Some(prev) if prev.hi_rational() <= hi.hi_rational() => prev,
                _ => hi,
            });
        }
        if let (Some(lo), Some(hi)) = (&best_lower, &best_upper) {
            if hi.hi_rational() - lo.lo_rational() <= *eps {
                return Ok(RefineOutcome {
                    bracket: BoundBracket {
                        lower: best_lower,
                        upper: best_upper,
                        level: last_level,
                        delta: last_delta,
                    },
                    status: RefineStatus::Converged,
                    grid_evals_used: used,
                });
            }
        }
        level += 1;
    }

    Ok(RefineOutcome {
        bracket: BoundBracket {
            lower: best_lower,
            upper: best_upper,
            level: last_level,
            delta: last_delta,
        },
        status: RefineStatus::BudgetExhausted,
        grid_evals_used: used,
    })
}

/// Result of the induction-step oracle.
#[derive(Debug, Clone)]
pub struct InductionCheck {
    pub lhs: Enclosure,
    pub rhs: Enclosure,
    pub holds: bool,
}

/// Checks the induction inequality behind the lower bound:
///
/// `sum_{xi < b^N} prod_{j=1}^{N} g(b^-j (y + xi))
///     <= (max_x sum_{c < b} g(x + c/b))^N`
///
/// The left side is a direct enumeration; the right side is a certified
/// level-one grid maximum (grid max plus slack at `delta = 1e-4`) raised
/// to the `N`-th power.
pub fn induction_sum_check(
    sys: &DigitSystem,
    n: u32,
    y: &BigRational,
    opts: &VerifyOptions,
) -> Result<InductionCheck> {
    const GUARD: u128 = 1_000_000;
    if n < 1 {
        return Err(Error::Parameter("induction depth must be at least 1".into()));
    }
    let size = (sys.base() as u128)
        .checked_pow(n)
        .filter(|s| *s <= GUARD)
        .ok_or(Error::EnumerationGuard {
            size: (sys.base() as u128).saturating_pow(n),
            limit: GUARD,
        })?;
    let prec = opts.precision;

    let mut lhs = Enclosure::zero(prec);
    for xi in 0..size {
        let mut term = Enclosure::one(prec);
        let mut denom = BigInt::from(sys.base());
        let shifted = y + BigRational::from_integer(BigInt::from(xi));
        for _ in 1..=n {
            if term.hi_int().is_zero() {
                break;
            }
            let arg = &shifted / BigRational::from_integer(denom.clone());
            term = term.mul(&sys.symbol_modulus_rational(&arg, prec));
            denom *= sys.base();
        }
        lhs = lhs.add(&term);
    }

    let delta = parse_rational("1e-4").expect("literal");
    let grid = GridSpec::new(1, delta.clone())?;
    let (grid_max, _) = grid_extrema_at(sys, &grid, prec, opts.jobs);
    let slack = lipschitz_bound(sys, 1, prec).mul(&Enclosure::from_rational(
        &(&delta / BigRational::from_integer(BigInt::from(2))),
        prec,
    ));
    let rhs = grid_max.add(&slack).powi(n);

    let holds = lhs.lo_rational() <= rhs.hi_rational();
    Ok(InductionCheck { lhs, rhs, holds })
}
