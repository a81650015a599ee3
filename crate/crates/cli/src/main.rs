//! `digitdim`: certified dimension bounds for missing-digit measures.
//!
//! Subcommands: `certify` (single grid verification), `reproduce` (batch
//! verification tables), `dimension` (two-sided refinement), `analytic`
//! (closed-form bounds), `consequences` (exponent reports).
//!
//! Machine-readable results go to stdout; progress and diagnostics go to
//! stderr. Exit codes: 0 pass/converged, 1 fail, 2 inconclusive or budget
//! exhausted, 3 usage or parameter error.

mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use digitdim_core::analytic::{
    expsum_bound, lower_bound_ap, lower_bound_one_missing, smallest_base, SmallestBaseKind,
};
use digitdim_core::certify::{
    refine_dimension, verify, Certificate, Direction, RefineStatus, TauValue, Verdict,
    VerifyOptions,
};
use digitdim_core::consequences::ExponentReport;
use digitdim_core::enclosure::ThresholdRelation;
use digitdim_core::measure::{APDigitSpec, DigitSystem};
use digitdim_core::rational::{format_rational, parse_rational};
use digitdim_core::Enclosure;

use manifest::{entries_for, ManifestEntry, Table, MANIFEST_VERSION, SPOT_CHECK_BASES};

const OUTPUT_DIGITS: u32 = 30;

#[derive(Parser)]
#[command(
    name = "digitdim",
    version,
    about = "Certified bounds on the Fourier l1 dimension of missing-digit measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Lower,
    Upper,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::Lower => Direction::Lower,
            DirectionArg::Upper => Direction::Upper,
        }
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Working precision in binary fraction bits.
    #[arg(long, env = "DIGITDIM_PRECISION", default_value_t = 128)]
    precision: u32,
    /// Worker threads for grid evaluation (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl CommonOpts {
    fn verify_options(&self) -> Result<VerifyOptions> {
        if self.precision < 16 || self.precision > 65536 {
            bail!("precision must lie between 16 and 65536 bits");
        }
        Ok(VerifyOptions {
            precision: self.precision,
            jobs: self.jobs,
            retry_inconclusive: true,
        })
    }

    fn emit(&self, content: &str) -> Result<()> {
        match &self.output {
            Some(path) => {
                let mut file = std::fs::File::create(path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                writeln!(file, "{content}")?;
            }
            None => println!("{content}"),
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one grid verification and write its certificate.
    Certify {
        /// System spec: "b=5 missing=1", "b=10 digits=0,2,4",
        /// "b=4 probs=1/2,1/4,1/4,0".
        #[arg(long)]
        system: String,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        /// Product depth L.
        #[arg(long = "L")]
        level: u32,
        /// Grid spacing, an exact rational ("1e-5", "1/100000").
        #[arg(long)]
        delta: String,
        /// Target exponent: a rational or "log(b)/(2*log(b-1))".
        #[arg(long)]
        tau: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-run a verification table and check the expected verdicts.
    Reproduce {
        /// prop24_small | prop24_exceptional | prop2425_large | all
        #[arg(long)]
        table: Option<String>,
        /// Restrict the large-base table to these bases (comma list).
        #[arg(long)]
        bases: Option<String>,
        /// Run the full large-base sweep instead of the spot-check set.
        #[arg(long)]
        full: bool,
        /// Dump the parameter manifest instead of running anything.
        #[arg(long)]
        print_manifest: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Refine two-sided dimension bounds until a target width.
    Dimension {
        #[arg(long)]
        system: String,
        /// Target bracket width, an exact rational.
        #[arg(long)]
        eps: String,
        /// Budget in grid-point evaluations.
        #[arg(long, default_value_t = 10_000_000)]
        max_grid: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Closed-form analytic bounds.
    Analytic {
        #[command(subcommand)]
        which: AnalyticCmd,
    },
    /// Exponent report chained from a certified or analytic bound.
    Consequences {
        #[arg(long)]
        system: String,
        /// Take v from a lower-bound certificate produced by `certify`.
        #[arg(long)]
        v_from: Option<PathBuf>,
        /// Take v as an explicit rational (assumed certified elsewhere).
        #[arg(long)]
        tau: Option<String>,
        /// Take v from the closed-form one-missing bound.
        #[arg(long)]
        analytic: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum AnalyticCmd {
    /// Lower bound for a one-missing system.
    OneMissing {
        #[arg(long)]
        b: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dimension and lower bound for digits in arithmetic progression.
    Ap {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The exponential-sum bound itself.
    Expsum {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Smallest base whose bound certifiably exceeds a threshold.
    SmallestBase {
        #[arg(long)]
        threshold: String,
        #[arg(long, value_parser = ["one-missing", "one-missing-times-dim"])]
        kind: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2; the exit-code contract reserves 2 for
            // inconclusive results, so usage problems map to 3.
            let _ = e.print();
            let code = if e.use_stderr() { 3 } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Certify {
            system,
            direction,
            level,
            delta,
            tau,
            common,
        } => cmd_certify(&system, direction.into(), level, &delta, &tau, &common),
        Command::Reproduce {
            table,
            bases,
            full,
            print_manifest,
            common,
        } => cmd_reproduce(table.as_deref(), bases.as_deref(), full, print_manifest, &common),
        Command::Dimension {
            system,
            eps,
            max_grid,
            common,
        } => cmd_dimension(&system, &eps, max_grid, &common),
        Command::Analytic { which } => cmd_analytic(which),
        Command::Consequences {
            system,
            v_from,
            tau,
            analytic,
            common,
        } => cmd_consequences(&system, v_from.as_deref(), tau.as_deref(), analytic, &common),
    }
}

fn verdict_exit(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 2,
    }
}

fn pair_json(e: &Enclosure) -> serde_json::Value {
    serde_json::json!([e.decimal_lo(OUTPUT_DIGITS), e.decimal_hi(OUTPUT_DIGITS)])
}

fn certificate_table_line(cert: &Certificate) -> String {
    let (max_lo, max_hi) = cert.grid_max.to_f64_bounds();
    let (min_lo, min_hi) = cert.grid_min.to_f64_bounds();
    let (thr_lo, thr_hi) = cert.threshold.to_f64_bounds();
    format!(
        "{} L={} delta={} tau={} direction={} grid={} max=[{max_lo:.9},{max_hi:.9}] min=[{min_lo:.9},{min_hi:.9}] threshold=[{thr_lo:.9},{thr_hi:.9}] verdict={}",
        cert.system,
        cert.level,
        format_rational(&cert.delta),
        cert.tau.as_string(),
        cert.direction,
        cert.grid_count,
        cert.verdict
    )
}

fn cmd_certify(
    system: &str,
    direction: Direction,
    level: u32,
    delta: &str,
    tau: &str,
    common: &CommonOpts,
) -> Result<u8> {
    let sys = DigitSystem::parse(system)?;
    let delta = parse_rational(delta)?;
    let tau = TauValue::parse(tau)?;
    let opts = common.verify_options()?;
    eprintln!(
        "verifying {} direction={} L={} delta={} tau={} ...",
        sys.canonical_string(),
        direction,
        level,
        format_rational(&delta),
        tau.as_string()
    );
    let started = Instant::now();
    let cert = verify(&sys, direction, level, &delta, &tau, &opts)?;
    eprintln!(
        "verdict {} over {} grid points in {:.1?}",
        cert.verdict,
        cert.grid_count,
        started.elapsed()
    );
    let rendered = match common.format {
        Format::Json => cert.to_json(),
        Format::Table => certificate_table_line(&cert),
    };
    common.emit(&rendered)?;
    Ok(verdict_exit(cert.verdict))
}

fn parse_base_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| anyhow!("bad base {t:?} in --bases"))
        })
        .collect()
}

fn manifest_entry_json(e: &ManifestEntry) -> serde_json::Value {
    serde_json::json!({
        "table": e.table.name(),
        "system": format!("b={} missing={}", e.base, e.missing),
        "L": e.level,
        "delta": format_rational(&e.delta),
        "tau": e.tau.as_string(),
        "direction": e.direction.to_string(),
        "expected": e.expected.to_string(),
    })
}

fn cmd_reproduce(
    table: Option<&str>,
    bases: Option<&str>,
    full: bool,
    print_manifest: bool,
    common: &CommonOpts,
) -> Result<u8> {
    let tables = match table {
        Some(name) => Table::parse(name)
            .ok_or_else(|| anyhow!("unknown table {name:?}; expected prop24_small, prop24_exceptional, prop2425_large, or all"))?,
        None if print_manifest => Table::parse("all").unwrap(),
        None => bail!("--table is required (or use --print-manifest)"),
    };

    let mut entries: Vec<ManifestEntry> = tables.iter().flat_map(|t| entries_for(*t)).collect();

    if print_manifest {
        let doc = serde_json::json!({
            "manifest_version": MANIFEST_VERSION,
            "entries": entries.iter().map(manifest_entry_json).collect::<Vec<_>>(),
        });
        common.emit(&serde_json::to_string_pretty(&doc)?)?;
        return Ok(0);
    }

    // The large-base table defaults to a spot-check subset.
    let base_filter: Option<Vec<u32>> = match bases {
        Some(list) => Some(parse_base_list(list)?),
        None if !full => Some(SPOT_CHECK_BASES.to_vec()),
        None => None,
    };
    if let Some(filter) = &base_filter {
        entries.retain(|e| e.table != Table::Prop2425Large || filter.contains(&e.base));
    }
    if entries.is_empty() {
        bail!("no manifest entries selected");
    }

    let opts = common.verify_options()?;
    let total = entries.len();
    let mut certificates = Vec::with_capacity(total);
    let mut unexpected: Vec<String> = Vec::new();
    let started = Instant::now();
    for (i, entry) in entries.iter().enumerate() {
        let sys = DigitSystem::make_one_missing(entry.base, entry.missing)?;
        let step = Instant::now();
        let cert = verify(
            &sys,
            entry.direction,
            entry.level,
            &entry.delta,
            &entry.tau,
            &opts,
        )?;
        eprintln!(
            "[{}/{}] {} direction={} L={} delta={}: {} ({:.1?})",
            i + 1,
            total,
            cert.system,
            cert.direction,
            cert.level,
            format_rational(&cert.delta),
            cert.verdict,
            step.elapsed()
        );
        if cert.verdict != entry.expected {
            unexpected.push(format!(
                "{} direction={} L={}: got {} expected {}",
                cert.system, cert.direction, cert.level, cert.verdict, entry.expected
            ));
        }
        certificates.push(cert);
    }
    eprintln!("{total} verifications in {:.1?}", started.elapsed());

    let passed = certificates.iter().filter(|c| c.verdict == Verdict::Pass).count();
    let failed = certificates.iter().filter(|c| c.verdict == Verdict::Fail).count();
    let inconclusive = certificates
        .iter()
        .filter(|c| c.verdict == Verdict::Inconclusive)
        .count();

    let rendered = match common.format {
        Format::Json => {
            let cert_values: Vec<serde_json::Value> = certificates
                .iter()
                .map(|c| serde_json::from_str(&c.to_json()).expect("own json"))
                .collect();
            let doc = serde_json::json!({
                "table": table.unwrap_or("all"),
                "manifest_version": MANIFEST_VERSION,
                "certificates": cert_values,
                "summary": {
                    "total": total,
                    "passed": passed,
                    "failed": failed,
                    "inconclusive": inconclusive,
                    "unexpected": unexpected,
                },
            });
            serde_json::to_string_pretty(&doc)?
        }
        Format::Table => {
            let mut lines: Vec<String> =
                certificates.iter().map(certificate_table_line).collect();
            lines.push(format!(
                "summary: total={total} passed={passed} failed={failed} inconclusive={inconclusive} unexpected={}",
                unexpected.len()
            ));
            lines.join("\n")
        }
    };
    common.emit(&rendered)?;

    if unexpected.is_empty() {
        Ok(0)
    } else {
        for line in &unexpected {
            eprintln!("unexpected verdict: {line}");
        }
        Ok(1)
    }
}

fn cmd_dimension(system: &str, eps: &str, max_grid: u64, common: &CommonOpts) -> Result<u8> {
    let sys = DigitSystem::parse(system)?;
    let eps = parse_rational(eps)?;
    let opts = common.verify_options()?;
    eprintln!(
        "refining {} to width {} (budget {} grid evaluations) ...",
        sys.canonical_string(),
        format_rational(&eps),
        max_grid
    );
    let outcome = refine_dimension(&sys, &eps, max_grid, &opts)?;
    let status = match outcome.status {
        RefineStatus::Converged => "converged",
        RefineStatus::BudgetExhausted => "budget_exhausted",
    };
    let bracket = &outcome.bracket;
    let doc = serde_json::json!({
        "system": sys.canonical_string(),
        "eps": format_rational(&eps),
        "status": status,
        "lower": bracket.lower.as_ref().map(pair_json),
        "upper": bracket.upper.as_ref().map(pair_json),
        "L": bracket.level,
        "delta": format_rational(&bracket.delta),
        "grid_evals_used": outcome.grid_evals_used,
        "precision_bits": common.precision,
    });
    common.emit(&serde_json::to_string_pretty(&doc)?)?;
    Ok(match outcome.status {
        RefineStatus::Converged => 0,
        RefineStatus::BudgetExhausted => 2,
    })
}

fn relation_str(r: ThresholdRelation) -> &'static str {
    match r {
        ThresholdRelation::Above => "above",
        ThresholdRelation::Below => "below",
        ThresholdRelation::Straddles => "straddles",
    }
}

fn cmd_analytic(which: AnalyticCmd) -> Result<u8> {
    match which {
        AnalyticCmd::OneMissing { b, common } => {
            let value = lower_bound_one_missing(b, common.precision)?;
            let half = parse_rational("1/2").unwrap();
            let doc = serde_json::json!({
                "kind": "one_missing",
                "b": b,
                "value": pair_json(&value),
                "vs_half": relation_str(value.compare_threshold(&half)),
            });
            common.emit(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        AnalyticCmd::Ap { b, a, d, l, common } => {
            let spec = APDigitSpec::new(a, d, l)?;
            let result = lower_bound_ap(b, &spec, common.precision)?;
            if result.coprime_warning {
                eprintln!(
                    "warning: gcd(d={d}, b={b}) > 1; the underlying sum estimate assumes a coprime step"
                );
            }
            let doc = serde_json::json!({
                "kind": "ap_digits",
                "b": b,
                "a": a,
                "d": d,
                "l": l,
                "dim": pair_json(&result.dim),
                "bound": pair_json(&result.bound),
                "coprime_warning": result.coprime_warning,
            });
            common.emit(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        AnalyticCmd::Expsum { b, l, common } => {
            let value = expsum_bound(b, l, common.precision)?;
            let doc = serde_json::json!({
                "kind": "expsum",
                "b": b,
                "l": l,
                "value": pair_json(&value),
            });
            common.emit(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        AnalyticCmd::SmallestBase {
            threshold,
            kind,
            common,
        } => {
            let threshold = parse_rational(&threshold)?;
            let kind_enum = match kind.as_str() {
                "one-missing" => SmallestBaseKind::OneMissing,
                "one-missing-times-dim" => SmallestBaseKind::OneMissingTimesDim,
                other => bail!("unknown kind {other:?}"),
            };
            let base = smallest_base(&threshold, kind_enum, common.precision)?;
            let doc = serde_json::json!({
                "kind": "smallest_base",
                "threshold": format_rational(&threshold),
                "scan": kind,
                "base": base,
            });
            common.emit(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
    }
}

fn cmd_consequences(
    system: &str,
    v_from: Option<&std::path::Path>,
    tau: Option<&str>,
    analytic: bool,
    common: &CommonOpts,
) -> Result<u8> {
    let sys = DigitSystem::parse(system)?;
    let prec = common.precision;
    let sources = usize::from(v_from.is_some()) + usize::from(tau.is_some()) + usize::from(analytic);
    if sources != 1 {
        bail!("exactly one of --v-from, --tau, --analytic must be given");
    }

    let v: Enclosure = if let Some(path) = v_from {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let cert = Certificate::from_json(&text)?;
        if cert.direction != Direction::Lower {
            bail!("certificate {} is not a lower-bound run", path.display());
        }
        if cert.verdict != Verdict::Pass {
            bail!("certificate {} did not pass", path.display());
        }
        if cert.system != sys.canonical_string() {
            bail!(
                "certificate system {} does not match requested {}",
                cert.system,
                sys.canonical_string()
            );
        }
        if cert.recompute_verdict() != Verdict::Pass {
            bail!("certificate self-check failed");
        }
        cert.tau.to_enclosure(prec)?.point_at_lo()
    } else if let Some(tau) = tau {
        let value: BigRational = parse_rational(tau)?;
        Enclosure::from_rational(&value, prec)
    } else {
        lower_bound_one_missing(sys.base(), prec)?.point_at_lo()
    };

    let kappa = sys.hausdorff_dimension(prec)?;
    let report = ExponentReport::build(&kappa, &v)?;
    common.emit(&report.to_json(&sys.canonical_string()))?;
    Ok(0)
}
