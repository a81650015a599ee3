//! The embedded verification manifest: the exact parameter grids behind
//! the `reproduce` tables, as data.

use digitdim_core::certify::{Direction, TauValue, Verdict};
use digitdim_core::rational::parse_rational;
use num_rational::BigRational;

pub const MANIFEST_VERSION: u32 = 1;

/// Spot-check bases used by the default (non `--full`) large-base run.
pub const SPOT_CHECK_BASES: &[u32] = &[7, 8, 9, 20, 50, 111];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Prop24Small,
    Prop24Exceptional,
    Prop2425Large,
}

impl Table {
    pub fn name(&self) -> &'static str {
        match self {
            Table::Prop24Small => "prop24_small",
            Table::Prop24Exceptional => "prop24_exceptional",
            Table::Prop2425Large => "prop2425_large",
        }
    }

    pub fn parse(s: &str) -> Option<Vec<Table>> {
        match s {
            "prop24_small" => Some(vec![Table::Prop24Small]),
            "prop24_exceptional" => Some(vec![Table::Prop24Exceptional]),
            "prop2425_large" => Some(vec![Table::Prop2425Large]),
            "all" => Some(vec![
                Table::Prop24Small,
                Table::Prop24Exceptional,
                Table::Prop2425Large,
            ]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub table: Table,
    pub base: u32,
    pub missing: u32,
    pub level: u32,
    pub delta: BigRational,
    pub tau: TauValue,
    pub direction: Direction,
    pub expected: Verdict,
}

fn rat(s: &str) -> BigRational {
    parse_rational(s).expect("manifest literal")
}

fn half() -> TauValue {
    TauValue::Rational(rat("1/2"))
}

/// Small-base lower verifications at tau = 1/2: L = 2, delta = 1e-5,
/// except the finer grid for base 5 missing digit 1.
fn prop24_small() -> Vec<ManifestEntry> {
    let mut entries = Vec::new();
    for (base, missing) in [(4u32, 0u32), (5, 0), (5, 1), (5, 2), (6, 0), (6, 1), (6, 2)] {
        let (level, delta) = if (base, missing) == (5, 1) {
            (4, rat("5e-7"))
        } else {
            (2, rat("1e-5"))
        };
        entries.push(ManifestEntry {
            table: Table::Prop24Small,
            base,
            missing,
            level,
            delta,
            tau: half(),
            direction: Direction::Lower,
            expected: Verdict::Pass,
        });
    }
    entries
}

/// Upper verifications at tau = 1/2 certifying the exceptional systems
/// stay below one half, up to the digit-reflection symmetry.
fn prop24_exceptional() -> Vec<ManifestEntry> {
    [(3u32, 0u32), (3, 1), (4, 1)]
        .into_iter()
        .map(|(base, missing)| ManifestEntry {
            table: Table::Prop24Exceptional,
            base,
            missing,
            level: 2,
            delta: rat("1e-4"),
            tau: half(),
            direction: Direction::Upper,
            expected: Verdict::Pass,
        })
        .collect()
}

/// Large-base lower verifications at tau = log b / (2 log(b-1)): bases 7
/// and 8 at L = 2, delta = 1e-5; bases 9 through 111 at L = 1,
/// delta = 1e-4. Digits up to the reflection midpoint only.
fn prop2425_large() -> Vec<ManifestEntry> {
    let mut entries = Vec::new();
    for base in 7u32..=111 {
        let (level, delta) = if base <= 8 { (2, rat("1e-5")) } else { (1, rat("1e-4")) };
        for missing in 0..=(base - 1) / 2 {
            entries.push(ManifestEntry {
                table: Table::Prop2425Large,
                base,
                missing,
                level,
                delta: delta.clone(),
                tau: TauValue::LogRatio { base },
                direction: Direction::Lower,
                expected: Verdict::Pass,
            });
        }
    }
    entries
}

pub fn entries_for(table: Table) -> Vec<ManifestEntry> {
    match table {
        Table::Prop24Small => prop24_small(),
        Table::Prop24Exceptional => prop24_exceptional(),
        Table::Prop2425Large => prop2425_large(),
    }
}
