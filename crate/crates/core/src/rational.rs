//! Exact-rational helpers: parsing of user-facing numeric literals,
//! reduction modulo one, and canonical formatting.
//!
//! All CLI-facing quantities (delta, tau, probabilities, thresholds) are
//! parsed into exact rationals so that no decimal literal is ever
//! approximated before it reaches the interval layer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parses a numeric literal into an exact rational.
///
/// Accepted forms: integers (`3`, `-7`), fractions (`1/2`, `5/1000000`),
/// decimals (`0.0001`), and scientific notation (`1e-5`, `2.5e-3`).
/// Decimal and scientific forms convert exactly (base-10 digits over a
/// power of ten), never through floating point.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty numeric literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }

    // Split off a scientific exponent if present.
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };

    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let negative = int_part.starts_with('-');
    let digits: String = int_part
        .trim_start_matches(['-', '+'])
        .chars()
        .chain(frac_part.chars())
        .collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad numeric literal {s:?}")));
    }
    let mut n: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad numeric literal {s:?}")))?;
    if negative {
        n = -n;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if shift >= 0 {
        BigRational::from_integer(n * ten.pow(shift as u32))
    } else {
        BigRational::new(n, ten.pow((-shift) as u32))
    };
    Ok(value)
}

/// Canonical string form: `n` for integers, `n/d` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduces a rational modulo one into `[0, 1)`, exactly.
pub fn mod_one(r: &BigRational) -> BigRational {
    let n = r.numer().mod_floor(r.denom());
    BigRational::new(n, r.denom().clone())
}

/// True when `r` is an integer.
pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Floor of a rational as a big integer.
pub fn floor_int(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// `b^k` as a rational for integer `b >= 2`, `k >= 0`.
pub fn pow_u32(base: u32, k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(k))
}

/// Checks `0 < r < 1`.
pub fn in_open_unit(r: &BigRational) -> bool {
    r.is_positive() && *r < BigRational::one()
}
