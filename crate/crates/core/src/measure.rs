//! Missing-digit systems and the functions built from them.
//!
//! A [`DigitSystem`] is a base `b` with an exact rational probability
//! vector on the digits `0..b`. From it we evaluate, as enclosures:
//!
//! - the symbol modulus `g(x) = |sum_j p_j e(j x)|`,
//! - cocycle products `S_L(x) = prod_{j<L} g(b^j x)`,
//! - grid sums `F_L(x) = sum_{i<b^L} S_L(x + i/b^L)`,
//! - truncated Fourier coefficients `prod_{j<=J} g(b^-j xi)`,
//! - the empirical dimension diagnostic built from partial coefficient
//!   sums.
//!
//! Arguments arriving as exact rationals are reduced modulo one in
//! rational arithmetic before conversion to enclosures, so scaled
//! arguments like `b^j x` lose nothing to cancellation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enclosure::{unit_circle, ComplexBox, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{format_rational, mod_one, parse_rational};

/// Near-integer guard for the closed-form evaluation path: the branch test
/// inflates `|e(x) - 1|` by this amount before checking for zero.
pub fn default_near_integer_guard() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10)))
}

/// A base together with an exact probability vector on its digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSystem {
    base: u32,
    weights: Vec<BigRational>,
    digits: Vec<u32>,
    one_missing: Option<u32>,
}

/// Digit sets in arithmetic progression: `{a + kd : k = 0, .., l-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct APDigitSpec {
    pub offset: u32,
    pub step: u32,
    pub length: u32,
}

impl APDigitSpec {
    pub fn new(offset: u32, step: u32, length: u32) -> Result<Self> {
        if step < 1 {
            return Err(Error::Parameter("progression step must be at least 1".into()));
        }
        if length < 2 {
            return Err(Error::Parameter(
                "progression length must be at least 2".into(),
            ));
        }
        Ok(APDigitSpec { offset, step, length })
    }

    /// The largest digit `a + d(l-1)`.
    pub fn max_digit(&self) -> u64 {
        self.offset as u64 + self.step as u64 * (self.length as u64 - 1)
    }

    /// Validates the progression against a base and checks the digit set
    /// is a proper subset of `{0, .., b-1}`.
    pub fn validate_against(&self, base: u32) -> Result<()> {
        if self.max_digit() > base as u64 - 1 {
            return Err(Error::Parameter(format!(
                "digit progression exceeds base: {} + {}*({}-1) > {}",
                self.offset,
                self.step,
                self.length,
                base - 1
            )));
        }
        if self.length == base && self.step == 1 {
            return Err(Error::Parameter(
                "digit set must be a proper subset of the base digits".into(),
            ));
        }
        Ok(())
    }

    /// Instantiates the uniform measure on this digit set in base `b`.
    pub fn to_system(&self, base: u32) -> Result<DigitSystem> {
        self.validate_against(base)?;
        let digits: Vec<u32> = (0..self.length)
            .map(|k| self.offset + k * self.step)
            .collect();
        DigitSystem::from_digits(base, &digits)
    }
}

impl DigitSystem {
    /// Builds a system from an explicit weight vector.
    pub fn new(base: u32, weights: Vec<BigRational>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidSystem("base must be at least 2".into()));
        }
        if weights.len() != base as usize {
            return Err(Error::InvalidSystem(format!(
                "expected {base} weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidSystem("weights must be nonnegative".into()));
        }
        let total: BigRational = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidSystem(format!(
                "weights must sum to 1, got {}",
                format_rational(&total)
            )));
        }
        let digits: Vec<u32> = (0..base).filter(|&j| !weights[j as usize].is_zero()).collect();
        if digits.len() < 2 {
            return Err(Error::InvalidSystem(
                "at least two digits must carry positive weight".into(),
            ));
        }
        let uniform_all = BigRational::new(BigInt::one(), BigInt::from(base));
        if digits.len() == base as usize && weights.iter().all(|w| *w == uniform_all) {
            return Err(Error::InvalidSystem(
                "the uniform vector on all digits is excluded".into(),
            ));
        }
        let one_missing = if digits.len() == base as usize - 1 {
            let w = BigRational::new(BigInt::one(), BigInt::from(base - 1));
            let missing = (0..base).find(|&j| weights[j as usize].is_zero());
            match missing {
                Some(a) if digits.iter().all(|&j| weights[j as usize] == w) => Some(a),
                _ => None,
            }
        } else {
            None
        };
        Ok(DigitSystem {
            base,
            weights,
            digits,
            one_missing,
        })
    }

    /// Uniform weights on all base-`b` digits except `a`.
    pub fn make_one_missing(base: u32, missing: u32) -> Result<Self> {
        if base < 3 {
            return Err(Error::InvalidSystem(
                "one-missing systems need base at least 3".into(),
            ));
        }
        if missing > base - 1 {
            return Err(Error::InvalidSystem(format!(
                "missing digit {missing} out of range for base {base}"
            )));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(base - 1));
        let weights = (0..base)
            .map(|j| if j == missing { BigRational::zero() } else { w.clone() })
            .collect();
        DigitSystem::new(base, weights)
    }

    /// Uniform weights on an explicit digit set.
    pub fn from_digits(base: u32, digits: &[u32]) -> Result<Self> {
        let mut set = digits.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.len() != digits.len() {
            return Err(Error::InvalidSystem("duplicate digits".into()));
        }
        if set.iter().any(|&d| d > base - 1) {
            return Err(Error::InvalidSystem("digit out of range".into()));
        }
        if set.is_empty() {
            return Err(Error::InvalidSystem("empty digit set".into()));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(set.len() as u32));
        let mut weights = vec![BigRational::zero(); base as usize];
        for &d in &set {
            weights[d as usize] = w.clone();
        }
        DigitSystem::new(base, weights)
    }

    /// Parses the compact text form: `b=5 missing=1`, `b=10 digits=0,2,4`,
    /// or `b=4 probs=1/2,1/4,1/4,0`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut base: Option<u32> = None;
        let mut missing: Option<u32> = None;
        let mut digits: Option<Vec<u32>> = None;
        let mut probs: Option<Vec<BigRational>> = None;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {token:?}")))?;
            match key {
                "b" => {
                    base = Some(
                        value
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad base {value:?}")))?,
                    )
                }
                "missing" => {
                    missing = Some(
                        value
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad missing digit {value:?}")))?,
                    )
                }
                "digits" => {
                    let parsed: std::result::Result<Vec<u32>, _> =
                        value.split(',').map(|d| d.trim().parse()).collect();
                    digits =
                        Some(parsed.map_err(|_| Error::Parse(format!("bad digit list {value:?}")))?);
                }
                "probs" => {
                    let parsed: Result<Vec<BigRational>> =
                        value.split(',').map(parse_rational).collect();
                    probs = Some(parsed?);
                }
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let base = base.ok_or_else(|| Error::Parse("system needs b=<base>".into()))?;
        match (missing, digits, probs) {
            (Some(a), None, None) => DigitSystem::make_one_missing(base, a),
            (None, Some(d), None) => DigitSystem::from_digits(base, &d),
            (None, None, Some(p)) => DigitSystem::new(base, p),
            _ => Err(Error::Parse(
                "exactly one of missing=, digits=, probs= is required".into(),
            )),
        }
    }

    /// Canonical compact text form, inverse of [`DigitSystem::parse`].
    pub fn canonical_string(&self) -> String {
        if let Some(a) = self.one_missing {
            return format!("b={} missing={}", self.base, a);
        }
        let uniform = BigRational::new(BigInt::one(), BigInt::from(self.digits.len() as u32));
        if self
            .digits
            .iter()
            .all(|&j| self.weights[j as usize] == uniform)
        {
            let list: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            return format!("b={} digits={}", self.base, list.join(","));
        }
        let list: Vec<String> = self.weights.iter().map(format_rational).collect();
        format!("b={} probs={}", self.base, list.join(","))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// The missing digit when the weights are uniform with one digit
    /// removed; the closed-form evaluation path applies exactly then.
    pub fn one_missing_digit(&self) -> Option<u32> {
        self.one_missing
    }

    /// `b^k` as a big integer.
    pub fn base_pow(&self, k: u32) -> BigInt {
        BigInt::from(self.base).pow(k)
    }

    /// Enclosure of `g(x) = |sum_j p_j e(j x)|` with the default guard.
    pub fn symbol_modulus(&self, x: &Enclosure) -> Enclosure {
        self.symbol_modulus_with_guard(x, &default_near_integer_guard())
    }

    /// As [`DigitSystem::symbol_modulus`] with an explicit near-integer
    /// guard for the closed-form branch test.
    pub fn symbol_modulus_with_guard(&self, x: &Enclosure, guard: &BigRational) -> Enclosure {
        if self.one_missing.is_some() {
            let z = unit_circle(x);
            let zm1 = z.sub_one();
            let denom = zm1.modulus();
            if denom.widen_rational(guard).contains_zero() {
                self.one_missing_direct(&z)
            } else {
                self.one_missing_closed(&z, &zm1, &denom)
            }
        } else {
            self.symbol_modulus_direct(x)
        }
    }

    /// `g` at an exact rational, reduced modulo one before conversion.
    pub fn symbol_modulus_rational(&self, q: &BigRational, prec: u32) -> Enclosure {
        let t = mod_one(q);
        let x = Enclosure::from_rational(&t, prec);
        self.symbol_modulus(&x)
    }

    /// Direct-sum evaluation `|sum_j p_j e(j x)|`, valid for every system.
    pub fn symbol_modulus_direct(&self, x: &Enclosure) -> Enclosure {
        if self.one_missing.is_some() {
            let z = unit_circle(x);
            return self.one_missing_direct(&z);
        }
        let prec = x.precision();
        let z = unit_circle(x);
        let mut power = ComplexBox::one(prec);
        let mut sum = ComplexBox::zero(prec);
        for j in 0..self.base {
            let w = &self.weights[j as usize];
            if !w.is_zero() {
                sum = sum.add(&power.mul_real(&Enclosure::from_rational(w, prec)));
            }
            if j + 1 < self.base {
                power = power.mul(&z);
            }
        }
        sum.modulus().clamp_int(0, 1)
    }

    /// Closed-form evaluation for uniform one-missing systems; `None` when
    /// the system is not one-missing or the argument is too close to an
    /// integer for the geometric-series denominator.
    pub fn symbol_modulus_closed(&self, x: &Enclosure) -> Option<Enclosure> {
        self.one_missing?;
        let z = unit_circle(x);
        let zm1 = z.sub_one();
        let denom = zm1.modulus();
        if denom
            .widen_rational(&default_near_integer_guard())
            .contains_zero()
        {
            return None;
        }
        Some(self.one_missing_closed(&z, &zm1, &denom))
    }

    /// Direct sum for one-missing systems:
    /// `|sum_{j != a} e(j x)| / (b - 1)`.
    fn one_missing_direct(&self, z: &ComplexBox) -> Enclosure {
        let a = self.one_missing.expect("one-missing path");
        let prec = z.precision();
        let mut power = ComplexBox::one(prec);
        let mut sum = ComplexBox::zero(prec);
        let mut z_a = ComplexBox::one(prec);
        for j in 0..self.base {
            if j == a {
                z_a = power.clone();
            }
            sum = sum.add(&power);
            if j + 1 < self.base {
                power = power.mul(z);
            }
        }
        sum.sub(&z_a)
            .modulus()
            .div_uint(self.base as u64 - 1)
            .clamp_int(0, 1)
    }

    /// Closed form `|(z^b - 1) - z^a (z - 1)| / (|z - 1| (b - 1))`,
    /// the geometric-series rewrite with a real-modulus division.
    fn one_missing_closed(&self, z: &ComplexBox, zm1: &ComplexBox, denom: &Enclosure) -> Enclosure {
        let a = self.one_missing.expect("one-missing path");
        let zb1 = z.powi(self.base).sub_one();
        let numer = zb1.sub(&z.powi(a).mul(zm1));
        let ratio = numer
            .modulus()
            .div(denom)
            .expect("denominator excludes zero");
        ratio.div_uint(self.base as u64 - 1).clamp_int(0, 1)
    }

    /// Enclosure of `S_L(x) = prod_{j=0}^{L-1} g(b^j x)`.
    pub fn cocycle_product(&self, level: u32, x: &Enclosure) -> Enclosure {
        assert!(level >= 1, "cocycle product needs L >= 1");
        let prec = x.precision();
        let mut prod = Enclosure::one(prec);
        for j in 0..level {
            if prod.hi_int().is_zero() {
                break;
            }
            let arg = x.scale_int(&self.base_pow(j));
            prod = prod.mul(&self.symbol_modulus(&arg));
        }
        prod
    }

    /// `S_L` at an exact rational; every factor argument is reduced
    /// modulo one in rational arithmetic first.
    pub fn cocycle_product_rational(&self, level: u32, q: &BigRational, prec: u32) -> Enclosure {
        assert!(level >= 1);
        let mut prod = Enclosure::one(prec);
        let mut arg = q.clone();
        let b = BigRational::from_integer(BigInt::from(self.base));
        for _ in 0..level {
            if prod.hi_int().is_zero() {
                break;
            }
            prod = prod.mul(&self.symbol_modulus_rational(&arg, prec));
            arg *= &b;
        }
        prod
    }

    /// Enclosure of `F_L(x) = sum_{i=0}^{b^L - 1} S_L(x + i/b^L)`, offsets
    /// formed as exact rationals.
    pub fn grid_sum(&self, level: u32, x: &Enclosure) -> Enclosure {
        assert!(level >= 1);
        let prec = x.precision();
        let cells = self.base_pow(level);
        let mut sum = Enclosure::zero(prec);
        let mut i = BigInt::zero();
        while i < cells {
            let offset = BigRational::new(i.clone(), cells.clone());
            let shifted = x.add(&Enclosure::from_rational(&offset, prec));
            sum = sum.add(&self.cocycle_product(level, &shifted));
            i += 1;
        }
        sum
    }

    /// `F_L` at an exact rational via the recursive regrouping
    /// `F_L(x) = T_L(b^L x)` with
    /// `T_d(y) = sum_{c=0}^{b-1} g((y+c)/b) T_{d-1}((y+c)/b)`, which
    /// shares the `g` evaluations common to many terms of the plain sum.
    pub fn grid_sum_rational(&self, level: u32, q: &BigRational, prec: u32) -> Enclosure {
        assert!(level >= 1);
        let y = q * BigRational::from_integer(self.base_pow(level));
        self.tree_sum(level, &y, prec)
    }

    fn tree_sum(&self, depth: u32, y: &BigRational, prec: u32) -> Enclosure {
        if depth == 0 {
            return Enclosure::one(prec);
        }
        let b = BigRational::from_integer(BigInt::from(self.base));
        let mut acc = Enclosure::zero(prec);
        for c in 0..self.base {
            let child = (y + BigRational::from_integer(BigInt::from(c))) / &b;
            let factor = self.symbol_modulus_rational(&child, prec);
            if factor.hi_int().is_zero() {
                continue;
            }
            acc = acc.add(&factor.mul(&self.tree_sum(depth - 1, &child, prec)));
        }
        acc
    }

    /// `log(#D) / log(b)` for uniform weights on the digit set.
    pub fn hausdorff_dimension(&self, prec: u32) -> Result<Enclosure> {
        let uniform = BigRational::new(BigInt::one(), BigInt::from(self.digits.len() as u32));
        if !self
            .digits
            .iter()
            .all(|&j| self.weights[j as usize] == uniform)
        {
            return Err(Error::NonUniformWeights);
        }
        let num = Enclosure::from_int(self.digits.len() as i64, prec).ln()?;
        let den = Enclosure::from_int(self.base as i64, prec).ln()?;
        num.div(&den)
    }

    /// Truncated Fourier coefficient `prod_{j=1}^{J} g(b^-j xi)`.
    ///
    /// Every omitted factor is at most one, so this is an upper estimate
    /// of the true coefficient modulus.
    pub fn fourier_coefficient_truncated(&self, xi: &BigInt, depth: u32, prec: u32) -> Enclosure {
        assert!(depth >= 1, "truncation depth must be at least 1");
        let mut prod = Enclosure::one(prec);
        let mut denom = BigInt::from(self.base);
        for _ in 1..=depth {
            if prod.hi_int().is_zero() {
                break;
            }
            let arg = BigRational::new(xi.clone(), denom.clone());
            prod = prod.mul(&self.symbol_modulus_rational(&arg, prec));
            denom *= self.base;
        }
        prod
    }

    /// Empirical dimension diagnostic
    /// `-log(Q^-1 sum_{n<Q} |coeff_J(n)|) / log Q` from truncated
    /// coefficients.
    pub fn empirical_kappa1(&self, count: u64, depth: u32, prec: u32) -> Result<Enclosure> {
        if count < 2 {
            return Err(Error::Parameter("empirical average needs Q >= 2".into()));
        }
        let mut sum = Enclosure::zero(prec);
        for n in 0..count {
            sum = sum.add(&self.fourier_coefficient_truncated(&BigInt::from(n), depth, prec));
        }
        let avg = sum.div_uint(count);
        let log_avg = avg.ln()?;
        let log_q = Enclosure::from_int(count as i64, prec).ln()?;
        log_avg.neg().div(&log_q)
    }
}
