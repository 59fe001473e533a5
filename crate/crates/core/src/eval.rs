//! Certified evaluation of an expansion to a requested number of decimals.
//!
//! Every term ratio factor of the three kernels lies in `(0, 1)`, so
//! `|t_k| <= |z|^k` and the remainder after `K` terms is at most
//! `|z|^K / (1 - |z|)`. That geometric bound, scaled by the prefactor, is the
//! tail bound reported with each result. The digits themselves are checked
//! against `floor(sqrt(p * 10^(2d)))`, which shares no code with the series.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expansion::{SeriesSpec, SeriesSpecWire, SpecParseError};
use crate::fixed::{pow10, BigFixed};
use crate::hyper::{terms, Kernel};
use crate::roots::integer_sqrt;
use crate::wire::RationalWire;

pub const DEFAULT_MAX_DIGITS: u64 = 1_000_000;
pub const MAX_DIGITS_ENV: &str = "PELLROOT_MAX_DIGITS";

/// Up to this many terms the partial sum is formed exactly before rounding.
pub const EXACT_SUM_TERMS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{requested} digits requested but the ceiling is {max}")]
    PrecisionOverflow { requested: u64, max: u64 },
    #[error("{MAX_DIGITS_ENV}={0:?} is not a positive integer")]
    BadCeiling(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub max_digits: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { max_digits: DEFAULT_MAX_DIGITS }
    }
}

impl EvalConfig {
    /// Default ceiling, overridden by `PELLROOT_MAX_DIGITS` when set.
    pub fn from_env() -> Result<Self, EvalError> {
        match std::env::var(MAX_DIGITS_ENV) {
            Err(_) => Ok(EvalConfig::default()),
            Ok(v) => match v.trim().parse::<u64>() {
                Ok(n) if n > 0 => Ok(EvalConfig { max_digits: n }),
                _ => Err(EvalError::BadCeiling(v)),
            },
        }
    }
}

/// Approximate `log10` of a positive integer, good to ~1e-15 relative.
fn log10_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap_or(f64::MAX).log10();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

fn abs_parts(q: &BigRational) -> (BigUint, BigUint) {
    (q.numer().abs().to_biguint().expect("abs"), q.denom().abs().to_biguint().expect("abs"))
}

/// `-log10 |z|`, the asymptotic number of decimals gained per term.
pub fn digits_per_term(spec: &SeriesSpec) -> f64 {
    let (zn, zd) = abs_parts(spec.argument());
    log10_big(&zd) - log10_big(&zn)
}

/// Smallest `K` with `|z|^K / (1 - |z|) <= 10^-(digits+2) * |c| / (1 + |c|)`.
pub fn terms_needed(spec: &SeriesSpec, digits: u64) -> u64 {
    let (zn, zd) = abs_parts(spec.argument());
    let (cn, cd) = abs_parts(spec.prefactor());
    let scale = BigUint::from(10u32).pow(u32::try_from(digits + 2).expect("digit count fits u32"));
    // zn^K (cd + cn) 10^(d+2) zd <= (zd - zn) cn zd^K
    let lhs_const = (&cd + &cn) * &scale * &zd;
    let rhs_const = (&zd - &zn) * &cn;
    let ok = |k: u64| -> bool {
        let k = u32::try_from(k).expect("term count fits u32");
        zn.pow(k) * &lhs_const <= &rhs_const * zd.pow(k)
    };

    let per_term = log10_big(&zd) - log10_big(&zn);
    let need = (digits + 2) as f64 + log10_big(&lhs_const) - log10_big(&(&scale * &zd)) - log10_big(&rhs_const);
    smallest_from(need / per_term, ok)
}

/// Smallest `k >= 1` satisfying a condition that is monotone in `k`,
/// searched outward from a floating-point estimate.
fn smallest_from(estimate: f64, ok: impl Fn(u64) -> bool) -> u64 {
    let mut k = (estimate.ceil() as u64).saturating_sub(1).max(1);
    while !ok(k) {
        k += 1;
    }
    while k > 1 && ok(k - 1) {
        k -= 1;
    }
    k
}

/// Smallest `K >= from` whose tail bound is below `10^-(digits + guard/2)`.
fn terms_for_guard(spec: &SeriesSpec, digits: u32, guard: u32, from: u64) -> u64 {
    let (zn, zd) = abs_parts(spec.argument());
    let (cn, cd) = abs_parts(spec.prefactor());
    // (cn zn^K zd)^2 10^(2 digits + guard) < (cd zd^K (zd - zn))^2
    let lhs_const = {
        let t = &cn * &zd;
        &t * &t * BigUint::from(10u32).pow(2 * digits + guard)
    };
    let rhs_const = {
        let t = &cd * (&zd - &zn);
        &t * &t
    };
    let ok = |k: u64| -> bool {
        let k = u32::try_from(2 * k).expect("term count fits u32");
        zn.pow(k) * &lhs_const < &rhs_const * zd.pow(k)
    };
    let per_term = 2.0 * (log10_big(&zd) - log10_big(&zn));
    smallest_from((log10_big(&lhs_const) - log10_big(&rhs_const)) / per_term, ok).max(from)
}

/// `10 + ceil(log10(K + 1))`.
pub fn guard_digits(terms: u64) -> u32 {
    10 + (terms + 1).to_string().len() as u32 - u32::from(is_power_of_ten(terms + 1))
}

fn is_power_of_ten(mut n: u64) -> bool {
    while n >= 10 && n % 10 == 0 {
        n /= 10;
    }
    n == 1
}

/// `|c| |z|^K / (1 - |z|)`: bound on the error of `c * sum_{k<K} t_k`.
pub fn tail_bound(spec: &SeriesSpec, terms: u64) -> BigRational {
    let z = spec.argument().abs();
    let k = usize::try_from(terms).expect("term count fits usize");
    spec.prefactor().abs() * num_traits::pow(z.clone(), k) / (BigRational::one() - z)
}

/// `floor(sqrt(p) * 10^digits)` as an integer.
pub fn sqrt_oracle_scaled(p: &BigUint, digits: u32) -> BigUint {
    integer_sqrt(&(p * BigUint::from(10u32).pow(2 * digits)))
}

/// `sqrt(p)` truncated to `digits` fractional digits, by integer Newton.
pub fn sqrt_oracle(p: &BigUint, digits: u32) -> String {
    BigFixed::new(BigInt::from(sqrt_oracle_scaled(p, digits)), digits).to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub spec: SeriesSpec,
    pub digits_requested: u32,
    pub guard_digits: u32,
    pub terms_used: u64,
    pub tail_bound: BigRational,
    pub decimal: String,
    pub oracle_agrees: bool,
}

/// `c * sum_{k<K} t_k` at `scale` places, floored.
fn fixed_value(spec: &SeriesSpec, count: u64, scale: u32) -> BigFixed {
    let z = spec.argument();
    let c = spec.prefactor();
    if count <= EXACT_SUM_TERMS {
        let sum = terms(spec.family(), z).take(count as usize).fold(BigRational::zero(), |acc, t| acc + t);
        let v = c * sum;
        return BigFixed::new((v.numer() * pow10(scale)).div_floor(v.denom()), scale);
    }
    // Truncated term recurrence; each step adds at most one unit of error and
    // the contraction by |z| keeps the per-term error below 1/(1-|z|) units.
    let kernel: Kernel = spec.family().kernel();
    let mut term = pow10(scale);
    let mut sum = BigFixed::zero(scale);
    for k in 0..count {
        sum += &BigFixed::new(term.clone(), scale);
        if k + 1 < count {
            let r = z * kernel.term_ratio(k);
            term = term * r.numer() / r.denom();
        }
    }
    sum.mul_rational_floor(c)
}

fn agrees_within_one_ulp(a: &str, b: &str) -> bool {
    let parse = |s: &str| s.replace('.', "").parse::<BigInt>().ok();
    match (parse(a), parse(b)) {
        (Some(x), Some(y)) => a.len() == b.len() && (x - y).abs() <= BigInt::one(),
        _ => false,
    }
}

/// Sums enough terms for `digits` certified decimals of `sqrt(p)`.
///
/// Starts from [`terms_needed`] and keeps adding terms until the tail bound
/// is below `10^-(digits + guard/2)`; sums at `digits + guard` places,
/// multiplies by the prefactor, then truncates.
pub fn evaluate(spec: &SeriesSpec, digits: u32, config: &EvalConfig) -> Result<EvalReport, EvalError> {
    if u64::from(digits) > config.max_digits {
        return Err(EvalError::PrecisionOverflow { requested: digits.into(), max: config.max_digits });
    }
    let mut count = terms_needed(spec, digits.into());
    let guard = loop {
        let guard = guard_digits(count);
        let next = terms_for_guard(spec, digits, guard, count);
        if guard_digits(next) == guard {
            count = next;
            break guard;
        }
        count = next;
    };
    let bound = tail_bound(spec, count);

    let value = fixed_value(spec, count, digits + guard).floor_to(digits);
    let decimal = value.to_string();
    let oracle = sqrt_oracle(spec.p(), digits);
    Ok(EvalReport {
        spec: spec.clone(),
        digits_requested: digits,
        guard_digits: guard,
        terms_used: count,
        tail_bound: bound,
        oracle_agrees: agrees_within_one_ulp(&decimal, &oracle),
        decimal,
    })
}

/// Number of fractional digits `d <= cap` for which `|approx - sqrt(p)| < 10^-d`
/// is certain.
fn certified_digits(p: &BigUint, approx: &BigRational, cap: u32) -> u32 {
    let work = cap + 5;
    let root = BigInt::from(sqrt_oracle_scaled(p, work));
    let unit = pow10(work);
    // sqrt(p) in [root, root + 1) / unit
    let err = (approx - BigRational::new(root, unit.clone())).abs() + BigRational::new(BigInt::one(), unit);
    // largest d with err * 10^d < 1
    let (en, ed) = (err.numer().clone(), err.denom().clone());
    let mut d = (ed.to_string().len() as i64 - en.to_string().len() as i64 - 1).max(0) as u32;
    while d > 0 && &en * pow10(d) >= ed {
        d -= 1;
    }
    while d < cap && &en * pow10(d + 1) < ed {
        d += 1;
    }
    if &en * pow10(d) >= ed {
        return 0;
    }
    d.min(cap)
}

/// `(k, correct digits of c * sum_{j<k} t_j)` for `k = 1..=max_terms`,
/// measured against the integer-Newton oracle at `precision` places.
pub fn convergence_table_at(spec: &SeriesSpec, max_terms: u64, precision: u32) -> Vec<(u64, u32)> {
    let c = spec.prefactor();
    let mut sum = BigRational::zero();
    terms(spec.family(), spec.argument())
        .take(max_terms as usize)
        .enumerate()
        .map(|(i, t)| {
            sum += t;
            (i as u64 + 1, certified_digits(spec.p(), &(c * &sum), precision))
        })
        .collect()
}

/// As [`convergence_table_at`], with the oracle precision chosen so the
/// table only saturates once `max_terms` terms have been summed.
pub fn convergence_table(spec: &SeriesSpec, max_terms: u64) -> Vec<(u64, u32)> {
    let precision = (max_terms as f64 * (digits_per_term(spec) + 1.0)).ceil() as u32 + 20;
    convergence_table_at(spec, max_terms, precision)
}

/// Serialized form of [`EvalReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalReportWire {
    pub spec: SeriesSpecWire,
    pub digits: u32,
    pub terms_used: u64,
    pub tail_bound: RationalWire,
    pub decimal: String,
    pub oracle_agrees: bool,
}

#[derive(Debug, Error)]
pub enum ReportParseError {
    #[error(transparent)]
    Spec(#[from] SpecParseError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Wire(#[from] crate::wire::WireError),
    #[error("decimal {0:?} does not carry the stated number of digits")]
    BadDecimal(String),
}

impl From<&EvalReport> for EvalReportWire {
    fn from(r: &EvalReport) -> Self {
        EvalReportWire {
            spec: SeriesSpecWire::from(&r.spec),
            digits: r.digits_requested,
            terms_used: r.terms_used,
            tail_bound: RationalWire::from_rational(&r.tail_bound),
            decimal: r.decimal.clone(),
            oracle_agrees: r.oracle_agrees,
        }
    }
}

impl TryFrom<&EvalReportWire> for EvalReport {
    type Error = ReportParseError;

    fn try_from(w: &EvalReportWire) -> Result<Self, ReportParseError> {
        let spec = SeriesSpec::try_from(&w.spec)?;
        let frac = w.decimal.split_once('.').map_or(0, |(_, f)| f.len());
        let well_formed = w.decimal.bytes().all(|b| b.is_ascii_digit() || b == b'.')
            && frac == w.digits as usize
            && (w.digits > 0) == w.decimal.contains('.');
        if !well_formed {
            return Err(ReportParseError::BadDecimal(w.decimal.clone()));
        }
        Ok(EvalReport {
            spec,
            digits_requested: w.digits,
            guard_digits: guard_digits(w.terms_used),
            terms_used: w.terms_used,
            tail_bound: w.tail_bound.to_rational("tail_bound")?,
            decimal: w.decimal.clone(),
            oracle_agrees: w.oracle_agrees,
        })
    }
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&EvalReportWire::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ReportParseError> {
        let wire: EvalReportWire = serde_json::from_str(s)?;
        EvalReport::try_from(&wire)
    }
}
