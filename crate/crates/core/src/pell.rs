//! Solutions of `x^2 - p*y^2 = 1`.
//!
//! The fundamental solution comes from the continued fraction of `sqrt(p)`.
//! Larger solutions are produced from it in two independent ways: the
//! binomial sums obtained by expanding `(x + y*sqrt(p))^s`, and binary
//! exponentiation in the pair algebra `(x, y)*(u, v) = (xu + p*yv, xv + yu)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::roots::integer_sqrt;
use crate::roots::is_perfect_square;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("p = {0} is not a positive nonsquare integer")]
    InvalidInstance(BigUint),
    #[error("({x}, {y}) does not satisfy x^2 - {p}*y^2 = 1")]
    InvalidSolution { p: BigUint, x: BigUint, y: BigUint },
    #[error("solution power must be at least 1")]
    ZeroPower,
}

/// `true` iff `floor(sqrt(p))^2 != p`.
pub fn is_nonsquare(p: &BigUint) -> bool {
    !is_perfect_square(p)
}

/// A radicand `p >= 2` that is not a perfect square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellInstance {
    p: BigUint,
}

impl PellInstance {
    pub fn new(p: impl Into<BigUint>) -> Result<Self, PellError> {
        let p = p.into();
        if p < BigUint::from(2u32) || !is_nonsquare(&p) {
            return Err(PellError::InvalidInstance(p));
        }
        Ok(PellInstance { p })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }
}

impl fmt::Display for PellInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^2 - {}*y^2 = 1", self.p)
    }
}

/// A positive solution `(x, y)` of `x^2 - p*y^2 = 1`, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SolutionWire", into = "SolutionWire")]
pub struct PellSolution {
    p: BigUint,
    x: BigUint,
    y: BigUint,
}

impl PellSolution {
    pub fn new(
        p: impl Into<BigUint>,
        x: impl Into<BigUint>,
        y: impl Into<BigUint>,
    ) -> Result<Self, PellError> {
        let (p, x, y) = (p.into(), x.into(), y.into());
        let ok = !y.is_zero() && &x * &x == &p * &y * &y + 1u32;
        if !ok {
            return Err(PellError::InvalidSolution { p, x, y });
        }
        // The residual check already forces p to be nonsquare: p*y^2 and
        // p*y^2 + 1 cannot both be squares when y >= 1.
        Ok(PellSolution { p, x, y })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }

    /// Product in the pair algebra; both operands must share `p`.
    pub fn compose(&self, other: &PellSolution) -> PellSolution {
        assert_eq!(self.p, other.p, "cannot compose solutions for different p");
        let (x, y) = pair_mul(&self.p, (&self.x, &self.y), (&other.x, &other.y));
        PellSolution { p: self.p.clone(), x, y }
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} y={}", self.x, self.y)
    }
}

#[derive(Serialize, Deserialize)]
struct SolutionWire {
    p: String,
    x: String,
    y: String,
}

impl From<PellSolution> for SolutionWire {
    fn from(s: PellSolution) -> Self {
        SolutionWire { p: s.p.to_string(), x: s.x.to_string(), y: s.y.to_string() }
    }
}

impl TryFrom<SolutionWire> for PellSolution {
    type Error = String;

    fn try_from(w: SolutionWire) -> Result<Self, String> {
        let parse = |s: &str| s.parse::<BigUint>().map_err(|e| format!("{s:?}: {e}"));
        PellSolution::new(parse(&w.p)?, parse(&w.x)?, parse(&w.y)?).map_err(|e| e.to_string())
    }
}

fn pair_mul(p: &BigUint, (x, y): (&BigUint, &BigUint), (u, v): (&BigUint, &BigUint)) -> (BigUint, BigUint) {
    (x * u + p * y * v, x * v + y * u)
}

/// Minimal positive solution, read off the continued fraction of `sqrt(p)`.
///
/// The convergent just before the end of the first period solves the
/// equation when the period is even and solves `x^2 - p*y^2 = -1` when it
/// is odd; in the odd case that convergent is squared in the pair algebra.
pub fn fundamental_solution(inst: &PellInstance) -> PellSolution {
    let p = &inst.p;
    let a0 = integer_sqrt(p);
    let two_a0 = &a0 << 1u32;

    let (mut m, mut d, mut a) = (BigUint::zero(), BigUint::one(), a0.clone());
    // Convergents h_{i-1}/k_{i-1} and h_i/k_i.
    let (mut h_prev, mut h) = (BigUint::one(), a0.clone());
    let (mut k_prev, mut k) = (BigUint::zero(), BigUint::one());
    let mut period = 0u64;
    loop {
        m = &d * &a - &m;
        d = (p - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        period += 1;
        if a == two_a0 {
            break;
        }
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }

    if period % 2 == 0 {
        PellSolution { p: p.clone(), x: h, y: k }
    } else {
        let (x, y) = pair_mul(p, (&h, &k), (&h, &k));
        PellSolution { p: p.clone(), x, y }
    }
}

/// Scans `y = 1..=y_max` for the first `y` making `p*y^2 + 1` a square.
pub fn brute_force_solution(inst: &PellInstance, y_max: u64) -> Option<PellSolution> {
    let p = &inst.p;
    if let Some(small) = p.to_u64().filter(|&p| fits_u128(p, y_max)) {
        return brute_force_u128(small, y_max).map(|(x, y)| PellSolution {
            p: p.clone(),
            x: BigUint::from(x),
            y: BigUint::from(y),
        });
    }
    (1..=y_max).find_map(|y| {
        let y = BigUint::from(y);
        let target = p * &y * &y + 1u32;
        let x = integer_sqrt(&target);
        (&x * &x == target).then(|| PellSolution { p: p.clone(), x, y })
    })
}

fn fits_u128(p: u64, y_max: u64) -> bool {
    // p*y^2 + p*(2y+1) + 1 must stay below 2^126
    let bits = 64 - p.leading_zeros() + 2 * (64 - y_max.leading_zeros());
    bits <= 124
}

// Quadratic residue masks: bit r is set iff r is a square mod 64 / 63 / 65 / 11.
const fn residue_mask(m: u64) -> u128 {
    let mut mask = 0u128;
    let mut r = 0;
    while r < m {
        mask |= 1 << ((r * r) % m);
        r += 1;
    }
    mask
}

const SQ64: u128 = residue_mask(64);
const SQ63: u128 = residue_mask(63);
const SQ65: u128 = residue_mask(65);
const SQ11: u128 = residue_mask(11);

fn square_root_u128(n: u128) -> Option<u128> {
    if SQ64 >> (n % 64) & 1 == 0 || SQ63 >> (n % 63) & 1 == 0 || SQ65 >> (n % 65) & 1 == 0 || SQ11 >> (n % 11) & 1 == 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Same scan as the big-integer path, on machine words.
fn brute_force_u128(p: u64, y_max: u64) -> Option<(u128, u64)> {
    let p = u128::from(p);
    // target = p*y^2 + 1, advanced by p*(2y + 1)
    let mut target = p + 1;
    for y in 1..=y_max {
        if let Some(x) = square_root_u128(target) {
            return Some((x, y));
        }
        target += p * (2 * u128::from(y) + 1);
    }
    None
}

fn binomial_row(s: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(s as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..s {
        c = c * (s - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// `s`-th solution via the two binomial sums
/// `x_s = sum C(s,2k) p^k y^2k x^(s-2k)` and
/// `y_s = sum C(s,2k+1) p^k y^(2k+1) x^(s-1-2k)`.
pub fn amplify_binomial(base: &PellSolution, s: u32) -> Result<PellSolution, PellError> {
    if s == 0 {
        return Err(PellError::ZeroPower);
    }
    let (p, x1, y1) = (&base.p, &base.x, &base.y);
    let binom = binomial_row(s);

    let mut xs = BigUint::zero();
    for k in 0..=s / 2 {
        xs += &binom[(2 * k) as usize] * p.pow(k) * y1.pow(2 * k) * x1.pow(s - 2 * k);
    }
    let mut ys = BigUint::zero();
    for k in 0..=(s - 1) / 2 {
        ys += &binom[(2 * k + 1) as usize] * p.pow(k) * y1.pow(2 * k + 1) * x1.pow(s - 1 - 2 * k);
    }
    Ok(PellSolution { p: p.clone(), x: xs, y: ys })
}

/// `s`-th solution by square-and-multiply in the pair algebra.
pub fn amplify_power(base: &PellSolution, s: u32) -> Result<PellSolution, PellError> {
    if s == 0 {
        return Err(PellError::ZeroPower);
    }
    let p = &base.p;
    let mut acc: Option<(BigUint, BigUint)> = None;
    let mut sq = (base.x.clone(), base.y.clone());
    let mut e = s;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some((x, y)) => pair_mul(p, (&x, &y), (&sq.0, &sq.1)),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = pair_mul(p, (&sq.0, &sq.1), (&sq.0, &sq.1));
    }
    let (x, y) = acc.expect("s >= 1 sets at least one bit");
    Ok(PellSolution { p: p.clone(), x, y })
}

/// `x^2 - p*y^2` as a signed integer; `1` for every valid solution.
pub fn residual(p: &BigUint, x: &BigUint, y: &BigUint) -> BigInt {
    BigInt::from(x * x) - BigInt::from(p * y * y)
}
