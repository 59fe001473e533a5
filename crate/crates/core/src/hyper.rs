//! The three hypergeometric kernels behind every expansion, as exact
//! rational term recurrences, plus a numeric check of the identities they
//! come from.
//!
//! A series `sum_k prod (a_i)_k / (k! prod (b_j)_k) z^k` is driven entirely by
//! the ratio of consecutive terms,
//! `t_{k+1} / t_k = z * prod (a_i + k) / ((1 + k) prod (b_j + k))`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::integer_nth_root;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series argument {0} has |z| >= 1")]
    DivergentArgument(BigRational),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The fixed-parameter kernels obtained at exponent one half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesFamily {
    /// `1F0(1/2; ; z)`
    F10Half,
    /// `2F1(1/4, 3/4; 3/2; z)`
    F21Quarter,
    /// `3F2(1/2, 1/6, 5/6; 3/4, 5/4; z)`
    F32Sixth,
}

impl SeriesFamily {
    pub const ALL: [SeriesFamily; 3] =
        [SeriesFamily::F10Half, SeriesFamily::F21Quarter, SeriesFamily::F32Sixth];

    pub fn numerator_params(self) -> Vec<BigRational> {
        match self {
            SeriesFamily::F10Half => vec![rat(1, 2)],
            SeriesFamily::F21Quarter => vec![rat(1, 4), rat(3, 4)],
            SeriesFamily::F32Sixth => vec![rat(1, 2), rat(1, 6), rat(5, 6)],
        }
    }

    pub fn denominator_params(self) -> Vec<BigRational> {
        match self {
            SeriesFamily::F10Half => vec![],
            SeriesFamily::F21Quarter => vec![rat(3, 2)],
            SeriesFamily::F32Sixth => vec![rat(3, 4), rat(5, 4)],
        }
    }

    pub fn kernel(self) -> Kernel {
        Kernel::new(self.numerator_params(), self.denominator_params())
            .expect("fixed family parameters are admissible")
    }

    /// Pochhammer quotient as it is usually typeset, e.g. `(1/4)_k(3/4)_k / (k!(3/2)_k)`.
    pub fn pochhammer_label(self) -> (&'static str, &'static str) {
        match self {
            SeriesFamily::F10Half => ("(1/2)_k", "k!"),
            SeriesFamily::F21Quarter => ("(1/4)_k(3/4)_k", "k!(3/2)_k"),
            SeriesFamily::F32Sixth => ("(1/2)_k(1/6)_k(5/6)_k", "k!(3/4)_k(5/4)_k"),
        }
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesFamily::F10Half => "1F0(1/2;;z)",
            SeriesFamily::F21Quarter => "2F1(1/4,3/4;3/2;z)",
            SeriesFamily::F32Sixth => "3F2(1/2,1/6,5/6;3/4,5/4;z)",
        };
        f.write_str(s)
    }
}

/// A hypergeometric kernel with arbitrary rational parameters.
///
/// Only the three families and the parameter lists used by
/// [`verify_identity`] are ever built; there is no general `pFq` engine here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    numerator: Vec<BigRational>,
    denominator: Vec<BigRational>,
}

impl Kernel {
    pub fn new(numerator: Vec<BigRational>, denominator: Vec<BigRational>) -> Result<Self, SeriesError> {
        for b in &denominator {
            if !b.is_positive() && b.is_integer() {
                return Err(SeriesError::Precondition(format!(
                    "denominator parameter {b} is zero or a negative integer"
                )));
            }
        }
        Ok(Kernel { numerator, denominator })
    }

    /// `prod (a_i + k) / ((1 + k) prod (b_j + k))`.
    pub fn term_ratio(&self, k: u64) -> BigRational {
        let kk = BigRational::from_integer(BigInt::from(k));
        let mut r = BigRational::one() / (&kk + BigRational::one());
        for a in &self.numerator {
            r *= a + &kk;
        }
        for b in &self.denominator {
            r /= b + &kk;
        }
        r
    }

    /// Integer pair `(num, den)` with `den > 0` and
    /// `num / den = z * term_ratio(k)`, not necessarily reduced.
    fn step_factor(&self, z: &BigRational, k: u64) -> (BigInt, BigInt) {
        let kk = BigInt::from(k);
        let mut num = z.numer().clone();
        let mut den: BigInt = z.denom() * (&kk + 1u32);
        for a in &self.numerator {
            num *= a.numer() + a.denom() * &kk;
            den *= a.denom();
        }
        for b in &self.denominator {
            num *= b.denom();
            den *= b.numer() + b.denom() * &kk;
        }
        if den.sign() == Sign::Minus {
            (-num, -den)
        } else {
            (num, den)
        }
    }

    /// Sum at `scale` decimal places, returned as a fixed-point mantissa.
    ///
    /// Each term is carried as a truncated integer and the loop stops once the
    /// geometric tail `|t_k| |z| / (1 - |z|)` is below one unit in the last
    /// place. Valid only when every term-ratio factor past the first term is
    /// at most one in absolute value, which callers guarantee.
    fn fixed_sum(&self, z: &BigRational, scale: u32) -> BigInt {
        let one = BigInt::from(10u32).pow(scale);
        let zabs = z.abs();
        let gap = BigRational::one() - &zabs;
        let mut term = one.clone();
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        loop {
            sum += &term;
            let tail = (BigRational::from_integer(term.abs()) + BigRational::from_integer(BigInt::from(2))) * &zabs / &gap;
            if tail < BigRational::one() || term.is_zero() {
                return sum;
            }
            let (n, d) = self.step_factor(z, k);
            term = term * n / d;
            k += 1;
        }
    }
}

impl SeriesFamily {
    pub fn term_ratio(self, k: u64) -> BigRational {
        self.kernel().term_ratio(k)
    }
}

/// `prod (a_i + k) / ((1 + k) prod (b_j + k))` for one of the three families.
pub fn term_ratio(family: SeriesFamily, k: u64) -> BigRational {
    family.term_ratio(k)
}

/// The `k`-th term of a series, `t_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermState {
    pub k: u64,
    pub value: BigRational,
}

impl TermState {
    pub fn first() -> Self {
        TermState { k: 0, value: BigRational::one() }
    }
}

/// `t_{k+1} = t_k * z * term_ratio(k)`.
pub fn next_term(state: &TermState, family: SeriesFamily, z: &BigRational) -> TermState {
    TermState { k: state.k + 1, value: &state.value * z * family.term_ratio(state.k) }
}

/// Iterator over exact terms `t_0, t_1, ...`.
pub struct Terms {
    kernel: Kernel,
    z: BigRational,
    state: TermState,
}

impl Iterator for Terms {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        let out = self.state.value.clone();
        let next = &self.state.value * &self.z * self.kernel.term_ratio(self.state.k);
        self.state = TermState { k: self.state.k + 1, value: next };
        Some(out)
    }
}

pub fn terms(family: SeriesFamily, z: &BigRational) -> Terms {
    Terms { kernel: family.kernel(), z: z.clone(), state: TermState::first() }
}

fn check_argument(z: &BigRational) -> Result<(), SeriesError> {
    if z.abs() >= BigRational::one() {
        return Err(SeriesError::DivergentArgument(z.clone()));
    }
    Ok(())
}

/// Exact `sum_{k=0}^{count-1} t_k`.
pub fn partial_sum(family: SeriesFamily, z: &BigRational, count: usize) -> Result<BigRational, SeriesError> {
    check_argument(z)?;
    Ok(terms(family, z).take(count).fold(BigRational::zero(), |acc, t| acc + t))
}

/// The three transformation identities underlying the families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identity {
    /// `1F0(a; ; x) = (1 - x)^(-a)`
    Binomial,
    /// `2F1(a/2, 1/2 + a/2; 1 + a; 4x/(1+x)^2) = (1 + x)^a`
    Quadratic,
    /// `3F2(a/3, 1/3 + a/3, 2/3 + a/3; 1/2 + a/2, 1 + a/2; 27x/(4(1+x)^3)) = (1 + x)^a`
    Cubic,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::Binomial, Identity::Quadratic, Identity::Cubic];

    fn kernel(self, a: &BigRational) -> Result<Kernel, SeriesError> {
        let one = BigRational::one();
        match self {
            Identity::Binomial => Kernel::new(vec![a.clone()], vec![]),
            Identity::Quadratic => {
                let half = a / rat(2, 1);
                Kernel::new(vec![half.clone(), rat(1, 2) + &half], vec![one + a])
            }
            Identity::Cubic => {
                let third = a / rat(3, 1);
                let half = a / rat(2, 1);
                Kernel::new(
                    vec![third.clone(), rat(1, 3) + &third, rat(2, 3) + &third],
                    vec![rat(1, 2) + &half, one + &half],
                )
            }
        }
    }

    /// Series argument as a function of `x`.
    pub fn argument(self, x: &BigRational) -> BigRational {
        let one_plus = BigRational::one() + x;
        match self {
            Identity::Binomial => x.clone(),
            Identity::Quadratic => rat(4, 1) * x / (&one_plus * &one_plus),
            Identity::Cubic => rat(27, 1) * x / (rat(4, 1) * &one_plus * &one_plus * &one_plus),
        }
    }

    /// Base `b` and exponent `e` such that the closed form is `b^e`.
    fn closed_form(self, a: &BigRational, x: &BigRational) -> (BigRational, BigRational) {
        match self {
            Identity::Binomial => (BigRational::one() - x, -a.clone()),
            Identity::Quadratic | Identity::Cubic => (BigRational::one() + x, a.clone()),
        }
    }
}

const ROOT_DENOMINATORS: [u32; 5] = [1, 2, 3, 4, 6];

/// `floor(b^e * 10^scale)` for positive rational `b` and exponent `e` with a
/// small denominator, by integer root extraction.
fn rational_power_fixed(base: &BigRational, exponent: &BigRational, scale: u32) -> BigInt {
    let v = u32::try_from(exponent.denom().clone()).expect("small root degree");
    let u = exponent.numer().clone();
    let uabs = u32::try_from(u.abs()).expect("small exponent numerator");
    let b = if u.is_negative() { base.recip() } else { base.clone() };
    let pow = num_traits::pow(b, uabs as usize);
    let num = pow.numer().to_biguint().expect("positive base");
    let den = pow.denom().to_biguint().expect("positive base");
    let scaled = num * BigUint::from(10u32).pow(scale * v) / den;
    BigInt::from(integer_nth_root(&scaled, v))
}

/// Checks one identity numerically: sums the left side and computes the
/// closed-form right side by integer root extraction, both at
/// `digits + 10` places, and reports whether they agree to `10^-digits`.
///
/// `a` must lie in `(-1, 1]` with denominator in `{1, 2, 3, 4, 6}`. The
/// quadratic and cubic identities only hold on the branch through `x = 0`
/// (`|x| < 1`, resp. `x < 1/2`); elsewhere the result is `false`.
pub fn verify_identity(which: Identity, a: &BigRational, x: &BigRational, digits: u32) -> Result<bool, SeriesError> {
    let den = a.denom();
    if !ROOT_DENOMINATORS.iter().any(|d| *den == BigInt::from(*d)) {
        return Err(SeriesError::Precondition(format!("exponent {a} needs a root of unsupported degree")));
    }
    if *a <= rat(-1, 1) || *a > rat(1, 1) {
        return Err(SeriesError::Precondition(format!("exponent {a} outside (-1, 1]")));
    }
    if which != Identity::Binomial && *x <= rat(-1, 1) {
        return Err(SeriesError::Precondition(format!("x = {x} must exceed -1")));
    }
    let w = which.argument(x);
    if w.abs() >= BigRational::one() {
        return Err(SeriesError::Precondition(format!("series argument {w} at x = {x} has modulus >= 1")));
    }
    if which == Identity::Binomial && *x >= BigRational::one() {
        return Err(SeriesError::Precondition(format!("x = {x} must be below 1")));
    }

    let scale = digits + 10;
    let lhs = which.kernel(a)?.fixed_sum(&w, scale);
    let (base, exponent) = which.closed_form(a, x);
    let rhs = rational_power_fixed(&base, &exponent, scale);
    Ok((lhs - rhs).abs() <= BigInt::from(10u32).pow(scale - digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_ratio_at_zero() {
        assert_eq!(term_ratio(SeriesFamily::F10Half, 0), rat(1, 2));
        assert_eq!(term_ratio(SeriesFamily::F21Quarter, 0), rat(1, 8));
        assert_eq!(term_ratio(SeriesFamily::F32Sixth, 0), rat(2, 27));
    }

    #[test]
    fn next_term_examples() {
        let t1 = next_term(&TermState::first(), SeriesFamily::F10Half, &rat(1, 9));
        assert_eq!(t1, TermState { k: 1, value: rat(1, 18) });
        for f in SeriesFamily::ALL {
            assert!(next_term(&TermState::first(), f, &BigRational::zero()).value.is_zero());
        }
        let t1 = next_term(&TermState::first(), SeriesFamily::F21Quarter, &rat(1, 1));
        assert_eq!(t1.value, rat(1, 8));
    }

    #[test]
    fn partial_sum_examples() {
        let zero = BigRational::zero();
        assert_eq!(partial_sum(SeriesFamily::F10Half, &zero, 5).unwrap(), rat(1, 1));
        assert_eq!(partial_sum(SeriesFamily::F10Half, &rat(1, 9), 2).unwrap(), rat(19, 18));
        assert_eq!(partial_sum(SeriesFamily::F32Sixth, &zero, 1).unwrap(), rat(1, 1));
    }

    #[test]
    fn divergent_argument_rejected() {
        for z in [rat(1, 1), rat(-1, 1), rat(3, 2)] {
            assert!(matches!(
                partial_sum(SeriesFamily::F21Quarter, &z, 3),
                Err(SeriesError::DivergentArgument(_))
            ));
        }
    }

    #[test]
    fn terms_match_pochhammer_definition() {
        // (1/2)_k / k! by direct products, checked against the recurrence.
        let z = rat(-3, 7);
        let mut poch = BigRational::one();
        let mut fact = BigRational::one();
        let mut zp = BigRational::one();
        for (k, t) in terms(SeriesFamily::F10Half, &z).take(12).enumerate() {
            assert_eq!(t, &poch / &fact * &zp);
            let kk = rat(k as i64, 1);
            poch *= rat(1, 2) + &kk;
            fact *= kk + rat(1, 1);
            zp *= &z;
        }
    }

    #[test]
    fn identity_examples() {
        let half = rat(1, 2);
        assert!(verify_identity(Identity::Binomial, &half, &rat(1, 2), 30).unwrap());
        assert!(verify_identity(Identity::Quadratic, &half, &rat(1, 3), 30).unwrap());
        assert!(verify_identity(Identity::Cubic, &half, &BigRational::zero(), 30).unwrap());
    }

    #[test]
    fn identity_fails_for_wrong_exponent_pairing() {
        // Same series, different closed form: sum for a = 1/2 vs (1-x)^(-1/3).
        let k = Identity::Binomial.kernel(&rat(1, 2)).unwrap();
        let lhs = k.fixed_sum(&rat(1, 2), 40);
        let rhs = rational_power_fixed(&rat(1, 2), &rat(-1, 3), 40);
        assert!((lhs - rhs).abs() > BigInt::from(10u32).pow(10));
    }

    #[test]
    fn identity_off_principal_branch_is_false() {
        // The quadratic argument is symmetric under x -> 1/x, so at x = 3 the
        // series sums to sqrt(4/3), not sqrt(4).
        assert!(!verify_identity(Identity::Quadratic, &rat(1, 2), &rat(3, 1), 30).unwrap());
        assert!(!verify_identity(Identity::Cubic, &rat(1, 2), &rat(2, 1), 30).unwrap());
    }

    #[test]
    fn identity_preconditions() {
        let half = rat(1, 2);
        assert!(verify_identity(Identity::Binomial, &half, &rat(1, 1), 30).is_err());
        assert!(verify_identity(Identity::Quadratic, &half, &rat(1, 1), 30).is_err());
        assert!(verify_identity(Identity::Quadratic, &half, &rat(-3, 2), 30).is_err());
        assert!(verify_identity(Identity::Cubic, &half, &rat(1, 2), 30).is_err());
        assert!(verify_identity(Identity::Binomial, &rat(1, 5), &rat(1, 2), 30).is_err());
        assert!(verify_identity(Identity::Binomial, &rat(3, 2), &rat(1, 2), 30).is_err());
    }

    #[test]
    fn sqrt_two_from_binomial_identity_matches_isqrt() {
        let k = Identity::Binomial.kernel(&rat(1, 2)).unwrap();
        let sum = k.fixed_sum(&rat(1, 2), 40);
        let root = crate::roots::integer_sqrt(&(BigUint::from(2u32) * BigUint::from(10u32).pow(80)));
        assert!((sum - BigInt::from(root)).abs() < BigInt::from(10u32).pow(5));
    }
}
