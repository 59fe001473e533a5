//! Turns a Pell solution `(n, m)` with `n^2 - p*m^2 = 1` into one of six
//! exact expansions `sqrt(p) = c * F(z)`.
//!
//! | theorem | c      | z                              | kernel |
//! |---------|--------|--------------------------------|--------|
//! | A       | mp/n   | 1/(pm^2+1)                     | 1F0    |
//! | B       | n/m    | -1/(pm^2)                      | 1F0    |
//! | C       | mp/n   | 4pm^2/(pm^2+1)^2               | 2F1    |
//! | D       | n/m    | -4(pm^2+1)/(p^2 m^4)           | 2F1    |
//! | E       | mp/n   | 27p^2m^4/(4(pm^2+1)^3)         | 3F2    |
//! | F       | n/m    | -27(pm^2+1)^2/(4p^3 m^6)       | 3F2    |
//!
//! D, E and F carry a side condition that is exactly `|z| < 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyper::SeriesFamily;
use crate::pell::{amplify_power, fundamental_solution, PellError, PellInstance, PellSolution};
use crate::wire::{RationalWire, WireError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("theorem {theorem} is not applicable for p = {p}, m = {m}")]
    NotApplicable { theorem: Theorem, p: BigUint, m: BigUint },
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error("no solution powers requested")]
    NoPowers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [Theorem::A, Theorem::B, Theorem::C, Theorem::D, Theorem::E, Theorem::F];

    pub fn family(self) -> SeriesFamily {
        match self {
            Theorem::A | Theorem::B => SeriesFamily::F10Half,
            Theorem::C | Theorem::D => SeriesFamily::F21Quarter,
            Theorem::E | Theorem::F => SeriesFamily::F32Sixth,
        }
    }

    /// A, C, E use `c = mp/n` and a positive argument; the others `c = n/m`
    /// and an alternating series.
    pub fn is_alternating(self) -> bool {
        matches!(self, Theorem::B | Theorem::D | Theorem::F)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown theorem label {0:?} (expected A-F)")]
pub struct ParseTheoremError(String);

impl FromStr for Theorem {
    type Err = ParseTheoremError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Theorem::A),
            "B" => Ok(Theorem::B),
            "C" => Ok(Theorem::C),
            "D" => Ok(Theorem::D),
            "E" => Ok(Theorem::E),
            "F" => Ok(Theorem::F),
            _ => Err(ParseTheoremError(s.to_owned())),
        }
    }
}

/// Side condition of `theorem` for radicand `p` and `m >= 1`.
///
/// Boundary equality counts as not applicable.
pub fn applicable(theorem: Theorem, p: &BigUint, m: &BigUint) -> bool {
    let pm2 = p * m * m;
    let q = &pm2 + 1u32;
    match theorem {
        Theorem::A | Theorem::B | Theorem::C => true,
        // p^2 m^4 > 4pm^2 + 4
        Theorem::D => &pm2 * &pm2 > (&pm2 << 2u32) + 4u32,
        // 4(pm^2+1)^3 > 27 p^2 m^4
        Theorem::E => (&q * &q * &q) << 2u32 > &pm2 * &pm2 * 27u32,
        // 4 p^3 m^6 > 27 (pm^2+1)^2
        Theorem::F => (&pm2 * &pm2 * &pm2) << 2u32 > &q * &q * 27u32,
    }
}

/// An exact expansion `sqrt(p) = prefactor * family(argument)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSpec {
    p: BigUint,
    m: BigUint,
    n: BigUint,
    theorem: Theorem,
    prefactor: BigRational,
    argument: BigRational,
}

impl SeriesSpec {
    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn theorem(&self) -> Theorem {
        self.theorem
    }

    pub fn family(&self) -> SeriesFamily {
        self.theorem.family()
    }

    pub fn prefactor(&self) -> &BigRational {
        &self.prefactor
    }

    pub fn argument(&self) -> &BigRational {
        &self.argument
    }

    pub fn solution(&self) -> PellSolution {
        PellSolution::new(self.p.clone(), self.n.clone(), self.m.clone()).expect("spec holds a valid solution")
    }

    /// Display form `\sqrt{p}=\frac{c}{d}\sum_{k=0}^{\infty}\frac{...}{...}\bigg(\frac{a}{b}\bigg)^k`.
    pub fn to_latex(&self) -> String {
        let (top, bottom) = self.family().pochhammer_label();
        let z = &self.argument;
        let sign = if z.is_negative() { "-" } else { "" };
        format!(
            "\\sqrt{{{}}}=\\frac{{{}}}{{{}}}\\sum_{{k=0}}^{{\\infty}}\\frac{{{}}}{{{}}}\\bigg({}\\frac{{{}}}{{{}}}\\bigg)^k",
            self.p,
            self.prefactor.numer(),
            self.prefactor.denom(),
            top,
            bottom,
            sign,
            z.numer().abs(),
            z.denom()
        )
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sqrt({}) = {} * {} at z = {}  [theorem {}, n={}, m={}]",
            self.p,
            self.prefactor,
            self.family(),
            self.argument,
            self.theorem,
            self.n,
            self.m
        )
    }
}

fn int(u: &BigUint) -> BigInt {
    BigInt::from(u.clone())
}

/// Builds the expansion of `theorem` from `sol = (n, m)`.
pub fn build(theorem: Theorem, sol: &PellSolution) -> Result<SeriesSpec, BuildError> {
    let (p, n, m) = (sol.p(), sol.x(), sol.y());
    if !applicable(theorem, p, m) {
        return Err(BuildError::NotApplicable { theorem, p: p.clone(), m: m.clone() });
    }
    let (pi, ni, mi) = (int(p), int(n), int(m));
    let pm2 = &pi * &mi * &mi;
    let q = &pm2 + 1u32;

    let prefactor = if theorem.is_alternating() {
        BigRational::new(ni, mi.clone())
    } else {
        BigRational::new(&mi * &pi, ni)
    };
    let argument = match theorem {
        Theorem::A => BigRational::new(BigInt::one(), q),
        Theorem::B => BigRational::new(BigInt::from(-1), pm2),
        Theorem::C => BigRational::new(&pm2 * 4u32, &q * &q),
        Theorem::D => BigRational::new(-(&q * 4u32), &pm2 * &pm2),
        Theorem::E => BigRational::new(&pm2 * &pm2 * 27u32, &q * &q * &q * 4u32),
        Theorem::F => BigRational::new(-(&q * &q * 27u32), &pm2 * &pm2 * &pm2 * 4u32),
    };
    debug_assert!(argument.abs() < BigRational::one());

    Ok(SeriesSpec { p: p.clone(), m: m.clone(), n: n.clone(), theorem, prefactor, argument })
}

/// A theorem skipped during batch construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub power: u32,
    pub theorem: Theorem,
}

#[derive(Debug, Clone, Default)]
pub struct Batch {
    /// `(power, spec)` in power order, then theorem order.
    pub specs: Vec<(u32, SeriesSpec)>,
    pub skipped: Vec<Skipped>,
}

/// Every applicable expansion for each requested power of the fundamental
/// solution of `p`.
pub fn build_all(p: &BigUint, powers: &[u32]) -> Result<Batch, BuildError> {
    if powers.is_empty() {
        return Err(BuildError::NoPowers);
    }
    let base = fundamental_solution(&PellInstance::new(p.clone())?);
    let mut batch = Batch::default();
    for &power in powers {
        let sol = amplify_power(&base, power)?;
        for theorem in Theorem::ALL {
            match build(theorem, &sol) {
                Ok(spec) => batch.specs.push((power, spec)),
                Err(BuildError::NotApplicable { .. }) => batch.skipped.push(Skipped { power, theorem }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(batch)
}

/// Serialized form of [`SeriesSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpecWire {
    pub p: String,
    pub m: String,
    pub n: String,
    pub theorem: Theorem,
    pub prefactor: RationalWire,
    pub argument: RationalWire,
}

#[derive(Debug, Error)]
pub enum SpecParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("{field} is {found} but the solution gives {expected}")]
    Mismatch { field: &'static str, found: String, expected: String },
}

impl From<&SeriesSpec> for SeriesSpecWire {
    fn from(s: &SeriesSpec) -> Self {
        SeriesSpecWire {
            p: s.p.to_string(),
            m: s.m.to_string(),
            n: s.n.to_string(),
            theorem: s.theorem,
            prefactor: RationalWire::from_rational(&s.prefactor),
            argument: RationalWire::from_rational(&s.argument),
        }
    }
}

fn parse_nat(field: &'static str, s: &str) -> Result<BigUint, WireError> {
    crate::wire::parse_int(field, s)?
        .to_biguint()
        .ok_or_else(|| WireError::BadInteger { field, value: s.to_owned() })
}

impl TryFrom<&SeriesSpecWire> for SeriesSpec {
    type Error = SpecParseError;

    /// Rebuilds from `(p, n, m, theorem)` and requires the stored constants to
    /// equal the rebuilt ones exactly, in lowest terms.
    fn try_from(w: &SeriesSpecWire) -> Result<Self, SpecParseError> {
        let p = parse_nat("p", &w.p)?;
        let m = parse_nat("m", &w.m)?;
        let n = parse_nat("n", &w.n)?;
        let sol = PellSolution::new(p, n, m).map_err(BuildError::from)?;
        let spec = build(w.theorem, &sol)?;
        for (field, wire, value) in
            [("prefactor", &w.prefactor, &spec.prefactor), ("argument", &w.argument, &spec.argument)]
        {
            let (num, den) = wire.parts(field)?;
            if &num != value.numer() || &den != value.denom() {
                return Err(SpecParseError::Mismatch {
                    field,
                    found: format!("{num}/{den}"),
                    expected: value.to_string(),
                });
            }
        }
        Ok(spec)
    }
}

impl SeriesSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesSpecWire::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SpecParseError> {
        let wire: SeriesSpecWire = serde_json::from_str(s)?;
        SeriesSpec::try_from(&wire)
    }
}

impl Serialize for SeriesSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesSpecWire::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeriesSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = SeriesSpecWire::deserialize(deserializer)?;
        SeriesSpec::try_from(&wire).map_err(serde::de::Error::custom)
    }
}
