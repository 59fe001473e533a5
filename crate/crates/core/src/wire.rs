//! JSON shapes shared by the spec, report and corpus formats. Integers are
//! always decimal strings so that consumers with 64-bit numbers never see
//! a truncated value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("{field}: {value:?} is not a decimal integer")]
    BadInteger { field: &'static str, value: String },
    #[error("{field}: zero denominator")]
    ZeroDenominator { field: &'static str },
}

/// `{ "num": "...", "den": "..." }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalWire {
    pub num: String,
    pub den: String,
}

impl RationalWire {
    pub fn from_rational(q: &BigRational) -> Self {
        RationalWire { num: q.numer().to_string(), den: q.denom().to_string() }
    }

    /// Numerator and denominator exactly as written, without reduction.
    pub fn parts(&self, field: &'static str) -> Result<(BigInt, BigInt), WireError> {
        let num = parse_int(field, &self.num)?;
        let den = parse_int(field, &self.den)?;
        if den.is_zero() {
            return Err(WireError::ZeroDenominator { field });
        }
        Ok((num, den))
    }

    pub fn to_rational(&self, field: &'static str) -> Result<BigRational, WireError> {
        let (num, den) = self.parts(field)?;
        Ok(BigRational::new(num, den))
    }
}

/// Strict decimal integer: optional leading `-`, then ASCII digits only.
pub fn parse_int(field: &'static str, s: &str) -> Result<BigInt, WireError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(WireError::BadInteger { field, value: s.to_owned() });
    }
    s.parse().map_err(|_| WireError::BadInteger { field, value: s.to_owned() })
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<BigRational, WireError> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int("rational", s.trim())?)),
        Some((n, d)) => RationalWire { num: n.trim().to_owned(), den: d.trim().to_owned() }.to_rational("rational"),
    }
}
