//! Scaled-integer decimal fixed point: `value = mantissa / 10^scale`.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub(crate) fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigFixed {
    mantissa: BigInt,
    scale: u32,
}

impl BigFixed {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        BigFixed { mantissa, scale }
    }

    pub fn zero(scale: u32) -> Self {
        BigFixed { mantissa: BigInt::zero(), scale }
    }

    /// Nearest representable value at `scale`, ties away from zero.
    pub fn from_rational(q: &BigRational, scale: u32) -> Self {
        let num = q.numer().abs() * pow10(scale);
        let den = q.denom().abs();
        let (quot, rem) = num.div_rem(&den);
        let mut mag = quot;
        if rem * 2 >= den {
            mag += 1;
        }
        let negative = (q.numer().sign() == Sign::Minus) != (q.denom().sign() == Sign::Minus);
        BigFixed { mantissa: if negative { -mag } else { mag }, scale }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.scale))
    }

    /// Drops fractional digits down to `digits`, rounding toward negative
    /// infinity.
    pub fn floor_to(&self, digits: u32) -> BigFixed {
        assert!(digits <= self.scale, "cannot floor to a finer scale");
        let m = self.mantissa.div_floor(&pow10(self.scale - digits));
        BigFixed { mantissa: m, scale: digits }
    }

    /// Multiplies by an exact rational, flooring the result at the same scale.
    pub fn mul_rational_floor(&self, q: &BigRational) -> BigFixed {
        let m = (&self.mantissa * q.numer()).div_floor(q.denom());
        BigFixed { mantissa: m, scale: self.scale }
    }
}

impl Add<&BigFixed> for &BigFixed {
    type Output = BigFixed;

    fn add(self, rhs: &BigFixed) -> BigFixed {
        assert_eq!(self.scale, rhs.scale, "fixed-point addends must share a scale");
        BigFixed { mantissa: &self.mantissa + &rhs.mantissa, scale: self.scale }
    }
}

impl AddAssign<&BigFixed> for BigFixed {
    fn add_assign(&mut self, rhs: &BigFixed) {
        assert_eq!(self.scale, rhs.scale, "fixed-point addends must share a scale");
        self.mantissa += &rhs.mantissa;
    }
}

/// Plain decimal with exactly `scale` fractional digits.
impl fmt::Display for BigFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.abs().to_string();
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = if digits.len() <= scale { format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits) } else { digits };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}
