//! Exact crossover probabilities.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction `p/q` with `0 < p/q < 1/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalProb {
    num: BigUint,
    den: BigUint,
}

impl RationalProb {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() || num.is_zero() || &num * 2u32 >= den {
            return Err(Error::InvalidProbability(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(RationalProb {
            num: num / &g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    /// `q - p`, the numerator of `1 - eps`.
    pub fn complement_numer(&self) -> BigUint {
        &self.den - &self.num
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num.clone()), BigInt::from(self.den.clone()))
    }

    /// `eps / (1 - eps)`, which lies in `(0, 1)`.
    pub fn odds(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.num.clone()),
            BigInt::from(self.complement_numer()),
        )
    }
}

impl fmt::Display for RationalProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RationalProb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "probability",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (p, q) = s.trim().split_once('/').ok_or_else(|| err("expected p/q"))?;
        let p: BigUint = p.trim().parse().map_err(|_| err("bad numerator"))?;
        let q: BigUint = q.trim().parse().map_err(|_| err("bad denominator"))?;
        RationalProb::new(p, q)
    }
}

impl Serialize for RationalProb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalProb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `num/den` in lowest terms, as text.
pub fn format_fraction(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or an integer into an exact rational.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        what: "fraction",
        input: s.to_string(),
        reason: "expected p/q".into(),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| err())?)),
    }
}

/// Decimal rendering rounded half away from zero to `digits` places.
pub fn format_decimal(x: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mag = (scaled.abs() + half).floor().to_integer();
    let (int, frac) = mag.div_rem(&scale);
    let sign = if x.is_negative() && !mag.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}
