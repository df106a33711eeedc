//! Probability values: the bias parameter of the shuffle and the numeric
//! backends (exact rationals and `f64`) that every law is computed in.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric backend a law was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Domain(format!("unknown backend {other:?}"))),
        }
    }
}

/// Field of probabilities a law can be computed in.
///
/// Implemented for [`BigRational`] (exact) and `f64` (large `n`). All
/// arithmetic in this crate is written against this trait so the two
/// backends share one code path and one summation order.
pub trait Scalar:
    Num + Clone + PartialOrd + fmt::Debug + Send + Sync + 'static
{
    const BACKEND: Backend;

    fn from_rational(r: &BigRational) -> Self;

    fn from_count(k: usize) -> Self;

    fn as_f64(&self) -> f64;

    /// Text form used by the serialized laws: `"a/b"` or a decimal.
    fn render(&self) -> String;

    fn powi(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Exact;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_count(k: usize) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        render_rational(self)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_count(k: usize) -> Self {
        k as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// `"a/b"`, or just `"a"` for integers.
pub fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"0.3"` into an
/// exact rational. Decimals are always exactly representable.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::ParseBias(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| err())?;
        let b: BigInt = b.trim().parse().map_err(|_| err())?;
        if b.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |x: &str| x.bytes().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| err())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Probability `p` that a card is placed on top of the pile.
///
/// Always held as an exact rational; `p = 1/2` is the ordinary shelf
/// shuffle. Irrational values (such as the tie point of the biased
/// strategy) enter through [`Bias::from_f64`], which is exact in the
/// binary value of the float.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bias(BigRational);

impl Bias {
    pub fn new(p: BigRational) -> Result<Self> {
        if p.is_positive() && p <= BigRational::one() {
            Ok(Bias(p))
        } else {
            Err(Error::InvalidBias(render_rational(&p)))
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidBias(format!("{numer}/{denom}")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn half() -> Self {
        Bias(BigRational::new(1.into(), 2.into()))
    }

    pub fn from_f64(p: f64) -> Result<Self> {
        let r = BigRational::from_f64(p).ok_or_else(|| Error::InvalidBias(p.to_string()))?;
        Self::new(r)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `1 - p`, the probability of a bottom placement.
    pub fn complement(&self) -> BigRational {
        BigRational::one() - &self.0
    }

    pub fn get<T: Scalar>(&self) -> T {
        T::from_rational(&self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.as_f64()
    }

    pub fn is_half(&self) -> bool {
        self.0 == BigRational::new(1.into(), 2.into())
    }

    pub fn at_least_half(&self) -> bool {
        self.0 >= BigRational::new(1.into(), 2.into())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_rational(&self.0))
    }
}

impl FromStr for Bias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bias::parse(s)
    }
}

impl Serialize for Bias {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bias {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Bias::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Builds an exact rational `a/b`; used mostly by tests and checks.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational(".75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("1").unwrap(), rat(1, 1));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("0.3.1").is_err());
    }

    #[test]
    fn bias_range() {
        assert!(Bias::parse("0").is_err());
        assert!(Bias::parse("-1/3").is_err());
        assert!(Bias::parse("5/4").is_err());
        assert!(Bias::parse("1").unwrap().is_one());
        assert!(Bias::parse("2/4").unwrap().is_half());
        assert_eq!(Bias::parse("3/10").unwrap().to_string(), "3/10");
    }

    #[test]
    fn from_f64_is_exact_in_binary() {
        let b = Bias::from_f64(0.3).unwrap();
        assert_eq!(b.to_f64(), 0.3);
        assert_ne!(b.value(), &rat(3, 10));
    }

    #[test]
    fn render_forms() {
        assert_eq!(BigRational::from_count(3).render(), "3");
        assert_eq!(rat(3, 4).render(), "3/4");
        assert_eq!(0.25f64.render(), "0.25");
    }
}
