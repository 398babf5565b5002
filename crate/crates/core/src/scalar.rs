//! Exact reals modelled as ℚ-linear combinations of formal symbols.
//!
//! The symbol `"1"` is the rational unit; every other symbol stands for a
//! transcendental, with all symbols ℚ-linearly independent.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const UNIT: &str = "1";

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct FormalReal {
    coeffs: BTreeMap<String, Rational>,
}

impl FormalReal {
    pub fn zero() -> Self {
        FormalReal::default()
    }

    pub fn rational(r: Rational) -> Self {
        FormalReal::term(UNIT, r)
    }

    pub fn int(n: i64) -> Self {
        FormalReal::rational(rat(n, 1))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        FormalReal::rational(rat(num, den))
    }

    /// A single formal symbol with coefficient 1.
    pub fn symbol(name: &str) -> Self {
        FormalReal::term(name, Rational::one())
    }

    pub fn term(name: &str, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(name.to_string(), c);
        }
        FormalReal { coeffs }
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: AsRef<str>,
    {
        terms
            .into_iter()
            .fold(FormalReal::zero(), |acc, (s, c)| acc + FormalReal::term(s.as_ref(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, symbol: &str) -> Rational {
        self.coeffs.get(symbol).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    /// The value as a rational, when no transcendental symbol occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.keys().all(|k| k == UNIT) {
            Some(self.coeff(UNIT))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> FormalReal {
        if c.is_zero() {
            return FormalReal::zero();
        }
        FormalReal {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, m: i64) -> FormalReal {
        self.scale(&rat(m, 1))
    }

    /// Positivity, with transcendentals treated as generic positive reals:
    /// a value is positive when every coefficient is non-negative and at least
    /// one is positive. Mixed-sign combinations are undecided (`None`).
    pub fn sign_hint(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.is_zero() {
            return Some(Equal);
        }
        if self.coeffs.values().all(|c| c.is_positive()) {
            Some(Greater)
        } else if self.coeffs.values().all(|c| c.is_negative()) {
            Some(Less)
        } else {
            self.as_rational().map(|r| r.cmp(&Rational::zero()))
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign_hint() == Some(std::cmp::Ordering::Greater)
    }
}

impl Add for FormalReal {
    type Output = FormalReal;
    fn add(mut self, rhs: FormalReal) -> FormalReal {
        for (k, v) in rhs.coeffs {
            *self.coeffs.entry(k).or_insert_with(Rational::zero) += v;
        }
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }
}

impl<'a> Add<&'a FormalReal> for &'a FormalReal {
    type Output = FormalReal;
    fn add(self, rhs: &FormalReal) -> FormalReal {
        self.clone() + rhs.clone()
    }
}

impl Neg for FormalReal {
    type Output = FormalReal;
    fn neg(self) -> FormalReal {
        FormalReal {
            coeffs: self.coeffs.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Sub for FormalReal {
    type Output = FormalReal;
    fn sub(self, rhs: FormalReal) -> FormalReal {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a FormalReal> for &'a FormalReal {
    type Output = FormalReal;
    fn sub(self, rhs: &FormalReal) -> FormalReal {
        self.clone() - rhs.clone()
    }
}

impl Mul<&Rational> for &FormalReal {
    type Output = FormalReal;
    fn mul(self, rhs: &Rational) -> FormalReal {
        self.scale(rhs)
    }
}

impl std::iter::Sum for FormalReal {
    fn sum<I: Iterator<Item = FormalReal>>(iter: I) -> FormalReal {
        iter.fold(FormalReal::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a FormalReal> for FormalReal {
    fn sum<I: Iterator<Item = &'a FormalReal>>(iter: I) -> FormalReal {
        iter.fold(FormalReal::zero(), |a, b| a + b.clone())
    }
}

impl fmt::Display for FormalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.coeffs.iter().enumerate() {
            let neg = v.is_negative();
            let mag = v.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if k == UNIT {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{}·{k}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl Serialize for FormalReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&str, String> = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.as_str(), format_rational(v)))
            .collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coef {
            Str(String),
            Int(i64),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Map(BTreeMap<String, Coef>),
            Str(String),
            Int(i64),
        }
        let to_rat = |c: Coef| match c {
            Coef::Str(s) => parse_rational(&s).map_err(D::Error::custom),
            Coef::Int(i) => Ok(rat(i, 1)),
        };
        match Repr::deserialize(d)? {
            Repr::Map(m) => {
                let mut terms = Vec::new();
                for (k, c) in m {
                    terms.push((k, to_rat(c)?));
                }
                Ok(FormalReal::from_terms(terms))
            }
            Repr::Str(s) => Ok(FormalReal::rational(parse_rational(&s).map_err(D::Error::custom)?)),
            Repr::Int(i) => Ok(FormalReal::int(i)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_drops_zero_coefficients() {
        let x = FormalReal::symbol("λ1") + FormalReal::int(2);
        let y = x.clone() - FormalReal::symbol("λ1");
        assert_eq!(y, FormalReal::int(2));
        assert_eq!((x.clone() - x).terms().count(), 0);
    }

    #[test]
    fn json_format() {
        let x = FormalReal::ratio(3, 2) + FormalReal::term("λ1", rat(-1, 3));
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"1":"3/2","λ1":"-1/3"}"#);
        let back: FormalReal = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
        let plain: FormalReal = serde_json::from_str(r#""1/2""#).unwrap();
        assert_eq!(plain, FormalReal::ratio(1, 2));
    }

    #[test]
    fn display_and_sign() {
        let x = FormalReal::symbol("λ2") + FormalReal::symbol("λ1").scale_int(2);
        assert_eq!(x.to_string(), "2·λ1 + λ2");
        assert!(x.is_positive());
        assert!(!(FormalReal::symbol("λ1") - FormalReal::symbol("λ2")).is_positive());
        assert!(FormalReal::ratio(1, 3).is_positive());
    }
}
