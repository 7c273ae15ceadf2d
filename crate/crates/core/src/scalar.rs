//! Exact scalar types.
//!
//! The linear algebra and polynomial layers are generic over [`Scalar`],
//! which is implemented for every `Ratio<T>` with a signed integer `T`.
//! Domain code works with the arbitrary precision [`Rational`] alias; the
//! fixed-width ratios are handy for fast tests of the generic layers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::ConeError;

/// An exact ordered field element.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync {}

impl<T> Scalar for Ratio<T> where T: Clone + Integer + Signed + Debug + Send + Sync {}

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big_to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer does not fit in 64 bits")
}

pub fn floor_i64(x: &Rational) -> i64 {
    big_to_i64(&x.floor().to_integer())
}

pub fn ceil_i64(x: &Rational) -> i64 {
    big_to_i64(&x.ceil().to_integer())
}

/// `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn numer_i64(x: &Rational) -> i64 {
    big_to_i64(x.numer())
}

pub fn denom_i64(x: &Rational) -> i64 {
    big_to_i64(x.denom())
}

pub fn as_integer(x: &Rational) -> Option<i64> {
    x.is_integer().then(|| big_to_i64(&x.to_integer()))
}

pub fn lcm_all<I: IntoIterator<Item = i64>>(it: I) -> i64 {
    it.into_iter().fold(1, |acc, x| acc.lcm(&x))
}

pub fn gcd_all<I: IntoIterator<Item = i64>>(it: I) -> i64 {
    it.into_iter().fold(0, |acc, x| acc.gcd(&x))
}

/// Reduced `p/q` text, with `/q` omitted for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ConeError> {
    let s = s.trim();
    let bad = || ConeError::Parse(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Serde adapter: rationals travel as `"p/q"` strings.
pub mod qstr {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for sequences of rationals.
pub mod qstr_vec {
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}
