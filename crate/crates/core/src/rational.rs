//! Exact rational scalars and their textual encoding.
//!
//! Every numeric quantity in the hull logic is a [`Rational`]. The JSON form
//! is a string: `"p/q"` in general and `"p"` for integers. Parsing also
//! accepts plain decimal literals such as `"-0.25"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::HullError;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational, HullError> {
    if b.is_zero() {
        return Err(HullError::DivisionByZero);
    }
    Ok(a / b)
}

/// Formats as `p` or `p/q`.
pub fn to_text(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(text: &str) -> Result<Rational, HullError> {
    let s = text.trim();
    let bad = || HullError::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(HullError::DivisionByZero);
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole_val = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole_digits).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(fracpart.len() as u32);
        let frac_val = BigInt::from_str(fracpart).map_err(|_| bad())?;
        let magnitude = Rational::new(whole_val * &scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Scales `values` by a positive factor so that all entries become integers
/// with greatest common divisor 1. An all-zero input is returned unchanged.
pub fn primitive_integer_scaling(values: &[Rational]) -> Vec<Rational> {
    let den = common_denominator(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|r| r.numer() * (&den / r.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return values.to_vec();
    }
    ints.into_iter()
        .map(|v| Rational::from_integer(v / &g))
        .collect()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Raises numerator and denominator separately; the result stays reduced.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let e = u32::try_from(exp).expect("exponent fits in u32");
    Rational::new_raw(base.numer().pow(e), base.denom().pow(e))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapter for a single rational stored as a string.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_text(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = NumOrString::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Integers are also accepted as bare JSON numbers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum NumOrString {
        Int(i64),
        Text(String),
    }

    impl NumOrString {
        pub(crate) fn into_rational(self) -> Result<Rational, crate::error::HullError> {
            match self {
                NumOrString::Int(v) => Ok(super::int(v)),
                NumOrString::Text(t) => super::parse(&t),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::to_text(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<super::serde_str::NumOrString>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_vec_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let texts: Vec<String> = row.iter().map(super::to_text).collect();
            seq.serialize_element(&texts)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<super::serde_str::NumOrString>>::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
