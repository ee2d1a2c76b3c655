//! Exact rational numbers and their text/JSON encodings.
//!
//! Every time value in the crate is a [`Rational`]. On the wire a rational is
//! either a JSON integer or a string `"a/b"` with `b > 0`; output is always in
//! lowest terms, and integers are emitted as plain JSON numbers when they fit
//! in an `i64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer in rational literal {0:?}")]
    InvalidInteger(String),
    #[error("denominator must be positive in {0:?}")]
    NonPositiveDenominator(String),
    #[error("expected an integer or an \"a/b\" string, found {0}")]
    WrongJsonType(String),
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num/den` reduced to lowest terms. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int =
        |s: &str| BigInt::from_str(s.trim()).map_err(|_| ParseRationalError::InvalidInteger(text.to_owned()));
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if !den.is_positive() {
                return Err(ParseRationalError::NonPositiveDenominator(text.to_owned()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Lowest-terms text form: `"7"` or `"5/18"`.
pub fn format_rational(value: &Rational) -> String {
    // BigRational's Display already drops a unit denominator.
    value.to_string()
}

pub fn to_json(value: &Rational) -> Value {
    if value.is_integer() {
        if let Some(n) = value.numer().to_i64() {
            return Value::from(n);
        }
    }
    Value::String(format_rational(value))
}

pub fn from_json(value: &Value) -> Result<Rational, ParseRationalError> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                Err(ParseRationalError::WrongJsonType(format!("non-integer number {n}")))
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(ParseRationalError::WrongJsonType(json_type_name(other).to_owned())),
    }
}

pub(crate) fn json_type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Smallest point `origin + k * step` (k ≥ 0 integer) that is `>= t`.
pub fn ceil_to_grid(t: &Rational, origin: &Rational, step: &Rational) -> Rational {
    debug_assert!(step.is_positive());
    if t <= origin {
        return origin.clone();
    }
    let steps = ((t - origin) / step).ceil();
    origin + steps * step
}

pub fn max_of<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    values.into_iter().cloned().max().unwrap_or_else(Rational::zero)
}

pub fn one() -> Rational {
    Rational::one()
}

/// Serde adapter for a single rational field.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_json(value).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        from_json(&v).map_err(D::Error::custom)
    }
}
