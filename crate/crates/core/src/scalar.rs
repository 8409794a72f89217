//! Scalar fields the algebras are defined over.
//!
//! Two modes are supported: exact arbitrary-precision rationals and binary
//! `f64`. Every algebra, element and solver is generic over [`Scalar`], so a
//! single computation can never mix the two.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact scalar. `BigRational` keeps itself in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Rational,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Rational => f.write_str("rational"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarParseError {
    #[error("invalid number literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("decimal literal `{0}` is only accepted in float mode")]
    DecimalInExactMode(String),
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact comparison with zero.
    fn is_zero(&self) -> bool;

    fn is_negative(&self) -> bool;

    /// Zero test used by elimination. Exact scalars ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    /// Parses an integer, a fraction `p/q` or (float mode only) a decimal.
    fn parse_literal(text: &str) -> Result<Self, ScalarParseError>;

    fn is_exact() -> bool {
        Self::MODE == ScalarMode::Rational
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

fn parse_rational(text: &str) -> Result<Rational, ScalarParseError> {
    let t = text.trim();
    let invalid = || ScalarParseError::Invalid(text.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| invalid())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ScalarParseError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            if t.contains('.') || t.contains('e') || t.contains('E') {
                return Err(ScalarParseError::DecimalInExactMode(text.to_string()));
            }
            BigInt::from_str(t).map(Rational::from_integer).map_err(|_| invalid())
        }
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }

    fn parse_literal(text: &str) -> Result<Self, ScalarParseError> {
        parse_rational(text)
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn is_negligible(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }

    fn parse_literal(text: &str) -> Result<Self, ScalarParseError> {
        let t = text.trim();
        if t.contains('/') {
            return parse_rational(t).map(|r| Self::from_rational(&r));
        }
        let v = f64::from_str(t).map_err(|_| ScalarParseError::Invalid(text.to_string()))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ScalarParseError::Invalid(text.to_string()))
        }
    }
}
