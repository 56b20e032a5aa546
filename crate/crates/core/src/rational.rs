//! Exact arbitrary-precision rational arithmetic.
//!
//! [`Rational`] is the scalar type of every symbolic computation in this
//! workspace. Values are always in canonical form: reduced to lowest terms
//! with a positive denominator, zero stored as `0/1`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Error returned by [`Rational::checked_div`] when the divisor is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("division by zero")]
pub struct DivisionByZero;

/// Error produced when a rational literal does not match the grammar
/// `-?[0-9]+(/[0-9]+)?` (nonzero denominator, no interior whitespace).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    literal: String,
    reason: &'static str,
}

impl ParseRationalError {
    fn new(literal: &str, reason: &'static str) -> Self {
        ParseRationalError {
            literal: literal.to_owned(),
            reason,
        }
    }
}

/// Exact rational number with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in canonical form.
    ///
    /// Panics if `den == 0`; use [`Rational::checked_div`] for fallible
    /// division.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "denominator must be nonzero");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub(crate) fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "denominator must be nonzero");
        Rational(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Exact division; a zero divisor is reported as an error rather than
    /// a panic.
    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, DivisionByZero> {
        if rhs.is_zero() {
            return Err(DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Nearest `f64`; values beyond the double range saturate to
    /// `±infinity`.
    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Some(v) => v,
            None => {
                if self.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Panics on a zero divisor; prefer [`Rational::checked_div`] when the
/// divisor is not known to be nonzero.
impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.strip_prefix('-').unwrap_or(s);
        let (num_digits, den_digits) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(num_digits) {
            return Err(ParseRationalError::new(s, "numerator must be decimal digits"));
        }
        let mut num: BigInt = num_digits.parse().expect("digits parse");
        if s.starts_with('-') {
            num = -num;
        }
        let den: BigInt = match den_digits {
            None => BigInt::one(),
            Some(d) => {
                if !all_digits(d) {
                    return Err(ParseRationalError::new(s, "denominator must be decimal digits"));
                }
                let den: BigInt = d.parse().expect("digits parse");
                if den.is_zero() {
                    return Err(ParseRationalError::new(s, "denominator must be positive"));
                }
                den
            }
        };
        Ok(Rational(BigRational::new(num, den)))
    }
}

/// Rationals serialize as their textual form, e.g. `"4264/9"` or `"768"`.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
