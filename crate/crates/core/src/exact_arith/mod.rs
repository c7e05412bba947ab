//! Exact scalars: rationals, quadratic-extension numbers and univariate
//! root isolation.

pub mod quadratic;
pub mod rational;
pub mod univariate;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use quadratic::QuadraticNumber;
pub use rational::{format_rational, parse_rational, Rational};
pub use univariate::{RootInterval, UnivariatePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different quadratic extensions")]
    RadicandMismatch,
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("interval endpoint is a root")]
    EndpointIsRoot,
    #[error("empty interval: lower bound must be below upper bound")]
    EmptyInterval,
    #[error("closed-form roots need degree at most two")]
    DegreeTooHigh,
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("malformed rational {0:?}, expected \"p/q\"")]
    Parse(String),
}

/// Scalars a polynomial can be evaluated at.
pub trait Scalar: Clone {
    fn from_rational(r: &Rational) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self, ArithError>;
    fn try_mul(&self, other: &Self) -> Result<Self, ArithError>;
    fn try_div(&self, other: &Self) -> Result<Self, ArithError>;
    fn negate(&self) -> Self;
    /// -1, 0 or +1.
    fn signum(&self) -> i8;

    fn zero_value() -> Self {
        Self::from_rational(&Rational::zero())
    }

    fn one_value() -> Self {
        Self::from_rational(&Rational::one())
    }

    fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_add(&other.negate())
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self + other)
    }

    fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self * other)
    }

    fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        if other.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(self / other)
        }
    }

    fn negate(&self) -> Self {
        -self
    }

    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl Scalar for QuadraticNumber {
    fn from_rational(r: &Rational) -> Self {
        QuadraticNumber::from_rational(r.clone())
    }

    fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        QuadraticNumber::try_add(self, other)
    }

    fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        QuadraticNumber::try_mul(self, other)
    }

    fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        QuadraticNumber::try_div(self, other)
    }

    fn negate(&self) -> Self {
        -self
    }

    fn signum(&self) -> i8 {
        self.sign()
    }
}
