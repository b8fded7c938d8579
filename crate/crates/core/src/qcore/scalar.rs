//! The value type shared by exact and floating-point evaluation.
//!
//! Every formula in the crate is written once against [`Scalar`] and then
//! instantiated with [`ExactScalar`] (rational `q` and `a`, exact results) or
//! with `f64` (arbitrary real `q`, e.g. `q = exp(-lambda/N)`). Exact mode is
//! the oracle for float mode.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::qcore::ExactScalar;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + Sum
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;
    /// Integer power; negative exponents of zero are an error.
    fn powi(&self, exp: i32) -> Result<Self>;
    fn to_f64(&self) -> f64;
}

impl Scalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn from_i64(n: i64) -> Self {
        ExactScalar::integer(n)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        ExactScalar::checked_div(self, rhs)
    }
    fn powi(&self, exp: i32) -> Result<Self> {
        self.pow(exp)
    }
    fn to_f64(&self) -> f64 {
        ExactScalar::to_f64(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
    fn powi(&self, exp: i32) -> Result<Self> {
        if exp < 0 && *self == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(f64::powi(*self, exp))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `x^exp` for a nonnegative exponent, with `0^0 = 1`.
pub(crate) fn pow_nonneg<S: Scalar>(x: &S, exp: usize) -> S {
    let mut acc = S::one();
    let mut base = x.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}
