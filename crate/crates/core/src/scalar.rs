//! Scalar abstraction shared by the weighted and rational computations.
//!
//! Everything that needs exact arithmetic (path weights, the `f` and `g`
//! factors of the three-prime main term) is written against [`Scalar`], so the
//! same code runs over `f64` for Monte-Carlo work and over [`BigRational`]
//! when an identity has to hold with zero tolerance.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    /// The value `num / den`. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_u64(value: u64) -> Self {
        Self::from_ratio(value as i64, 1)
    }

    /// `1 / value`.
    fn recip_u64(value: u64) -> Self {
        Self::from_ratio(1, value as i64)
    }

    /// Nearest `f64`, used for reporting.
    fn as_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_u64(value: u64) -> Self {
        value as f64
    }

    fn recip_u64(value: u64) -> Self {
        1.0 / value as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_u64(value: u64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn recip_u64(value: u64) -> Self {
        BigRational::new(BigInt::from(1), BigInt::from(value))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
