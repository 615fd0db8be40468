use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

/// Arithmetic needed by the game model and the exhaustive searches.
///
/// Implemented for `f32`, `f64` and exact rationals. Floating scalars give
/// approximate values; rationals give the exact fractions the closed forms
/// are stated in.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn as_f64(&self) -> f64;

    /// Whether equality comparisons on this scalar are exact.
    fn is_exact() -> bool;

    /// Numerator and denominator when the value is an exact fraction.
    fn as_fraction(&self) -> Option<(i64, i64)> {
        None
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }

    fn as_fraction(&self) -> Option<(i64, i64)> {
        Some((*self.numer(), *self.denom()))
    }
}

/// Sum of a slice of scalars.
pub fn sum<S: Scalar>(values: &[S]) -> S {
    values.iter().fold(S::zero(), |acc, v| acc + v.clone())
}
