//! Scalar abstractions.
//!
//! The algebraic layers (integrability data, connection coefficients,
//! curvature and bitension residuals) only need field operations, so they are
//! generic over [`Scalar`], which includes exact rationals. Anything that needs
//! square roots or finite differences is generic over [`RealScalar`].

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Signed};
use std::fmt::{Debug, Display};

/// A field element the algebraic code can work with: `f32`, `f64` or [`Exact`].
pub trait Scalar:
    Copy + Debug + Display + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Lossy conversion used for diagnostics and reports.
    fn to_f64(self) -> f64;

    /// Small integer literal.
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("integer literal representable in scalar type")
    }

    fn half() -> Self {
        Self::one() / Self::int(2)
    }

    /// Absolute value without the `Signed`/`Float` method ambiguity.
    fn magnitude(self) -> Self {
        Signed::abs(&self)
    }
}

/// Scalars with a square root and transcendental functions.
pub trait RealScalar: Scalar + Float {
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }
}

/// Exact rational scalar. Overflows on pathological inputs; keep entries small.
pub type Exact = Ratio<i64>;

impl Scalar for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Exact {
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl RealScalar for f64 {}
impl RealScalar for f32 {}

/// Largest magnitude in an iterator, zero when empty.
pub fn max_abs<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| {
        let m = v.magnitude();
        if m > acc {
            m
        } else {
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_literals() {
        assert_eq!(Exact::half() * Exact::int(4), Exact::int(2));
        assert_eq!(Exact::new(-3, 4).magnitude(), Exact::new(3, 4));
        assert_eq!(Exact::new(1, 4).to_f64(), 0.25);
    }

    #[test]
    fn max_abs_empty_and_signed() {
        assert_eq!(max_abs(Vec::<f64>::new()), 0.0);
        assert_eq!(max_abs(vec![1.0, -3.0, 2.0]), 3.0);
    }
}
