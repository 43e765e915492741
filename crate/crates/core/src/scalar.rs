//! Floating-point scalar abstraction.
//!
//! All inexact arithmetic in this crate is generic over [`Real`], so the
//! same evaluation code runs at `f32` and `f64`. Exact combinatorial data
//! (weights, polytopes, supports) always lives in rational arithmetic and
//! never depends on the scalar choice.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type for Kempf-Ness evaluation: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static {
    /// Shorthand for `from_f64(x).unwrap()`; every finite `f64` constant
    /// used by this crate is representable in `f32` as well.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("constant must be representable")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static {}

/// Euclidean norm of a slice.
pub fn norm<F: Real>(v: &[F]) -> F {
    v.iter().map(|x| *x * *x).sum::<F>().sqrt()
}

/// Standard inner product of two slices of equal length.
pub fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}
