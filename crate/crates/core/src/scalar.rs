//! Scalar abstraction shared by every numerical kernel.
//!
//! The library is written once over [`Real`] and instantiated for `f32` and
//! `f64`. Complex values are `num_complex::Complex<T>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point field the transforms are computed over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Default relative rank tolerance on singular values.
    const RANK_TOLERANCE: f64;
    /// Default relative threshold on Gram eigenvalues for linear independence.
    const RIESZ_TOLERANCE: f64;
    /// Default residual threshold (relative to `max(1, ||psi||)`) for membership.
    const MEMBERSHIP_TOLERANCE: f64;
}

impl Real for f64 {
    const RANK_TOLERANCE: f64 = 1e-10;
    const RIESZ_TOLERANCE: f64 = 1e-9;
    const MEMBERSHIP_TOLERANCE: f64 = 1e-9;
}

impl Real for f32 {
    const RANK_TOLERANCE: f64 = 1e-4;
    const RIESZ_TOLERANCE: f64 = 1e-4;
    const MEMBERSHIP_TOLERANCE: f64 = 1e-4;
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

#[inline]
pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Numerical thresholds used to turn exact statements into decisions.
///
/// `rank` is relative to the largest singular value found across all fibers.
/// `riesz` is relative to the largest Gram eigenvalue. `verdict` is the
/// absolute slack allowed when flagging Parseval frames. `membership` bounds
/// the projection residual relative to `max(1, ||psi||)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    pub rank: T,
    pub riesz: T,
    pub verdict: T,
    pub membership: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            rank: lit(T::RANK_TOLERANCE),
            riesz: lit(T::RIESZ_TOLERANCE),
            verdict: lit(T::RANK_TOLERANCE),
            membership: lit(T::MEMBERSHIP_TOLERANCE),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Same defaults, with `tol` used both as rank tolerance and verdict slack.
    pub fn with_global(tol: T) -> Self {
        Tolerances { rank: tol, verdict: tol, ..Default::default() }
    }
}
