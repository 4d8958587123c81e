//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All kernels are written against [`Scalar`] so that the same code runs in
//! `f64` (the reference precision) and `f32`. Tolerances that only make sense
//! relative to the precision of the type live here as associated constants.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};
use serde::Serialize;

pub trait Scalar:
    Float + FloatConst + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Absolute step between consecutive same-parity orbit terms below which a
    /// monotone real subsequence is considered converged.
    const CONVERGENCE_TOL: Self;
    /// Amount by which a converged cycle interval is widened before the
    /// invariance recheck.
    const WITNESS_ENLARGEMENT: Self;
    /// Slack allowed when checking that a witness interval maps into itself.
    const WITNESS_TOL: Self;
    /// Relative residual accepted for the root of `cosh(d x) = d cosh(x)`.
    const ROOT_REL_RESIDUAL: Self;
    /// Accepted deviation of `omega^(d-1)` from `+1` or `-1`.
    const OMEGA_TOL: Self;
    /// Accepted error when checking that a real orbit lands on a fixed point.
    const LANDING_TOL: Self;

    /// Converts an `f64` literal. Every literal used in the crate is
    /// representable (possibly rounded) in every implementing type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const CONVERGENCE_TOL: Self = 1e-13;
    const WITNESS_ENLARGEMENT: Self = 1e-10;
    const WITNESS_TOL: Self = 1e-8;
    const ROOT_REL_RESIDUAL: Self = 1e-9;
    const OMEGA_TOL: Self = 1e-12;
    const LANDING_TOL: Self = 1e-12;
}

impl Scalar for f32 {
    const CONVERGENCE_TOL: Self = 1e-6;
    const WITNESS_ENLARGEMENT: Self = 1e-4;
    const WITNESS_TOL: Self = 1e-2;
    const ROOT_REL_RESIDUAL: Self = 1e-5;
    const OMEGA_TOL: Self = 1e-5;
    const LANDING_TOL: Self = 1e-5;
}
