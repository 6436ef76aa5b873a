//! Scalar abstraction for the solvers.
//!
//! Every formula in this crate is expressible over any IEEE float, so the
//! physics core is generic over [`Real`]. `f64` is the precision the
//! validation suites are calibrated against; the `f32` tolerances are scaled
//! to that type's epsilon.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the physics core is generic over.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Sum
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Population / trace bookkeeping tolerance.
    const STATE_TOL: Self;
    /// Eigenvalue floor when checking density-matrix positivity.
    const POSITIVITY_TOL: Self;
    /// Bound on probe coherences for the diagonal initial family.
    const COHERENCE_TOL: Self;
    /// |p − pᵉ| below this counts as an exactly thermal preparation.
    const THERMAL_TOL: Self;
}

impl Real for f64 {
    const STATE_TOL: Self = 1e-12;
    const POSITIVITY_TOL: Self = 1e-10;
    const COHERENCE_TOL: Self = 1e-10;
    const THERMAL_TOL: Self = 1e-14;
}

impl Real for f32 {
    const STATE_TOL: Self = 1e-5;
    const POSITIVITY_TOL: Self = 1e-4;
    const COHERENCE_TOL: Self = 1e-4;
    const THERMAL_TOL: Self = 1e-6;
}

/// Pull an `f64` literal into the scalar type.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal converts into any Real type")
}
