//! Transient thermometry with a qubit probe.
//!
//! The crate computes quantum Fisher information (QFI) trajectories for the
//! inverse bath temperature β, for a qubit probe that either relaxes
//! Markovianly into a bosonic bath or couples coherently to an auxiliary
//! qubit which alone touches the bath (engineered non-Markovian dynamics).
//!
//! Organization:
//! - [`physics`] — parameter records (probe, bath) and the transition rates;
//! - [`markov`] — closed-form transient state plus an RK4 cross-check;
//! - [`qfi`] — Fisher information, the enhancement ratio r = δ²/α, critical
//!   times, and a finite-difference derivative oracle;
//! - [`nonmarkov`] — exact 4×4 composite integrator and the closed-form
//!   reductions of the probe marginal;
//! - [`experiments`] — deterministic parameter sweeps and reports.
//!
//! All solvers are generic over the floating-point type via [`scalar::Real`];
//! concrete `f64`/`f32` aliases for the main records live at the crate root.

pub mod experiments;
pub mod linalg;
pub mod markov;
pub mod nonmarkov;
pub mod physics;
pub mod qfi;
pub mod scalar;
pub mod search;

#[cfg(test)]
pub(crate) mod test_rng;

pub use scalar::Real;

use thiserror::Error as ThisError;

/// Errors surfaced by the solvers and sweeps.
#[derive(Debug, ThisError)]
pub enum Error {
    /// A parameter violated a documented invariant.
    #[error("invalid parameter {name}: {constraint} (got {got})")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        got: String,
    },
    /// The Bose–Einstein occupation diverges at β = 0.
    #[error("beta = 0: the Bose-Einstein occupation diverges at infinite bath temperature")]
    InfiniteTemperatureBath,
    /// Fixed-step integrator asked to run above its stability bound.
    #[error("step {step} exceeds the stability bound {bound} ({rule})")]
    StepTooLarge {
        step: String,
        bound: String,
        rule: String,
    },
    /// QFI requested for a pure state with a nonzero population derivative.
    #[error("degenerate state: q1(1-q1) vanishes with a nonzero derivative")]
    DegenerateState,
    /// A closed form valid only in the underdamped regime was requested
    /// outside it.
    #[error("not underdamped; use rk4 ({detail})")]
    NotUnderdamped { detail: String },
    /// An internal cross-check failed on data this crate produced itself.
    #[error("internal consistency: {0}")]
    Consistency(String),
    /// A sweep aborted while building one of its grid points.
    #[error("grid point {index}: {source}")]
    AtGridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid<G: std::fmt::Display>(
        name: &'static str,
        constraint: &'static str,
        got: G,
    ) -> Self {
        Error::InvalidParameter {
            name,
            constraint,
            got: got.to_string(),
        }
    }

    pub(crate) fn at_grid_point(index: usize, source: Error) -> Self {
        Error::AtGridPoint {
            index,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// `f64` aliases — the precision used by the CLI and the test suites.
pub type ProbeSpec64 = physics::ProbeSpec<f64>;
pub type BathSpec64 = physics::BathSpec<f64>;
pub type RateSet64 = physics::RateSet<f64>;
pub type DiagonalQubitState64 = physics::DiagonalQubitState<f64>;
pub type NonMarkovParams64 = nonmarkov::NonMarkovParams<f64>;
pub type CompositeState64 = nonmarkov::CompositeState<f64>;

/// `f32` aliases.
pub type ProbeSpec32 = physics::ProbeSpec<f32>;
pub type BathSpec32 = physics::BathSpec<f32>;
pub type RateSet32 = physics::RateSet<f32>;
pub type DiagonalQubitState32 = physics::DiagonalQubitState<f32>;
pub type NonMarkovParams32 = nonmarkov::NonMarkovParams<f32>;
pub type CompositeState32 = nonmarkov::CompositeState<f32>;
