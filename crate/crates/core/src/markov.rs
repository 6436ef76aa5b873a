//! Transient probe state under Markovian relaxation.
//!
//! The excited population obeys dq₁/dt = Γ↑(1−q₁) − Γ↓q₁, whose solution is
//! the interpolation q₁(t) = (1 − e^{λt}) pᵉ + e^{λt} p with λ = −(Γ↑+Γ↓).
//! The closed form is the production path; a fixed-step RK4 integrator of
//! the same population equation serves as an independent cross-check.

use crate::physics::{rates, thermal_excited_population, BathSpec, DiagonalQubitState, ProbeSpec};
use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Step cap for [`evolve_ode`], in units of the relaxation time 1/|λ|.
pub const MAX_STEP_FACTOR: f64 = 0.05;
/// Default integrator step, in units of 1/|λ|.
pub const DEFAULT_STEP_FACTOR: f64 = 0.01;
/// Default trajectory sample count.
pub const DEFAULT_TRAJECTORY_SAMPLES: usize = 400;
/// Default trajectory horizon, in units of 1/|λ|; resolves the transient
/// ratio peak, which sits at t·|λ| of order one.
pub const DEFAULT_HORIZON_FACTOR: f64 = 8.0;

/// Time-ordered (t, state) samples with their parameter provenance.
#[derive(Clone, Debug)]
pub struct MarkovTrajectory<T: Real> {
    probe: ProbeSpec<T>,
    bath: BathSpec<T>,
    samples: Vec<(T, DiagonalQubitState<T>)>,
}

impl<T: Real> MarkovTrajectory<T> {
    fn new(
        probe: ProbeSpec<T>,
        bath: BathSpec<T>,
        samples: Vec<(T, DiagonalQubitState<T>)>,
    ) -> Self {
        debug_assert!(samples.windows(2).all(|w| w[0].0 < w[1].0));
        Self {
            probe,
            bath,
            samples,
        }
    }

    pub fn probe(&self) -> &ProbeSpec<T> {
        &self.probe
    }

    pub fn bath(&self) -> &BathSpec<T> {
        &self.bath
    }

    pub fn samples(&self) -> &[(T, DiagonalQubitState<T>)] {
        &self.samples
    }

    pub fn final_state(&self) -> &DiagonalQubitState<T> {
        &self.samples.last().expect("trajectory is never empty").1
    }

    /// Checks the trajectory invariants: strictly increasing times and every
    /// excited population inside [min(p, pᵉ), max(p, pᵉ)] up to `STATE_TOL`.
    pub fn validate(&self) -> Result<()> {
        if !self.samples.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::Consistency(
                "trajectory times are not strictly increasing".into(),
            ));
        }
        let p = self.probe.p();
        let pe = thermal_excited_population(self.probe.omega(), self.bath.beta())?;
        let lo = p.min(pe) - T::STATE_TOL;
        let hi = p.max(pe) + T::STATE_TOL;
        for &(t, ref state) in &self.samples {
            if state.q1() < lo || state.q1() > hi {
                return Err(Error::Consistency(format!(
                    "q1({t}) = {} escapes the interpolation band [{lo}, {hi}]",
                    state.q1()
                )));
            }
        }
        Ok(())
    }
}

fn validate_time<T: Real>(t: T) -> Result<()> {
    if t.is_nan() || t < T::zero() {
        return Err(Error::invalid("t", "must be ≥ 0", t));
    }
    Ok(())
}

/// Probe state at time t from the closed-form relaxation.
pub fn evolve_closed_form<T: Real>(
    probe: &ProbeSpec<T>,
    bath: &BathSpec<T>,
    t: T,
) -> Result<DiagonalQubitState<T>> {
    validate_time(t)?;
    let r = rates(probe, bath);
    let pe = thermal_excited_population(probe.omega(), bath.beta())?;
    let decay = (r.lambda * t).exp();
    DiagonalQubitState::from_excited((T::one() - decay) * pe + decay * probe.p())
}

/// Fixed-step RK4 integration of the population equation up to `t_max`.
///
/// The step must satisfy step ≤ 0.05/|λ|; the dynamics is a single linear
/// ODE with timescale 1/|λ|, so no adaptive control is warranted. Samples
/// are recorded at every step, with a shortened final step landing exactly
/// on `t_max`.
pub fn evolve_ode<T: Real>(
    probe: &ProbeSpec<T>,
    bath: &BathSpec<T>,
    t_max: T,
    step: T,
) -> Result<MarkovTrajectory<T>> {
    validate_time(t_max)?;
    if !t_max.is_finite() {
        return Err(Error::invalid("t_max", "must be finite", t_max));
    }
    let r = rates(probe, bath);
    let bound = lit::<T>(MAX_STEP_FACTOR) * r.relaxation_time();
    if !step.is_finite() || step <= T::zero() {
        return Err(Error::invalid("step", "must be finite and > 0", step));
    }
    if step > bound {
        return Err(Error::StepTooLarge {
            step: step.to_string(),
            bound: bound.to_string(),
            rule: format!("0.05/|lambda|, |lambda| = {}", r.lambda.abs()),
        });
    }

    let mut samples = Vec::new();
    let mut q1 = probe.p();
    samples.push((T::zero(), DiagonalQubitState::from_excited(q1)?));
    let mut t = T::zero();
    let mut i: usize = 0;
    while t < t_max {
        i += 1;
        let t_next = (step * T::from_usize(i).expect("step count fits the scalar")).min(t_max);
        q1 = rk4_population(q1, t_next - t, r.gamma_up, r.gamma_down);
        samples.push((t_next, DiagonalQubitState::from_excited(q1)?));
        t = t_next;
    }
    Ok(MarkovTrajectory::new(*probe, *bath, samples))
}

fn rk4_population<T: Real>(q1: T, h: T, gamma_up: T, gamma_down: T) -> T {
    let f = |q: T| gamma_up * (T::one() - q) - gamma_down * q;
    let half = lit::<T>(0.5);
    let k1 = f(q1);
    let k2 = f(q1 + half * h * k1);
    let k3 = f(q1 + half * h * k2);
    let k4 = f(q1 + h * k3);
    q1 + h / lit(6.0) * (k1 + (k2 + k3) * lit(2.0) + k4)
}

/// Closed-form evaluation on a caller-supplied grid.
pub fn sample_trajectory<T: Real>(
    probe: &ProbeSpec<T>,
    bath: &BathSpec<T>,
    t_grid: &[T],
) -> Result<MarkovTrajectory<T>> {
    if t_grid.is_empty() {
        return Err(Error::invalid("t_grid", "must not be empty", "[]"));
    }
    if !t_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid(
            "t_grid",
            "must be strictly increasing",
            "unsorted grid",
        ));
    }
    let samples = t_grid
        .iter()
        .map(|&t| Ok((t, evolve_closed_form(probe, bath, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkovTrajectory::new(*probe, *bath, samples))
}

/// Uniform default grid: `DEFAULT_TRAJECTORY_SAMPLES` points over
/// [0, `DEFAULT_HORIZON_FACTOR`/|λ|].
pub fn default_time_grid<T: Real>(lambda: T) -> Vec<T> {
    uniform_grid(
        lit::<T>(DEFAULT_HORIZON_FACTOR) / lambda.abs(),
        DEFAULT_TRAJECTORY_SAMPLES,
    )
}

/// `samples` uniformly spaced points over [0, t_max] (just [0] for a single
/// sample).
pub fn uniform_grid<T: Real>(t_max: T, samples: usize) -> Vec<T> {
    if samples <= 1 {
        return vec![T::zero()];
    }
    let n = T::from_usize(samples - 1).expect("sample count fits the scalar");
    (0..samples)
        .map(|i| t_max * T::from_usize(i).expect("index fits the scalar") / n)
        .collect()
}

/// RK4 solution sampled exactly at the grid times (each segment is split
/// into equal substeps no longer than `step`).
pub fn ode_at_grid<T: Real>(
    probe: &ProbeSpec<T>,
    bath: &BathSpec<T>,
    t_grid: &[T],
    step: T,
) -> Result<Vec<T>> {
    if !t_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid(
            "t_grid",
            "must be strictly increasing",
            "unsorted grid",
        ));
    }
    let r = rates(probe, bath);
    let bound = lit::<T>(MAX_STEP_FACTOR) * r.relaxation_time();
    if !step.is_finite() || step <= T::zero() || step > bound {
        return Err(Error::StepTooLarge {
            step: step.to_string(),
            bound: bound.to_string(),
            rule: format!("0.05/|lambda|, |lambda| = {}", r.lambda.abs()),
        });
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut q1 = probe.p();
    let mut t_prev = T::zero();
    for &t in t_grid {
        validate_time(t)?;
        let span = t - t_prev;
        if span > T::zero() {
            let n = (span / step).ceil();
            let n_steps = n.to_usize().unwrap_or(1).max(1);
            let h = span / T::from_usize(n_steps).expect("substep count fits the scalar");
            for _ in 0..n_steps {
                q1 = rk4_population(q1, h, r.gamma_up, r.gamma_down);
            }
        }
        out.push(q1);
        t_prev = t;
    }
    Ok(out)
}
