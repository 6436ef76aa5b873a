//! Composite probe⊗auxiliary dynamics: only the auxiliary qubit touches the
//! bath, the probe couples to it coherently with strength J, and tracing the
//! auxiliary out leaves effectively non-Markovian probe dynamics.
//!
//! Basis ordering |00⟩,|01⟩,|10⟩,|11⟩ (first index probe, second auxiliary,
//! |0⟩ = ground). The composite Hamiltonian is
//! H = ω σ_z⊗1 + ω_A 1⊗σ_z + J(σ₊⊗σ₋ + σ₋⊗σ₊) with ω_A = ω, and the
//! dissipator acts on the auxiliary alone with rates Γ↓, Γ↑.
//!
//! Three solution routes are provided:
//! - [`integrate_composite`] — fixed-step RK4 on the full 4×4 density matrix;
//! - [`delta_analytic`] / [`reduced_probe_analytic`] — the closed form that
//!   treats the auxiliary populations as pinned to their thermal values
//!   (envelope e^{−Γ_T t/2}, Ω = √(4J²−Γ_T²/4), steady population (p+pᵉ)/2);
//! - [`delta_exact`] / [`reduced_probe_exact`] — the closed form that keeps
//!   the swap-driven auxiliary-population drift (envelope e^{−Γ_T t},
//!   Ω_e = √(4J²−Γ_T²), steady population pᵉ).
//!
//! The integrator agrees with the exact forms to integrator accuracy; the
//! pinned-population forms drift away from it secularly, at order Γ_T·t.

use num_complex::Complex;

use crate::linalg::{Mat4, C};
use crate::physics::{
    rates, thermal_excited_population, BathSpec, DiagonalQubitState, ProbeSpec, RateSet,
};
use crate::qfi::{default_fd_step, qfi_diagonal};
use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Cap on recorded trajectory samples; the integrator thins its output to
/// stay under this regardless of step count.
pub const MAX_RECORDED_SAMPLES: usize = 4001;

/// Probe, bath, and the coherent probe–auxiliary coupling J.
///
/// The auxiliary field strength equals the probe's (ω_A = ω) and its initial
/// state is the bath-temperature thermal state; both are baked in because
/// the population-imbalance reduction relies on them. J = 0 is accepted as
/// the decoupled-probe consistency case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonMarkovParams<T> {
    probe: ProbeSpec<T>,
    bath: BathSpec<T>,
    coupling: T,
}

impl<T: Real> NonMarkovParams<T> {
    pub fn new(probe: ProbeSpec<T>, bath: BathSpec<T>, coupling: T) -> Result<Self> {
        if !coupling.is_finite() || coupling < T::zero() {
            return Err(Error::invalid("coupling", "J ≥ 0", coupling));
        }
        Ok(Self {
            probe,
            bath,
            coupling,
        })
    }

    pub fn probe(&self) -> &ProbeSpec<T> {
        &self.probe
    }

    pub fn bath(&self) -> &BathSpec<T> {
        &self.bath
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    /// Auxiliary field strength, fixed equal to the probe's ω.
    pub fn omega_a(&self) -> T {
        self.probe.omega()
    }

    pub fn rates(&self) -> RateSet<T> {
        rates(&self.probe, &self.bath)
    }

    pub fn gamma_t(&self) -> T {
        self.rates().gamma_t
    }

    /// Same parameters at a shifted bath β (used by the β-derivatives).
    pub fn with_beta(&self, beta: T) -> Result<Self> {
        Ok(Self {
            probe: self.probe,
            bath: self.bath.with_beta(beta)?,
            coupling: self.coupling,
        })
    }

    /// Underdamped window of the pinned-population reduction: 4J² > Γ_T²/4.
    pub fn is_underdamped(&self) -> bool {
        let gt = self.gamma_t();
        lit::<T>(4.0) * self.coupling * self.coupling > gt * gt / lit(4.0)
    }

    /// Ω = √(4J² − Γ_T²/4) for the pinned-population reduction.
    pub fn big_omega(&self) -> Result<T> {
        let gt = self.gamma_t();
        let disc = lit::<T>(4.0) * self.coupling * self.coupling - gt * gt / lit(4.0);
        if disc <= T::zero() {
            return Err(Error::NotUnderdamped {
                detail: format!(
                    "4J² = {} ≤ Γ_T²/4 = {}",
                    lit::<T>(4.0) * self.coupling * self.coupling,
                    gt * gt / lit::<T>(4.0)
                ),
            });
        }
        Ok(disc.sqrt())
    }

    /// Oscillatory window of the exact reduction: 4J² > Γ_T².
    pub fn is_underdamped_exact(&self) -> bool {
        let gt = self.gamma_t();
        lit::<T>(4.0) * self.coupling * self.coupling > gt * gt
    }

    /// Ω_e = √(4J² − Γ_T²) for the exact reduction.
    pub fn big_omega_exact(&self) -> Result<T> {
        let gt = self.gamma_t();
        let disc = lit::<T>(4.0) * self.coupling * self.coupling - gt * gt;
        if disc <= T::zero() {
            return Err(Error::NotUnderdamped {
                detail: format!(
                    "4J² = {} ≤ Γ_T² = {} (exact reduction)",
                    lit::<T>(4.0) * self.coupling * self.coupling,
                    gt * gt
                ),
            });
        }
        Ok(disc.sqrt())
    }

    /// Initial probe–auxiliary population imbalance Δ0 = pᵉ − p.
    pub fn delta0(&self) -> Result<T> {
        let pe = thermal_excited_population(self.probe.omega(), self.bath.beta())?;
        Ok(pe - self.probe.p())
    }

    /// Hard step ceiling min(2π/(200·Ω_free), 0.02/Γ_T), Ω_free = 2J.
    pub fn step_bound(&self) -> T {
        let by_rate = lit::<T>(0.02) / self.gamma_t();
        if self.coupling == T::zero() {
            return by_rate;
        }
        let by_osc = T::TAU() / (lit::<T>(200.0) * (self.coupling + self.coupling));
        by_osc.min(by_rate)
    }

    /// Default integration step: half the ceiling on both counts.
    pub fn default_step(&self) -> T {
        let by_rate = lit::<T>(0.01) / self.gamma_t();
        if self.coupling == T::zero() {
            return by_rate;
        }
        let by_osc = T::TAU() / (lit::<T>(400.0) * (self.coupling + self.coupling));
        by_osc.min(by_rate)
    }
}

/// 4×4 density matrix of the probe⊗auxiliary pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompositeState<T> {
    mat: Mat4<T>,
}

impl<T: Real> CompositeState<T> {
    /// Validating constructor: Hermitian and unit-trace within `STATE_TOL`,
    /// eigenvalues above −`POSITIVITY_TOL`.
    pub fn try_new(mat: Mat4<T>) -> Result<Self> {
        let state = Self { mat };
        state.validate()?;
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(mat: Mat4<T>) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> C<T> {
        self.mat.0[row][col]
    }

    pub fn trace(&self) -> C<T> {
        self.mat.trace()
    }

    /// Population imbalance Δ = ρ(01,01) − ρ(10,10).
    pub fn delta(&self) -> T {
        self.mat.0[1][1].re - self.mat.0[2][2].re
    }

    /// Auxiliary excited population ρ(01,01) + ρ(11,11).
    pub fn aux_excited_population(&self) -> T {
        self.mat.0[1][1].re + self.mat.0[3][3].re
    }

    /// Auxiliary ground population ρ(00,00) + ρ(10,10).
    pub fn aux_ground_population(&self) -> T {
        self.mat.0[0][0].re + self.mat.0[2][2].re
    }

    /// Probe excited population ρ(10,10) + ρ(11,11).
    pub fn probe_excited_population(&self) -> T {
        self.mat.0[2][2].re + self.mat.0[3][3].re
    }

    /// |ρ_S(0,1)| of the probe marginal, i.e. |ρ(00,10) + ρ(01,11)|.
    pub fn probe_coherence_magnitude(&self) -> T {
        let z = self.mat.0[0][2] + self.mat.0[1][3];
        z.norm_sqr().sqrt()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.mat.hermitian_eigenvalues()[0]
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.mat.hermiticity_defect();
        if defect > T::STATE_TOL {
            return Err(Error::Consistency(format!(
                "hermiticity defect {defect} exceeds {}",
                T::STATE_TOL
            )));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > T::STATE_TOL || tr.im.abs() > T::STATE_TOL {
            return Err(Error::Consistency(format!(
                "trace {} + {}i departs from 1 beyond {}",
                tr.re,
                tr.im,
                T::STATE_TOL
            )));
        }
        let lo = self.min_eigenvalue();
        if lo < -T::POSITIVITY_TOL {
            return Err(Error::Consistency(format!(
                "negative eigenvalue {lo} below -{}",
                T::POSITIVITY_TOL
            )));
        }
        Ok(())
    }
}

/// Product initial state ρ_i ⊗ τ_β: diagonal with entries
/// (1−p)(1−pᵉ), (1−p)pᵉ, p(1−pᵉ), p·pᵉ.
pub fn initial_composite<T: Real>(params: &NonMarkovParams<T>) -> Result<CompositeState<T>> {
    let p = params.probe().p();
    let pe = thermal_excited_population(params.probe().omega(), params.bath().beta())?;
    let one = T::one();
    Ok(CompositeState::from_matrix_unchecked(Mat4::from_diagonal(
        [
            (one - p) * (one - pe),
            (one - p) * pe,
            p * (one - pe),
            p * pe,
        ],
    )))
}

/// Right-hand side of the composite master equation,
/// −i[H, ρ] + Γ↓ D[σ₋ᴬ](ρ) + Γ↑ D[σ₊ᴬ](ρ).
struct Generator<T> {
    /// Diagonal of H: (−2ω, 0, 0, 2ω).
    h_diag: [T; 4],
    j: T,
    gamma_down: T,
    gamma_up: T,
}

impl<T: Real> Generator<T> {
    fn new(params: &NonMarkovParams<T>) -> Self {
        let r = params.rates();
        let w2 = params.probe().bohr_frequency();
        Self {
            h_diag: [-w2, T::zero(), T::zero(), w2],
            j: params.coupling(),
            gamma_down: r.gamma_down,
            gamma_up: r.gamma_up,
        }
    }

    fn apply(&self, rho: &Mat4<T>) -> Mat4<T> {
        let r = &rho.0;
        let mut hr = Mat4::zeros();
        let mut rh = Mat4::zeros();
        for i in 0..4 {
            for jx in 0..4 {
                // H = diag(h) + J on the |01⟩↔|10⟩ pair.
                let mut left = r[i][jx] * self.h_diag[i];
                if i == 1 {
                    left += r[2][jx] * self.j;
                } else if i == 2 {
                    left += r[1][jx] * self.j;
                }
                hr.0[i][jx] = left;

                let mut right = r[i][jx] * self.h_diag[jx];
                if jx == 1 {
                    right += r[i][2] * self.j;
                } else if jx == 2 {
                    right += r[i][1] * self.j;
                }
                rh.0[i][jx] = right;
            }
        }

        // Jump terms: σ₋ᴬ maps |01⟩→|00⟩ and |11⟩→|10⟩, so AρA† lands on
        // rows/columns {0,2} and A†ρA on {1,3}. The number operators are the
        // diagonal projectors e1 = (0,1,0,1) and e0 = (1,0,1,0).
        let mut out = Mat4::zeros();
        let e1 = [T::zero(), T::one(), T::zero(), T::one()];
        let e0 = [T::one(), T::zero(), T::one(), T::zero()];
        let half = lit::<T>(0.5);
        for i in 0..4 {
            for jx in 0..4 {
                let comm = hr.0[i][jx] - rh.0[i][jx];
                // −i·comm
                let mut v = Complex::new(comm.im, -comm.re);
                let decay = self.gamma_down * (e1[i] + e1[jx]) + self.gamma_up * (e0[i] + e0[jx]);
                v -= r[i][jx] * (half * decay);
                out.0[i][jx] = v;
            }
        }
        out.0[0][0] += r[1][1] * self.gamma_down;
        out.0[0][2] += r[1][3] * self.gamma_down;
        out.0[2][0] += r[3][1] * self.gamma_down;
        out.0[2][2] += r[3][3] * self.gamma_down;
        out.0[1][1] += r[0][0] * self.gamma_up;
        out.0[1][3] += r[0][2] * self.gamma_up;
        out.0[3][1] += r[2][0] * self.gamma_up;
        out.0[3][3] += r[2][2] * self.gamma_up;
        out
    }
}

/// Time derivative of a composite state under the master equation; traceless
/// and Hermitian for Hermitian input.
pub fn gksl_generator<T: Real>(state: &CompositeState<T>, params: &NonMarkovParams<T>) -> Mat4<T> {
    Generator::new(params).apply(state.matrix())
}

/// Recorded trajectory of the composite integrator.
#[derive(Clone, Debug)]
pub struct CompositeTrajectory<T: Real> {
    params: NonMarkovParams<T>,
    samples: Vec<(T, CompositeState<T>)>,
    max_trace_drift: T,
}

impl<T: Real> CompositeTrajectory<T> {
    pub fn params(&self) -> &NonMarkovParams<T> {
        &self.params
    }

    pub fn samples(&self) -> &[(T, CompositeState<T>)] {
        &self.samples
    }

    pub fn final_state(&self) -> &CompositeState<T> {
        &self.samples.last().expect("trajectory is never empty").1
    }

    /// Largest |tr ρ − 1| seen at any integrator step (not only recorded
    /// ones).
    pub fn max_trace_drift(&self) -> T {
        self.max_trace_drift
    }

    /// Validates every recorded sample plus the diagonal-family coherence
    /// bound.
    pub fn validate(&self) -> Result<()> {
        if !self.samples.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::Consistency(
                "trajectory times are not strictly increasing".into(),
            ));
        }
        for (t, state) in &self.samples {
            state
                .validate()
                .map_err(|e| Error::Consistency(format!("sample at t = {t}: {e}")))?;
            let coh = state.probe_coherence_magnitude();
            if coh > T::COHERENCE_TOL {
                return Err(Error::Consistency(format!(
                    "probe coherence {coh} at t = {t} exceeds {}",
                    T::COHERENCE_TOL
                )));
            }
        }
        Ok(())
    }
}

/// Fixed-step RK4 integration of the composite master equation.
///
/// The step must stay below min(2π/(200·Ω_free), 0.02/Γ_T) with Ω_free = 2J;
/// recorded output is thinned to at most [`MAX_RECORDED_SAMPLES`], always
/// including t = 0 and the (exact) final time.
pub fn integrate_composite<T: Real>(
    params: &NonMarkovParams<T>,
    t_max: T,
    step: T,
) -> Result<CompositeTrajectory<T>> {
    if t_max.is_nan() || t_max < T::zero() || !t_max.is_finite() {
        return Err(Error::invalid("t_max", "must be finite and ≥ 0", t_max));
    }
    let bound = params.step_bound();
    if !step.is_finite() || step <= T::zero() {
        return Err(Error::invalid("step", "must be finite and > 0", step));
    }
    if step > bound {
        let by_osc = if params.coupling() == T::zero() {
            T::infinity()
        } else {
            T::TAU() / (lit::<T>(200.0) * (params.coupling() + params.coupling()))
        };
        let by_rate = lit::<T>(0.02) / params.gamma_t();
        return Err(Error::StepTooLarge {
            step: step.to_string(),
            bound: bound.to_string(),
            rule: format!("min(2*pi/(200*Omega_free), 0.02/Gamma_T) = min({by_osc}, {by_rate})"),
        });
    }

    let generator = Generator::new(params);
    let mut rho = initial_composite(params)?.mat;
    let n_steps = if t_max == T::zero() {
        0
    } else {
        (t_max / step).ceil().to_usize().ok_or_else(|| {
            Error::invalid("t_max/step", "step count overflows usize", t_max / step)
        })?
    };
    let stride = n_steps / (MAX_RECORDED_SAMPLES - 1) + 1;

    let mut samples = Vec::with_capacity(n_steps / stride + 2);
    samples.push((T::zero(), CompositeState::from_matrix_unchecked(rho)));
    let mut max_drift = trace_drift(&rho);
    let half = lit::<T>(0.5);
    let sixth = lit::<T>(6.0).recip();
    let two = lit::<T>(2.0);

    let mut t = T::zero();
    for i in 1..=n_steps {
        let t_next = if i == n_steps {
            t_max
        } else {
            step * T::from_usize(i).expect("step index fits the scalar")
        };
        let h = t_next - t;
        let k1 = generator.apply(&rho);
        let k2 = generator.apply(&rho.add_scaled(&k1, half * h));
        let k3 = generator.apply(&rho.add_scaled(&k2, half * h));
        let k4 = generator.apply(&rho.add_scaled(&k3, h));
        let mut incr = k1.add_scaled(&k2, two);
        incr = incr.add_scaled(&k3, two);
        incr = incr.add_scaled(&k4, T::one());
        rho = rho.add_scaled(&incr, h * sixth);
        t = t_next;

        max_drift = max_drift.max(trace_drift(&rho));
        if i % stride == 0 || i == n_steps {
            samples.push((t, CompositeState::from_matrix_unchecked(rho)));
        }
    }

    Ok(CompositeTrajectory {
        params: *params,
        samples,
        max_trace_drift: max_drift,
    })
}

fn trace_drift<T: Real>(rho: &Mat4<T>) -> T {
    let tr = rho.trace();
    (tr.re - T::one()).abs().max(tr.im.abs())
}

/// RK4 probe populations sampled exactly at the grid times.
pub fn reduced_q1_at_grid<T: Real>(
    params: &NonMarkovParams<T>,
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
    let bound = params.step_bound();
    if !step.is_finite() || step <= T::zero() || step > bound {
        return Err(Error::invalid("step", "step ∈ (0, bound]", step));
    }
    let generator = Generator::new(params);
    let mut rho = initial_composite(params)?.mat;
    let half = lit::<T>(0.5);
    let sixth = lit::<T>(6.0).recip();
    let two = lit::<T>(2.0);
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t_prev = T::zero();
    for &t in t_grid {
        if t.is_nan() || t < T::zero() {
            return Err(Error::invalid("t", "must be ≥ 0", t));
        }
        let span = t - t_prev;
        if span > T::zero() {
            let n_steps = (span / step).ceil().to_usize().unwrap_or(1).max(1);
            let h = span / T::from_usize(n_steps).expect("substep count fits the scalar");
            for _ in 0..n_steps {
                let k1 = generator.apply(&rho);
                let k2 = generator.apply(&rho.add_scaled(&k1, half * h));
                let k3 = generator.apply(&rho.add_scaled(&k2, half * h));
                let k4 = generator.apply(&rho.add_scaled(&k3, h));
                let mut incr = k1.add_scaled(&k2, two);
                incr = incr.add_scaled(&k3, two);
                incr = incr.add_scaled(&k4, T::one());
                rho = rho.add_scaled(&incr, h * sixth);
            }
        }
        let state = CompositeState::from_matrix_unchecked(rho);
        out.push(reduced_probe_numeric(&state)?.q1());
        t_prev = t;
    }
    Ok(out)
}

/// Partial trace over the auxiliary; rejects probe coherences above the
/// diagonal-family bound before dropping them.
pub fn reduced_probe_numeric<T: Real>(state: &CompositeState<T>) -> Result<DiagonalQubitState<T>> {
    let coh = state.probe_coherence_magnitude();
    if coh > T::COHERENCE_TOL {
        return Err(Error::Consistency(format!(
            "probe coherence {coh} exceeds {} for the diagonal initial family",
            T::COHERENCE_TOL
        )));
    }
    DiagonalQubitState::new(
        state.entry(0, 0).re + state.entry(1, 1).re,
        state.entry(2, 2).re + state.entry(3, 3).re,
    )
}

/// Closed-form reduction with the auxiliary populations pinned to their
/// thermal values: Δ(t) = Δ0 e^{−Γ_T t/2}(cos Ωt + (Γ_T/2Ω) sin Ωt).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedSolution<T> {
    delta0: T,
    gamma_t: T,
    big_omega: T,
    p: T,
}

impl<T: Real> ReducedSolution<T> {
    pub fn new(params: &NonMarkovParams<T>) -> Result<Self> {
        Ok(Self {
            delta0: params.delta0()?,
            gamma_t: params.gamma_t(),
            big_omega: params.big_omega()?,
            p: params.probe().p(),
        })
    }

    pub fn delta0(&self) -> T {
        self.delta0
    }

    pub fn gamma_t(&self) -> T {
        self.gamma_t
    }

    pub fn big_omega(&self) -> T {
        self.big_omega
    }

    /// e^{−Γ_T t/2}.
    pub fn envelope(&self, t: T) -> T {
        (-self.gamma_t * t / lit(2.0)).exp()
    }

    /// Ω·t.
    pub fn phase(&self, t: T) -> T {
        self.big_omega * t
    }

    /// f(t) = Δ(t)/Δ0, defined as the envelope·carrier product so the
    /// Δ0 = 0 case stays finite (f ≡ the same waveform, q₁ constant).
    pub fn fraction(&self, t: T) -> T {
        let phase = self.phase(t);
        self.envelope(t)
            * (phase.cos() + self.gamma_t / (lit::<T>(2.0) * self.big_omega) * phase.sin())
    }

    pub fn delta(&self, t: T) -> T {
        self.delta0 * self.fraction(t)
    }

    /// q₁(t) = p + Δ0 (1 − f(t))/2; relaxes to (p + pᵉ)/2.
    pub fn q1(&self, t: T) -> T {
        self.p + self.delta0 * (T::one() - self.fraction(t)) / lit(2.0)
    }
}

fn validate_time<T: Real>(t: T) -> Result<()> {
    if t.is_nan() || t < T::zero() {
        return Err(Error::invalid("t", "must be ≥ 0", t));
    }
    Ok(())
}

/// Pinned-population Δ(t); underdamped regime only.
pub fn delta_analytic<T: Real>(params: &NonMarkovParams<T>, t: T) -> Result<T> {
    validate_time(t)?;
    Ok(ReducedSolution::new(params)?.delta(t))
}

/// Pinned-population probe marginal; underdamped regime only.
pub fn reduced_probe_analytic<T: Real>(
    params: &NonMarkovParams<T>,
    t: T,
) -> Result<DiagonalQubitState<T>> {
    validate_time(t)?;
    DiagonalQubitState::from_excited(ReducedSolution::new(params)?.q1(t))
}

/// Exact closed-form Δ(t) of the composite master equation.
///
/// The population imbalance Δ = ρ(01,01) − ρ(10,10), the coherence
/// y = Im ρ(10,01) and the detailed-balance current s = Γ↓p₁ᴬ − Γ↑p₀ᴬ close
/// on themselves; the characteristic polynomial factors as
/// (μ + Γ_T)(μ² + 2Γ_T μ + 4J²), so every mode decays at Γ_T and
///
///   Δ(t) = Δ0 e^{−Γ_T t} (cos Ω_e t + (Γ_T/Ω_e) sin Ω_e t),
///   Ω_e  = √(4J² − Γ_T²).
pub fn delta_exact<T: Real>(params: &NonMarkovParams<T>, t: T) -> Result<T> {
    validate_time(t)?;
    let gt = params.gamma_t();
    let omega_e = params.big_omega_exact()?;
    let phase = omega_e * t;
    Ok(params.delta0()? * (-gt * t).exp() * (phase.cos() + gt / omega_e * phase.sin()))
}

/// Exact swap-driven auxiliary-population drift
/// p₁ᴬ(t) − p₁ᴬ(0) = −(2J²/Ω_e²) Δ0 e^{−Γ_T t}(1 − cos Ω_e t).
pub fn aux_population_drift_exact<T: Real>(params: &NonMarkovParams<T>, t: T) -> Result<T> {
    validate_time(t)?;
    let gt = params.gamma_t();
    let omega_e = params.big_omega_exact()?;
    let j = params.coupling();
    let k = lit::<T>(2.0) * j * j / (omega_e * omega_e);
    Ok(-k * params.delta0()? * (-gt * t).exp() * (T::one() - (omega_e * t).cos()))
}

/// Exact probe marginal: q₁ relaxes to pᵉ while touching it once per swap
/// period,
///
///   q₁(t) = p + Δ0 − Δ0 e^{−Γ_T t}[(Ω_e²−Γ_T²)/(2Ω_e²) cos Ω_e t
///            + (Γ_T/Ω_e) sin Ω_e t + 2J²/Ω_e²].
pub fn reduced_probe_exact<T: Real>(
    params: &NonMarkovParams<T>,
    t: T,
) -> Result<DiagonalQubitState<T>> {
    validate_time(t)?;
    let gt = params.gamma_t();
    let omega_e = params.big_omega_exact()?;
    let delta0 = params.delta0()?;
    let o2 = omega_e * omega_e;
    let phase = omega_e * t;
    // The constant term 2J²/Ω_e² equals 1 − (Ω_e²−Γ_T²)/(2Ω_e²); written as
    // that complement the carrier is exactly 1 at t = 0, so q1(0) = p
    // without rounding residue.
    let cos_coef = (o2 - gt * gt) / (lit::<T>(2.0) * o2);
    let carrier = cos_coef * phase.cos() + gt / omega_e * phase.sin() + (T::one() - cos_coef);
    let q1 = params.probe().p() + delta0 - delta0 * (-gt * t).exp() * carrier;
    DiagonalQubitState::from_excited(q1)
}

/// QFI of the reduced probe state, with ∂_β q₁ from a central finite
/// difference that re-derives every β-dependent input (pᵉ, η, Γ's, Γ_T, Ω,
/// Δ0) at β ± h.
///
/// Uses the pinned-population closed form when underdamped and falls back
/// to the 4×4 integrator otherwise.
pub fn qfi_nonmarkov<T: Real>(params: &NonMarkovParams<T>, t: T) -> Result<T> {
    if params.is_underdamped() {
        qfi_from_population(params, t, |p, t| Ok(reduced_probe_analytic(p, t)?.q1()))
    } else {
        qfi_from_population(params, t, |p, t| q1_numeric_at(p, t))
    }
}

/// QFI along the exact reduction (integrator fallback outside its
/// oscillatory window).
pub fn qfi_nonmarkov_exact<T: Real>(params: &NonMarkovParams<T>, t: T) -> Result<T> {
    if params.is_underdamped_exact() {
        qfi_from_population(params, t, |p, t| Ok(reduced_probe_exact(p, t)?.q1()))
    } else {
        qfi_from_population(params, t, |p, t| q1_numeric_at(p, t))
    }
}

fn qfi_from_population<T: Real>(
    params: &NonMarkovParams<T>,
    t: T,
    q1_of: impl Fn(&NonMarkovParams<T>, T) -> Result<T>,
) -> Result<T> {
    validate_time(t)?;
    let beta = params.bath().beta();
    let h = default_fd_step(beta);
    let center = q1_of(params, t)?;
    let plus = q1_of(&params.with_beta(beta + h)?, t)?;
    let minus = q1_of(&params.with_beta(beta - h)?, t)?;
    qfi_diagonal(center, (plus - minus) / (h + h))
}

fn q1_numeric_at<T: Real>(params: &NonMarkovParams<T>, t: T) -> Result<T> {
    if t == T::zero() {
        return Ok(params.probe().p());
    }
    let traj = integrate_composite(params, t, params.default_step())?;
    Ok(reduced_probe_numeric(traj.final_state())?.q1())
}
