//! Parameter records and transition-rate formulas shared by every solver.
//!
//! Conventions (natural units ħ = k_B = 1): the probe Hamiltonian is ω σ_z
//! with eigenvalues −ω (ground |0⟩) and +ω (excited |1⟩), so the Bohr
//! frequency is ω01 = 2ω. The bath enters only through its inverse
//! temperature β and the Ohmic coupling constant κ, via the spectral density
//! J(ω01) = κ ω01 ≡ γ evaluated at the transition frequency.

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// Qubit probe: half-gap ω of H = ω σ_z and initial excited population p.
///
/// p is restricted to [0, 1/2]: no population inversion, i.e. the initial
/// inverse temperature β_i = ln((1−p)/p)/(2ω) is nonnegative (+∞ at p = 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeSpec<T> {
    omega: T,
    p: T,
}

impl<T: Real> ProbeSpec<T> {
    pub fn new(omega: T, p: T) -> Result<Self> {
        if !omega.is_finite() || omega <= T::zero() {
            return Err(Error::invalid("omega", "must be finite and > 0", omega));
        }
        if !p.is_finite() || p < T::zero() || p > lit(0.5) {
            return Err(Error::invalid("p", "p ∈ [0, 1/2]", p));
        }
        Ok(Self { omega, p })
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// Transition (Bohr) frequency ω01 = 2ω.
    pub fn bohr_frequency(&self) -> T {
        self.omega + self.omega
    }

    /// Initial inverse temperature β_i = ln((1−p)/p)/(2ω); +∞ at p = 0.
    pub fn beta_i(&self) -> T {
        ((T::one() - self.p) / self.p).ln() / self.bohr_frequency()
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ProbeSpec<T> {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw<T> {
            omega: T,
            p: T,
        }
        let raw = Raw::<T>::deserialize(deserializer)?;
        ProbeSpec::new(raw.omega, raw.p).map_err(serde::de::Error::custom)
    }
}

/// Bosonic bath: inverse temperature β ∈ (0, ∞) and Ohmic constant κ > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BathSpec<T> {
    beta: T,
    kappa: T,
}

impl<T: Real> BathSpec<T> {
    pub fn new(beta: T, kappa: T) -> Result<Self> {
        if beta == T::zero() {
            return Err(Error::InfiniteTemperatureBath);
        }
        if !beta.is_finite() || beta < T::zero() {
            return Err(Error::invalid("beta", "β ∈ (0, ∞)", beta));
        }
        if !kappa.is_finite() || kappa <= T::zero() {
            return Err(Error::invalid("kappa", "must be finite and > 0", kappa));
        }
        Ok(Self { beta, kappa })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// Same bath at a shifted inverse temperature (used by β-derivatives).
    pub fn with_beta(&self, beta: T) -> Result<Self> {
        Self::new(beta, self.kappa)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for BathSpec<T> {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw<T> {
            beta: T,
            kappa: T,
        }
        let raw = Raw::<T>::deserialize(deserializer)?;
        BathSpec::new(raw.beta, raw.kappa).map_err(serde::de::Error::custom)
    }
}

/// Rates derived from a (probe, bath) pair.
///
/// γ = κ ω01, Γ↓ = γ(1+η), Γ↑ = γη, λ = −(Γ↑+Γ↓) < 0, Γ_T = (Γ↓+Γ↑)/2.
/// Detailed balance Γ↑/Γ↓ = e^{−ω01 β} and the closed form
/// λ = γ/(2pᵉ−1) = −γ coth(ωβ) follow algebraically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateSet<T> {
    /// Bose–Einstein occupation η at the transition frequency.
    pub eta: T,
    /// Ohmic spectral density γ = κ ω01.
    pub gamma: T,
    /// Decay rate Γ↓ = γ(1+η).
    pub gamma_down: T,
    /// Excitation rate Γ↑ = γη.
    pub gamma_up: T,
    /// Relaxation exponent λ = −(Γ↑+Γ↓); always negative.
    pub lambda: T,
    /// Coherence decay rate Γ_T = (Γ↓+Γ↑)/2.
    pub gamma_t: T,
}

impl<T: Real> RateSet<T> {
    /// Relaxation timescale 1/|λ|.
    pub fn relaxation_time(&self) -> T {
        self.lambda.abs().recip()
    }
}

/// Equilibrium excited population pᵉ = e^{−ωβ}/(e^{ωβ}+e^{−ωβ}) ∈ (0, 1/2].
///
/// Evaluated as e^{−2ωβ}/(1+e^{−2ωβ}) so the exponent never overflows; for
/// 2ωβ beyond the underflow threshold the result degrades gracefully to 0.
pub fn thermal_excited_population<T: Real>(omega: T, beta: T) -> Result<T> {
    if !omega.is_finite() || omega <= T::zero() {
        return Err(Error::invalid("omega", "must be finite and > 0", omega));
    }
    if !beta.is_finite() || beta < T::zero() {
        return Err(Error::invalid("beta", "must be finite and ≥ 0", beta));
    }
    let z = (-(omega + omega) * beta).exp();
    Ok(z / (T::one() + z))
}

/// Bose–Einstein occupation η = 1/(e^{ω01 β} − 1).
///
/// Uses `exp_m1`, accurate for small ω01 β; β = 0 is rejected because η
/// diverges there.
pub fn bose_einstein<T: Real>(omega01: T, beta: T) -> Result<T> {
    if !omega01.is_finite() || omega01 <= T::zero() {
        return Err(Error::invalid("omega01", "must be finite and > 0", omega01));
    }
    if beta == T::zero() {
        return Err(Error::InfiniteTemperatureBath);
    }
    if !beta.is_finite() || beta < T::zero() {
        return Err(Error::invalid("beta", "β ∈ (0, ∞)", beta));
    }
    Ok((omega01 * beta).exp_m1().recip())
}

/// All rates for a (probe, bath) pair.
///
/// Γ↓ is computed as γ + Γ↑ so that Γ↓ − Γ↑ recovers γ without cancellation.
pub fn rates<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>) -> RateSet<T> {
    let omega01 = probe.bohr_frequency();
    let eta = bose_einstein(omega01, bath.beta()).expect("BathSpec guarantees β ∈ (0, ∞)");
    let gamma = bath.kappa() * omega01;
    let gamma_up = gamma * eta;
    let gamma_down = gamma + gamma_up;
    let total = gamma_down + gamma_up;
    RateSet {
        eta,
        gamma,
        gamma_down,
        gamma_up,
        lambda: -total,
        gamma_t: total / lit(2.0),
    }
}

/// Warn threshold for the weak-coupling figure (Γ↑+Γ↓)/ω01.
pub const WEAK_COUPLING_WARN: f64 = 0.01;

/// Report of the dimensionless weak-coupling figure (Γ↑+Γ↓)/ω01.
///
/// The figure compares the probe relaxation rate against the transition
/// frequency; the Born/secular treatment needs it small. Equals κ coth(ωβ),
/// hence linear in κ at fixed (ω, β).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakCouplingReport<T> {
    pub figure: T,
    pub pass: bool,
}

pub fn validate_weak_coupling<T: Real>(
    probe: &ProbeSpec<T>,
    bath: &BathSpec<T>,
) -> WeakCouplingReport<T> {
    let r = rates(probe, bath);
    let figure = (r.gamma_up + r.gamma_down) / probe.bohr_frequency();
    WeakCouplingReport {
        figure,
        pass: figure < lit(WEAK_COUPLING_WARN),
    }
}

/// Diagonal qubit state, stored as (ground, excited) populations.
///
/// Populations within `STATE_TOL` of [0, 1] are clamped onto the interval;
/// anything further out, or a trace off from 1 beyond `STATE_TOL`, is
/// rejected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalQubitState<T> {
    q0: T,
    q1: T,
}

impl<T: Real> DiagonalQubitState<T> {
    pub fn new(q0: T, q1: T) -> Result<Self> {
        if ((q0 + q1) - T::one()).abs() > T::STATE_TOL {
            return Err(Error::invalid(
                "q0 + q1",
                "populations must sum to 1",
                q0 + q1,
            ));
        }
        Ok(Self {
            q0: Self::clamp_population("q0", q0)?,
            q1: Self::clamp_population("q1", q1)?,
        })
    }

    /// State from the excited population alone; q0 is the exact complement.
    pub fn from_excited(q1: T) -> Result<Self> {
        let q1 = Self::clamp_population("q1", q1)?;
        Ok(Self {
            q0: T::one() - q1,
            q1,
        })
    }

    fn clamp_population(name: &'static str, q: T) -> Result<T> {
        if !q.is_finite() || q < -T::STATE_TOL || q > T::one() + T::STATE_TOL {
            return Err(Error::invalid(name, "population ∈ [0, 1]", q));
        }
        Ok(q.max(T::zero()).min(T::one()))
    }

    pub fn q0(&self) -> T {
        self.q0
    }

    pub fn q1(&self) -> T {
        self.q1
    }
}
