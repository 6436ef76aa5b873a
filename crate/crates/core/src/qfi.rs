//! Quantum Fisher information for diagonal qubit states and the transient
//! enhancement machinery.
//!
//! For a state diagonal in the energy basis with excited population q, the
//! QFI for β reduces to F(β,t) = (∂_β q)²/(q(1−q)). Along Markovian
//! relaxation this factorizes through two dimensionless functions,
//!
//!   ∂_β q(β,t)      = −2ω pᵉ(1−pᵉ) δ(β,t),
//!   q(1−q)          = pᵉ(1−pᵉ) α(β,t),
//!   δ(β,t)          = 1 − e^{λt} + 2t (pᵉ−p)(λ²/γ) e^{λt},
//!   α(β,t)          = 1 − a e^{2λt} + b e^{λt},
//!   a               = (pᵉ−p)²/(pᵉ(1−pᵉ)) ≥ 0,
//!   b               = (pᵉ−p)(2pᵉ−1)/(pᵉ(1−pᵉ)),
//!
//! so the enhancement ratio over the steady state is r = F(β,t)/F(β) = δ²/α.
//! Probes colder than the bath (p < pᵉ, so b < 0) push δ above 1 at the
//! critical time t_c and get r > 1; hotter and exactly-thermal probes never
//! do. A central finite difference in β provides the independent derivative
//! oracle for every ∂_β in the crate.

use serde::Serialize;

use crate::physics::{rates, thermal_excited_population, BathSpec, ProbeSpec};
use crate::scalar::{lit, Real};
use crate::search::{grid_then_golden_max, Maximum};
use crate::{Error, Result};

/// Points on the ratio scan grid.
pub const RATIO_SCAN_POINTS: usize = 2000;
/// Scan horizon in units of 1/|λ|.
pub const RATIO_SCAN_HORIZON: f64 = 30.0;
/// Golden-section tolerance for the refinement, in units of t·|λ|.
pub const RATIO_REFINE_TOL: f64 = 1e-10;

/// Initial probe preparation relative to the bath temperature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Hot,
    Cold,
    Thermal,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Hot => write!(f, "hot"),
            Classification::Cold => write!(f, "cold"),
            Classification::Thermal => write!(f, "thermal"),
        }
    }
}

/// Hot / cold / thermal split of the initial preparation; |p − pᵉ| at or
/// below `THERMAL_TOL` counts as thermal.
pub fn classify<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>) -> Result<Classification> {
    let pe = thermal_excited_population(probe.omega(), bath.beta())?;
    Ok(if (probe.p() - pe).abs() <= T::THERMAL_TOL {
        Classification::Thermal
    } else if probe.p() < pe {
        Classification::Cold
    } else {
        Classification::Hot
    })
}

/// All closed-form pieces of the enhancement analysis at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremQuantities<T> {
    pub delta: T,
    pub alpha: T,
    pub a: T,
    pub b: T,
    /// Stationary-point coefficient 2(pᵉ−p)λ²/γ: n > 0 for cold probes,
    /// m < 0 for hot ones, 0 for thermal.
    pub n_or_m: T,
    pub ratio: T,
    pub classification: Classification,
}

impl<T: Real> TheoremQuantities<T> {
    pub fn evaluate(probe: &ProbeSpec<T>, bath: &BathSpec<T>, t: T) -> Result<Self> {
        let forms = Forms::new(probe, bath)?;
        let delta = forms.delta(t);
        Ok(TheoremQuantities {
            delta,
            alpha: forms.alpha(t),
            a: forms.a,
            b: forms.b,
            n_or_m: forms.stationary_coefficient,
            ratio: forms.ratio(t),
            classification: classify(probe, bath)?,
        })
    }
}

/// Precomputed closed-form ingredients for one (probe, bath) pair.
struct Forms<T> {
    p: T,
    pe: T,
    lambda: T,
    /// 2(pᵉ−p)λ²/γ, the n (cold) / m (hot) coefficient.
    stationary_coefficient: T,
    a: T,
    b: T,
}

impl<T: Real> Forms<T> {
    fn new(probe: &ProbeSpec<T>, bath: &BathSpec<T>) -> Result<Self> {
        let r = rates(probe, bath);
        let pe = thermal_excited_population(probe.omega(), bath.beta())?;
        let weight = pe * (T::one() - pe);
        if weight <= T::zero() {
            return Err(Error::invalid(
                "omega*beta",
                "pᵉ(1−pᵉ) underflows to 0; the bath is too cold for this precision",
                probe.omega() * bath.beta(),
            ));
        }
        let gap = pe - probe.p();
        Ok(Self {
            p: probe.p(),
            pe,
            lambda: r.lambda,
            stationary_coefficient: lit::<T>(2.0) * gap * r.lambda * r.lambda / r.gamma,
            a: gap * gap / weight,
            b: gap * (lit::<T>(2.0) * pe - T::one()) / weight,
        })
    }

    fn delta(&self, t: T) -> T {
        let u = (self.lambda * t).exp();
        T::one() - u + t * self.stationary_coefficient * u
    }

    fn alpha(&self, t: T) -> T {
        let u = (self.lambda * t).exp();
        T::one() - self.a * u * u + self.b * u
    }

    /// r = δ²/α, with the removable 0/0 at (t = 0, p ∈ {0}) fixed to its
    /// trajectory limit 0.
    fn ratio(&self, t: T) -> T {
        let d = self.delta(t);
        if d == T::zero() {
            return T::zero();
        }
        d * d / self.alpha(t)
    }

    fn critical_time(&self) -> Option<T> {
        // Interior stationary point of δ exists at positive time only for
        // cold probes: t_c = (λ−n)/(nλ) with n > 0. For hot probes the
        // stationary point sits at t ≤ 0, for thermal ones n = 0.
        if (self.p - self.pe).abs() <= T::THERMAL_TOL || self.p > self.pe {
            return None;
        }
        let n = self.stationary_coefficient;
        Some((self.lambda - n) / (n * self.lambda))
    }
}

/// QFI of a diagonal qubit state from its excited population and that
/// population's β-derivative.
///
/// A vanishing derivative gives exactly 0, including at q1 ∈ {0, 1} where
/// that is the limit along the physical trajectory; a pure state with a
/// nonzero derivative is rejected.
pub fn qfi_diagonal<T: Real>(q1: T, dq1_dbeta: T) -> Result<T> {
    if !q1.is_finite() || q1 < T::zero() || q1 > T::one() {
        return Err(Error::invalid("q1", "q1 ∈ [0, 1]", q1));
    }
    if dq1_dbeta == T::zero() {
        return Ok(T::zero());
    }
    let weight = q1 * (T::one() - q1);
    if weight < lit(1e-300) || weight == T::zero() {
        return Err(Error::DegenerateState);
    }
    Ok(dq1_dbeta * dq1_dbeta / weight)
}

/// Steady-state QFI F(β) = 4ω² pᵉ(1−pᵉ).
pub fn thermal_qfi<T: Real>(omega: T, beta: T) -> Result<T> {
    let pe = thermal_excited_population(omega, beta)?;
    Ok(lit::<T>(4.0) * omega * omega * pe * (T::one() - pe))
}

fn validate_time<T: Real>(t: T) -> Result<()> {
    if t.is_nan() || t < T::zero() {
        return Err(Error::invalid("t", "must be ≥ 0", t));
    }
    Ok(())
}

/// δ(β,t) = 1 − e^{λt} + 2t(pᵉ−p)(λ²/γ)e^{λt}.
pub fn delta<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>, t: T) -> Result<T> {
    validate_time(t)?;
    Ok(Forms::new(probe, bath)?.delta(t))
}

/// α(β,t) = 1 − a e^{2λt} + b e^{λt}; satisfies q(1−q) = pᵉ(1−pᵉ)α, so
/// α(β,0) = p(1−p)/(pᵉ(1−pᵉ)) and α → 1 as t → ∞.
pub fn alpha<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>, t: T) -> Result<T> {
    validate_time(t)?;
    Ok(Forms::new(probe, bath)?.alpha(t))
}

/// Enhancement ratio r(β,t) = δ²/α = F(β,t)/F(β).
pub fn ratio_r<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>, t: T) -> Result<T> {
    validate_time(t)?;
    Ok(Forms::new(probe, bath)?.ratio(t))
}

/// Interior maximum of δ for cold probes: t_c = (λ−n)/(nλ), n = 2(pᵉ−p)λ²/γ.
///
/// Returns `None` for hot probes (the stationary point sits at t ≤ 0) and
/// for thermal ones (n = 0).
pub fn critical_time<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>) -> Result<Option<T>> {
    Ok(Forms::new(probe, bath)?.critical_time())
}

/// Analytic β-derivative of the transient population:
/// ∂_β q(β,t) = −2ω pᵉ(1−pᵉ) δ(β,t).
///
/// The sign follows from differentiating the relaxation solution directly;
/// the QFI is insensitive to it.
pub fn analytic_dq_dbeta<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>, t: T) -> Result<T> {
    validate_time(t)?;
    let pe = thermal_excited_population(probe.omega(), bath.beta())?;
    let weight = pe * (T::one() - pe);
    Ok(-lit::<T>(2.0) * probe.omega() * weight * delta(probe, bath, t)?)
}

/// Central finite difference (f(β+h) − f(β−h))/(2h) — the independent oracle
/// for every analytic ∂_β in the crate.
pub fn finite_difference_dq_dbeta<T: Real>(
    state_function: impl Fn(T) -> Result<T>,
    beta: T,
    h: T,
) -> Result<T> {
    if !h.is_finite() || h <= T::zero() {
        return Err(Error::invalid("h", "must be finite and > 0", h));
    }
    let plus = state_function(beta + h)?;
    let minus = state_function(beta - h)?;
    Ok((plus - minus) / (h + h))
}

/// Default central-difference step h = max(1e−6, 1e−5 β).
pub fn default_fd_step<T: Real>(beta: T) -> T {
    lit::<T>(1e-6).max(lit::<T>(1e-5) * beta)
}

/// Result of the r-maximum search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioMaximum<T> {
    pub r_max: T,
    pub t_at_max: T,
}

/// Maximum of r over t: dense scan of `RATIO_SCAN_POINTS` points on
/// [0, `RATIO_SCAN_HORIZON`/|λ|] plus golden-section refinement, with the
/// cold critical time t_c always included as a candidate so that
/// r_max ≥ r(t_c) by construction.
pub fn max_ratio<T: Real>(probe: &ProbeSpec<T>, bath: &BathSpec<T>) -> Result<RatioMaximum<T>> {
    let forms = Forms::new(probe, bath)?;
    let tau = forms.lambda.abs().recip();
    let horizon = lit::<T>(RATIO_SCAN_HORIZON) * tau;
    let tol = lit::<T>(RATIO_REFINE_TOL) * tau;
    let Maximum { x, value } = grid_then_golden_max(
        |t| forms.ratio(t),
        T::zero(),
        horizon,
        RATIO_SCAN_POINTS,
        tol,
    );
    let mut best = RatioMaximum {
        r_max: value,
        t_at_max: x,
    };
    if let Some(tc) = forms.critical_time() {
        let r_tc = forms.ratio(tc);
        if r_tc > best.r_max {
            best = RatioMaximum {
                r_max: r_tc,
                t_at_max: tc,
            };
        }
    }
    Ok(best)
}
