//! Deterministic parameter sweeps: the hot/cold enhancement scan over the
//! Markovian closed forms, the paired hot/cold non-Markovian QFI comparison
//! (the `fig2` experiment), and per-sample Markov trace tables.
//!
//! Grid points are independent tasks; sweeps run on rayon with results
//! gathered in grid order, so worker count never changes the output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::markov::uniform_grid;
use crate::nonmarkov::{qfi_nonmarkov, reduced_probe_analytic, NonMarkovParams};
use crate::physics::{thermal_excited_population, BathSpec, ProbeSpec};
use crate::qfi::{
    analytic_dq_dbeta, classify, critical_time, max_ratio, qfi_diagonal, ratio_r, Classification,
};
use crate::scalar::{lit, Real};
use crate::search::grid_then_golden_max;
use crate::{markov, Error, Result};

/// Tolerance granted to the hot/thermal branch of the scan verdict; the
/// closed forms are exact, so this budget covers rounding only.
pub const HOT_BRANCH_TOL: f64 = 1e-9;
/// Offset used for the near-thermal probes p = pᵉ ∓ offset in the default
/// scan grid.
pub const NEAR_THERMAL_OFFSET: f64 = 0.02;
/// Asymptotic QFI is read off at t = 20/Γ_T, where the oscillation envelope
/// is below 5e-5.
pub const ASYMPTOTE_HORIZON_FACTOR: f64 = 20.0;
/// The transient maximum hides in the first swap periods; scan this many.
pub const MAX_SEARCH_PERIODS: usize = 40;
/// Scan density for the transient-maximum search, points per swap period.
pub const MAX_SEARCH_POINTS_PER_PERIOD: usize = 40;

/// Scan verdict: `Consistent` when cold probes show r_max > 1 and hot or
/// thermal ones stay at r_max ≤ 1 + `HOT_BRANCH_TOL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violation,
}

/// One evaluated grid point of the enhancement scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanPoint<T: Real> {
    pub probe: ProbeSpec<T>,
    pub bath: BathSpec<T>,
    pub classification: Classification,
    pub r_max: T,
    pub t_at_rmax: T,
    pub t_c: Option<T>,
    pub r_at_tc: Option<T>,
    pub verdict: Verdict,
}

/// Grid for [`scan_with_config`]. `include_near_thermal` injects the
/// clamped p = pᵉ ∓ 0.02 probes per (β, ω) pair, bracketing the hot/cold
/// boundary where the classification flips.
///
/// `max_omega_beta`, when set, drops (β, ω) pairs with ωβ above the cap.
/// The default grid caps at 2.0: for a deep-cold probe the peak excess
/// r(t_c) − 1 ≈ 2·2pᵉcoth(ωβ)·e^{λt_c} falls below one f64 ulp of 1 once
/// ωβ grows past ≈ 2.1, so colder corners cannot witness the strict r > 1
/// branch at this precision. Explicit configs default to no cap.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig<T: Real> {
    pub beta_list: Vec<T>,
    pub omega_list: Vec<T>,
    pub kappa: T,
    pub p_list: Vec<T>,
    pub include_near_thermal: bool,
    #[serde(default = "no_cap")]
    pub max_omega_beta: Option<T>,
}

fn no_cap<T>() -> Option<T> {
    None
}

/// Default ωβ cap; see [`ScanConfig::max_omega_beta`].
pub const DEFAULT_OMEGA_BETA_CAP: f64 = 2.0;

impl<T: Real> Default for ScanConfig<T> {
    fn default() -> Self {
        Self {
            beta_list: [0.1, 0.2, 0.5, 1.0, 2.0].iter().map(|&x| lit(x)).collect(),
            omega_list: [0.5, 1.0, 2.0].iter().map(|&x| lit(x)).collect(),
            kappa: lit(1e-4),
            p_list: [0.0, 0.05, 0.15, 0.35, 0.5]
                .iter()
                .map(|&x| lit(x))
                .collect(),
            include_near_thermal: true,
            max_omega_beta: Some(lit(DEFAULT_OMEGA_BETA_CAP)),
        }
    }
}

fn evaluate_point<T: Real>(probe: ProbeSpec<T>, bath: BathSpec<T>) -> Result<ScanPoint<T>> {
    let classification = classify(&probe, &bath)?;
    let t_c = critical_time(&probe, &bath)?;
    let r_at_tc = match t_c {
        Some(tc) => Some(ratio_r(&probe, &bath, tc)?),
        None => None,
    };
    let m = max_ratio(&probe, &bath)?;
    let verdict = match classification {
        Classification::Cold if m.r_max > T::one() => Verdict::Consistent,
        Classification::Hot | Classification::Thermal
            if m.r_max <= T::one() + lit(HOT_BRANCH_TOL) =>
        {
            Verdict::Consistent
        }
        _ => Verdict::Violation,
    };
    Ok(ScanPoint {
        probe,
        bath,
        classification,
        r_max: m.r_max,
        t_at_rmax: m.t_at_max,
        t_c,
        r_at_tc,
        verdict,
    })
}

/// Cartesian scan over explicit parameter lists, ordered β-major, then ω,
/// then p. Any invalid combination aborts with its grid index.
pub fn theorem_scan<T: Real>(
    beta_list: &[T],
    omega_list: &[T],
    kappa: T,
    p_list: &[T],
) -> Result<Vec<ScanPoint<T>>> {
    let mut points = Vec::with_capacity(beta_list.len() * omega_list.len() * p_list.len());
    let mut index = 0usize;
    for &beta in beta_list {
        for &omega in omega_list {
            for &p in p_list {
                let bath =
                    BathSpec::new(beta, kappa).map_err(|e| Error::at_grid_point(index, e))?;
                let probe = ProbeSpec::new(omega, p).map_err(|e| Error::at_grid_point(index, e))?;
                points.push((index, probe, bath));
                index += 1;
            }
        }
    }
    points
        .into_par_iter()
        .map(|(i, probe, bath)| evaluate_point(probe, bath).map_err(|e| Error::at_grid_point(i, e)))
        .collect()
}

/// Scan with the near-thermal probes injected per (β, ω) pair.
pub fn scan_with_config<T: Real>(config: &ScanConfig<T>) -> Result<Vec<ScanPoint<T>>> {
    let mut points = Vec::new();
    let mut index = 0usize;
    for &beta in &config.beta_list {
        for &omega in &config.omega_list {
            if let Some(cap) = config.max_omega_beta {
                if omega * beta > cap {
                    continue;
                }
            }
            let bath =
                BathSpec::new(beta, config.kappa).map_err(|e| Error::at_grid_point(index, e))?;
            let p_list = if config.include_near_thermal {
                let pe = thermal_excited_population(omega, beta)
                    .map_err(|e| Error::at_grid_point(index, e))?;
                let off = lit::<T>(NEAR_THERMAL_OFFSET);
                let clamp = |p: T| p.max(T::zero()).min(lit(0.5));
                let mut list = Vec::with_capacity(config.p_list.len() + 2);
                // Keep the configured points sorted around the injected pair.
                for &p in &config.p_list {
                    if p < lit(0.2) {
                        list.push(p);
                    }
                }
                list.push(clamp(pe - off));
                list.push(clamp(pe + off));
                for &p in &config.p_list {
                    if p >= lit(0.2) {
                        list.push(p);
                    }
                }
                list
            } else {
                config.p_list.clone()
            };
            for p in p_list {
                let probe = ProbeSpec::new(omega, p).map_err(|e| Error::at_grid_point(index, e))?;
                points.push((index, probe, bath));
                index += 1;
            }
        }
    }
    points
        .into_par_iter()
        .map(|(i, probe, bath)| evaluate_point(probe, bath).map_err(|e| Error::at_grid_point(i, e)))
        .collect()
}

pub fn count_violations<T: Real>(points: &[ScanPoint<T>]) -> usize {
    points
        .iter()
        .filter(|p| p.verdict == Verdict::Violation)
        .count()
}

/// Configuration of the paired hot/cold non-Markovian comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Fig2Config<T: Real> {
    pub omega: T,
    pub kappa: T,
    pub coupling: T,
    pub beta_list: Vec<T>,
    pub p_list: Vec<T>,
    /// CSV trajectory samples per (β, p) pair.
    pub samples: usize,
    /// Trajectory horizon; defaults to 2/Γ_T per β.
    pub t_max: Option<T>,
}

impl<T: Real> Default for Fig2Config<T> {
    fn default() -> Self {
        Self {
            omega: T::one(),
            kappa: lit(1e-4),
            coupling: lit(10.0),
            beta_list: vec![lit(0.2), lit(0.5)],
            p_list: vec![T::zero(), lit(0.5)],
            samples: 2000,
            t_max: None,
        }
    }
}

/// Summary for one (β, p) pair.
#[derive(Clone, Debug, Serialize)]
pub struct Fig2Entry<T> {
    pub beta: T,
    pub p: T,
    pub t_max: T,
    pub samples: usize,
    pub max_qfi: T,
    pub t_at_max: T,
    pub asymptotic_qfi: T,
}

/// Relative gap between the hot and cold transient maxima at one β.
#[derive(Clone, Debug, Serialize)]
pub struct Fig2Gap<T> {
    pub beta: T,
    pub relative_max_gap: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig2Report<T: Real> {
    pub config: Fig2Config<T>,
    pub entries: Vec<Fig2Entry<T>>,
    pub gaps: Vec<Fig2Gap<T>>,
}

/// One sampled trajectory (the CSV payload).
#[derive(Clone, Debug)]
pub struct Fig2Trajectory<T> {
    pub beta: T,
    pub p: T,
    /// (t, q1, qfi) rows.
    pub points: Vec<(T, T, T)>,
}

#[derive(Clone, Debug)]
pub struct Fig2Output<T: Real> {
    pub report: Fig2Report<T>,
    pub trajectories: Vec<Fig2Trajectory<T>>,
}

/// Runs the paired comparison on the closed-form (pinned-population) path.
///
/// Every (β, p) pair must be underdamped. Entries are ordered β-major, and
/// per β all pairs share the same time grid.
pub fn fig2_run<T: Real>(config: &Fig2Config<T>) -> Result<Fig2Output<T>> {
    let mut jobs = Vec::new();
    for &beta in &config.beta_list {
        for &p in &config.p_list {
            let probe = ProbeSpec::new(config.omega, p)?;
            let bath = BathSpec::new(beta, config.kappa)?;
            let params = NonMarkovParams::new(probe, bath, config.coupling)?;
            // Fail fast on the regime check before spawning work.
            params.big_omega()?;
            jobs.push(params);
        }
    }

    let results: Vec<(Fig2Entry<T>, Fig2Trajectory<T>)> = jobs
        .par_iter()
        .map(|params| evaluate_fig2_pair(params, config))
        .collect::<Result<Vec<_>>>()?;

    let (entries, trajectories): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let mut gaps = Vec::new();
    for &beta in &config.beta_list {
        let maxima: Vec<T> = entries
            .iter()
            .filter(|e| e.beta == beta)
            .map(|e| e.max_qfi)
            .collect();
        if maxima.len() >= 2 {
            let hi = maxima.iter().copied().fold(T::neg_infinity(), T::max);
            let lo = maxima.iter().copied().fold(T::infinity(), T::min);
            gaps.push(Fig2Gap {
                beta,
                relative_max_gap: (hi - lo) / hi,
            });
        }
    }

    Ok(Fig2Output {
        report: Fig2Report {
            config: config.clone(),
            entries,
            gaps,
        },
        trajectories,
    })
}

fn evaluate_fig2_pair<T: Real>(
    params: &NonMarkovParams<T>,
    config: &Fig2Config<T>,
) -> Result<(Fig2Entry<T>, Fig2Trajectory<T>)> {
    let gamma_t = params.gamma_t();
    let t_max = config.t_max.unwrap_or_else(|| lit::<T>(2.0) / gamma_t);
    let grid = uniform_grid(t_max, config.samples.max(1));
    let points = grid
        .iter()
        .map(|&t| {
            Ok((
                t,
                reduced_probe_analytic(params, t)?.q1(),
                qfi_nonmarkov(params, t)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    // The transient maximum sits within the first swap periods, where the
    // envelope is still near 1; scan them densely, then refine.
    let period = T::TAU() / params.big_omega()?;
    let window = (period * lit(MAX_SEARCH_PERIODS as f64)).min(t_max);
    let n_scan = MAX_SEARCH_PERIODS * MAX_SEARCH_POINTS_PER_PERIOD;
    let m = grid_then_golden_max(
        |t| qfi_nonmarkov(params, t).unwrap_or_else(|_| T::nan()),
        T::zero(),
        window,
        n_scan,
        period * lit(1e-9),
    );

    let asymptotic_qfi = qfi_nonmarkov(params, lit::<T>(ASYMPTOTE_HORIZON_FACTOR) / gamma_t)?;

    Ok((
        Fig2Entry {
            beta: params.bath().beta(),
            p: params.probe().p(),
            t_max,
            samples: config.samples.max(1),
            max_qfi: m.value,
            t_at_max: m.x,
            asymptotic_qfi,
        },
        Fig2Trajectory {
            beta: params.bath().beta(),
            p: params.probe().p(),
            points,
        },
    ))
}

/// One row of the Markov trace table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MarkovTraceRow<T> {
    pub t: T,
    pub q1: T,
    pub dq_dbeta: T,
    pub qfi: T,
    pub ratio: T,
}

/// Per-sample (t, q1, ∂_β q1, F, r) along the Markovian closed form.
pub fn markov_trace_run<T: Real>(
    probe: &ProbeSpec<T>,
    bath: &BathSpec<T>,
    t_max: T,
    samples: usize,
) -> Result<Vec<MarkovTraceRow<T>>> {
    let grid = uniform_grid(t_max, samples.max(1));
    let traj = markov::sample_trajectory(probe, bath, &grid)?;
    traj.samples()
        .iter()
        .map(|&(t, ref state)| {
            let dq = analytic_dq_dbeta(probe, bath, t)?;
            Ok(MarkovTraceRow {
                t,
                q1: state.q1(),
                dq_dbeta: dq,
                qfi: qfi_diagonal(state.q1(), dq)?,
                ratio: ratio_r(probe, bath, t)?,
            })
        })
        .collect()
}
