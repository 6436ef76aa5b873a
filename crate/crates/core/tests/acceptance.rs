//! Acceptance suite: one test per shipping criterion, each printing a
//! single PASS/FAIL line with its measurements.
//!
//! Run with `cargo test -p thermoq --test acceptance -- --nocapture`.
//!
//! Criterion 5 is expected to fail, deliberately: it demands that the 4×4
//! integrator of the composite master equation reproduce the
//! pinned-auxiliary-population closed form (`delta_analytic`) to 1e-6 and
//! hold the auxiliary populations constant to 1e-8. The master equation
//! itself forbids both: the coherent swap necessarily drags the auxiliary
//! populations (amplitude ~Δ0), and the resulting detailed-balance current
//! doubles the damping rate of Δ. The companion test
//! `nonmarkov_cross_oracle_exact_reduction` checks the same trajectory
//! against the exact closed-form reduction at the same tolerances and
//! passes, which pins the discrepancy on the pinned-population formula
//! rather than on the integrator.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use thermoq::experiments::{count_violations, fig2_run, scan_with_config, Fig2Config, ScanConfig};
use thermoq::markov::{evolve_closed_form, evolve_ode, uniform_grid};
use thermoq::nonmarkov::{
    aux_population_drift_exact, delta_analytic, delta_exact, integrate_composite, qfi_nonmarkov,
    reduced_probe_exact, NonMarkovParams,
};
use thermoq::physics::{rates, thermal_excited_population, BathSpec, ProbeSpec};
use thermoq::qfi::{
    alpha, analytic_dq_dbeta, critical_time, default_fd_step, delta, finite_difference_dq_dbeta,
    qfi_diagonal, ratio_r, thermal_qfi, Classification,
};

// ---------------------------------------------------------------------
// deterministic draw machinery
// ---------------------------------------------------------------------

struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Random (probe, bath) pair in the well-conditioned window ωβ ≤ 2.5.
fn draw_pair(rng: &mut SplitMix64) -> (ProbeSpec<f64>, BathSpec<f64>) {
    loop {
        let omega = rng.uniform(0.3, 3.0);
        let beta = rng.uniform(0.05, 3.0);
        if omega * beta > 2.5 {
            continue;
        }
        let kappa = 10f64.powf(rng.uniform(-5.0, -3.0));
        let p = rng.uniform(0.0, 0.5);
        return (
            ProbeSpec::new(omega, p).unwrap(),
            BathSpec::new(beta, kappa).unwrap(),
        );
    }
}

/// Relative error with an absolute floor for values that vanish together.
fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-14 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn report(name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {name}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

// ---------------------------------------------------------------------
// criterion 1 — enhancement scan over the default grid
// ---------------------------------------------------------------------

#[test]
fn criterion_1_theorem_scan_default_grid() {
    let start = Instant::now();
    let points = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| scan_with_config(&ScanConfig::<f64>::default()).unwrap());
    let elapsed = start.elapsed();

    let violations = count_violations(&points);
    let mut cold = 0usize;
    let mut hot_or_thermal = 0usize;
    let mut worst_cold_excess = f64::INFINITY;
    let mut worst_hot = 0.0f64;
    let mut failures = Vec::new();
    for pt in &points {
        match pt.classification {
            Classification::Cold => {
                cold += 1;
                worst_cold_excess = worst_cold_excess.min(pt.r_max - 1.0);
                if pt.r_max <= 1.0 {
                    failures.push(format!(
                        "cold point (β={}, ω={}, p={}) has r_max = {}",
                        pt.bath.beta(),
                        pt.probe.omega(),
                        pt.probe.p(),
                        pt.r_max
                    ));
                }
                let r_tc = pt.r_at_tc.expect("cold points carry r(t_c)");
                if pt.r_max < r_tc {
                    failures.push(format!(
                        "cold point has r_max {} < r(t_c) {}",
                        pt.r_max, r_tc
                    ));
                }
            }
            _ => {
                hot_or_thermal += 1;
                worst_hot = worst_hot.max(pt.r_max);
                if pt.r_max > 1.0 + 1e-9 {
                    failures.push(format!(
                        "hot/thermal point (β={}, ω={}, p={}) has r_max = {}",
                        pt.bath.beta(),
                        pt.probe.omega(),
                        pt.probe.p(),
                        pt.r_max
                    ));
                }
            }
        }
    }

    let pass = violations == 0
        && failures.is_empty()
        && points.len() >= 75
        && cold > 0
        && hot_or_thermal > 0
        && elapsed < Duration::from_secs(10);
    report(
        "1 (theorem scan)",
        pass,
        &format!(
            "{} points ({cold} cold, {hot_or_thermal} hot/thermal), {violations} violations, \
             min cold r_max-1 = {worst_cold_excess:.3e}, max hot r_max = {worst_hot:.12}, \
             runtime {elapsed:.2?} single-threaded",
            points.len()
        ),
    );
    assert!(
        pass,
        "violations={violations}, failures={failures:?}, runtime={elapsed:?}"
    );
}

// ---------------------------------------------------------------------
// criterion 2 — algebraic identity suite
// ---------------------------------------------------------------------

#[test]
fn criterion_2_identity_suite() {
    let mut rng = SplitMix64::new(0x1d_2026);
    let mut worst_alpha = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for _ in 0..100 {
        let (probe, bath) = draw_pair(&mut rng);
        let r = rates(&probe, &bath);
        let pe = thermal_excited_population(probe.omega(), bath.beta()).unwrap();
        let weight = pe * (1.0 - pe);
        let f_thermal = thermal_qfi(probe.omega(), bath.beta()).unwrap();
        for &t in &uniform_grid(10.0 * r.relaxation_time(), 100) {
            let q1 = evolve_closed_form(&probe, &bath, t).unwrap().q1();
            let a = alpha(&probe, &bath, t).unwrap();
            worst_alpha = worst_alpha.max(rel_err(q1 * (1.0 - q1), weight * a));

            let dq = analytic_dq_dbeta(&probe, &bath, t).unwrap();
            let f = qfi_diagonal(q1, dq).unwrap();
            let r_val = ratio_r(&probe, &bath, t).unwrap();
            worst_ratio = worst_ratio.max(rel_err(r_val, f / f_thermal));
        }
    }
    let pass = worst_alpha <= 1e-10 && worst_ratio <= 1e-10;
    report(
        "2 (identity suite)",
        pass,
        &format!(
            "100 draws × 100 times: max rel err q(1-q)=pᵉ(1-pᵉ)α: {worst_alpha:.3e}, \
             r = F/F(β): {worst_ratio:.3e} (tolerance 1e-10)"
        ),
    );
    assert!(
        pass,
        "alpha identity {worst_alpha:e}, ratio identity {worst_ratio:e}"
    );
}

// ---------------------------------------------------------------------
// criterion 3 — derivative oracle
// ---------------------------------------------------------------------

#[test]
fn criterion_3_derivative_oracle() {
    let mut rng = SplitMix64::new(0xd0_0d1e);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for _ in 0..100 {
        let (probe, bath) = draw_pair(&mut rng);
        let r = rates(&probe, &bath);
        let h = default_fd_step(bath.beta());
        for &t in &uniform_grid(10.0 * r.relaxation_time(), 100) {
            let analytic = analytic_dq_dbeta(&probe, &bath, t).unwrap();
            if analytic.abs() <= 1e-8 {
                continue;
            }
            let fd = finite_difference_dq_dbeta(
                |beta| {
                    let bath = bath.with_beta(beta)?;
                    Ok(evolve_closed_form(&probe, &bath, t)?.q1())
                },
                bath.beta(),
                h,
            )
            .unwrap();
            worst = worst.max(rel_err(analytic, fd));
            checked += 1;
        }
    }
    let pass = worst <= 1e-6 && checked > 5000;
    report(
        "3 (derivative oracle)",
        pass,
        &format!(
            "{checked} points with |∂_β q| > 1e-8: max rel disagreement {worst:.3e} \
             (tolerance 1e-6, h = max(1e-6, 1e-5·β))"
        ),
    );
    assert!(pass, "worst = {worst:e} over {checked} points");
}

// ---------------------------------------------------------------------
// criterion 4 — Markovian RK4 vs the closed form
// ---------------------------------------------------------------------

#[test]
fn criterion_4_markov_ode_oracle() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0x0de_0de);
    let mut sup = 0.0f64;
    for _ in 0..100 {
        let (probe, bath) = draw_pair(&mut rng);
        let tau = rates(&probe, &bath).relaxation_time();
        let traj = evolve_ode(&probe, &bath, 10.0 * tau, 0.01 * tau).unwrap();
        for &(t, ref state) in traj.samples() {
            let exact = evolve_closed_form(&probe, &bath, t).unwrap();
            sup = sup.max((state.q1() - exact.q1()).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = sup <= 1e-8 && elapsed < Duration::from_secs(5);
    report(
        "4 (Markov ODE oracle)",
        pass,
        &format!(
            "100 draws, step 0.01/|λ|, t ∈ [0, 10/|λ|]: sup-norm {sup:.3e} \
             (tolerance 1e-8), runtime {elapsed:.2?}"
        ),
    );
    assert!(pass, "sup = {sup:e}, runtime = {elapsed:?}");
}

// ---------------------------------------------------------------------
// criterion 5 — non-Markovian cross-oracle (expected FAIL; see header)
// ---------------------------------------------------------------------

struct NmRun {
    times: Vec<f64>,
    delta_rk4: Vec<f64>,
    q1_rk4: Vec<f64>,
    aux_drift: Vec<f64>,
    coherence_sup: f64,
    trace_drift: f64,
    min_eigenvalue: f64,
    runtime: Duration,
    params: NonMarkovParams<f64>,
}

fn nm_reference_run() -> &'static NmRun {
    static RUN: OnceLock<NmRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let params = NonMarkovParams::new(
            ProbeSpec::new(1.0, 0.0).unwrap(),
            BathSpec::new(0.2, 1e-4).unwrap(),
            10.0,
        )
        .unwrap();
        let t_max = 2.0 / params.gamma_t();
        // RK4 phase drift grows like (Ωh)⁴·Ω t/120 over this ~5e6-step
        // horizon; half the default step keeps it an order below the 1e-6
        // cross-oracle budget.
        let start = Instant::now();
        let traj = integrate_composite(&params, t_max, params.default_step() / 2.0).unwrap();
        let runtime = start.elapsed();
        traj.validate().unwrap();

        let aux0 = traj.samples()[0].1.aux_excited_population();
        let mut times = Vec::new();
        let mut delta_rk4 = Vec::new();
        let mut q1_rk4 = Vec::new();
        let mut aux_drift = Vec::new();
        let mut coherence_sup = 0.0f64;
        let mut min_eigenvalue = f64::INFINITY;
        for (t, state) in traj.samples() {
            times.push(*t);
            delta_rk4.push(state.delta());
            q1_rk4.push(state.probe_excited_population());
            aux_drift.push(state.aux_excited_population() - aux0);
            coherence_sup = coherence_sup.max(state.probe_coherence_magnitude());
            min_eigenvalue = min_eigenvalue.min(state.min_eigenvalue());
        }
        NmRun {
            times,
            delta_rk4,
            q1_rk4,
            aux_drift,
            coherence_sup,
            trace_drift: traj.max_trace_drift(),
            min_eigenvalue,
            runtime,
            params,
        }
    })
}

#[test]
fn criterion_5_nonmarkov_cross_oracle_pinned_population_form() {
    let run = nm_reference_run();
    let mut sup_delta = 0.0f64;
    let mut max_aux = 0.0f64;
    for (i, &t) in run.times.iter().enumerate() {
        sup_delta =
            sup_delta.max((run.delta_rk4[i] - delta_analytic(&run.params, t).unwrap()).abs());
        max_aux = max_aux.max(run.aux_drift[i].abs());
    }

    let mut failures = Vec::new();
    if sup_delta > 1e-6 {
        failures.push(format!("sup |Δ_rk4 − Δ_analytic| = {sup_delta:.3e} > 1e-6"));
    }
    if run.trace_drift > 1e-10 {
        failures.push(format!("trace drift = {:.3e} > 1e-10", run.trace_drift));
    }
    if max_aux > 1e-8 {
        failures.push(format!("aux population drift = {max_aux:.3e} > 1e-8"));
    }
    if run.coherence_sup > 1e-10 {
        failures.push(format!(
            "probe coherence = {:.3e} > 1e-10",
            run.coherence_sup
        ));
    }
    if run.runtime >= Duration::from_secs(60) {
        failures.push(format!("runtime {:?} ≥ 60 s", run.runtime));
    }

    let pass = failures.is_empty();
    report(
        "5 (non-Markov cross-oracle, pinned-population form)",
        pass,
        &format!(
            "sup |Δ_rk4 − Δ_analytic| = {sup_delta:.3e} (tol 1e-6), trace drift {:.3e} \
             (tol 1e-10), aux drift {max_aux:.3e} (tol 1e-8), probe coherence {:.3e} \
             (tol 1e-10), min eigenvalue {:.3e}, runtime {:.2?} (< 60 s)",
            run.trace_drift, run.coherence_sup, run.min_eigenvalue, run.runtime
        ),
    );
    assert!(
        pass,
        "{failures:?} — the master equation's swap term moves the auxiliary populations \
         (amplitude ~Δ0) and doubles the damping of Δ relative to the pinned-population \
         closed form, so this criterion cannot be met by a faithful integrator; the \
         exact-reduction cross-oracle below passes at the same tolerances"
    );
}

/// Companion check: the same trajectory against the exact closed-form
/// reduction, at the tolerances of criterion 5. Passing here while the
/// pinned-population comparison fails localizes the defect in that
/// formula, not in the integrator.
#[test]
fn nonmarkov_cross_oracle_exact_reduction() {
    let run = nm_reference_run();
    let mut sup_delta = 0.0f64;
    let mut sup_q1 = 0.0f64;
    let mut sup_aux = 0.0f64;
    for (i, &t) in run.times.iter().enumerate() {
        sup_delta = sup_delta.max((run.delta_rk4[i] - delta_exact(&run.params, t).unwrap()).abs());
        sup_q1 =
            sup_q1.max((run.q1_rk4[i] - reduced_probe_exact(&run.params, t).unwrap().q1()).abs());
        sup_aux = sup_aux
            .max((run.aux_drift[i] - aux_population_drift_exact(&run.params, t).unwrap()).abs());
    }
    let pass = sup_delta <= 1e-6
        && sup_q1 <= 1e-6
        && sup_aux <= 1e-6
        && run.trace_drift <= 1e-10
        && run.coherence_sup <= 1e-10
        && run.min_eigenvalue >= -1e-10;
    report(
        "5-companion (exact-reduction cross-oracle)",
        pass,
        &format!(
            "sup |Δ_rk4 − Δ_exact| = {sup_delta:.3e}, sup |q1_rk4 − q1_exact| = {sup_q1:.3e}, \
             sup |aux drift − closed form| = {sup_aux:.3e} (tolerances 1e-6)"
        ),
    );
    assert!(pass, "Δ {sup_delta:e}, q1 {sup_q1:e}, aux {sup_aux:e}");
}

// ---------------------------------------------------------------------
// criterion 6 — paired hot/cold non-Markovian comparison (fig2)
// ---------------------------------------------------------------------

#[test]
fn criterion_6_fig2_reproduction() {
    let config = Fig2Config::<f64>::default();
    let out = fig2_run(&config).unwrap();
    let mut failures = Vec::new();

    // (a) hot and cold maxima agree within 1% per β.
    for gap in &out.report.gaps {
        if gap.relative_max_gap > 0.01 {
            failures.push(format!(
                "β={}: hot/cold max gap {:.3e} > 1%",
                gap.beta, gap.relative_max_gap
            ));
        }
    }

    // (b) every transient maximum exceeds its asymptote at 20/Γ_T.
    for e in &out.report.entries {
        if e.max_qfi <= e.asymptotic_qfi {
            failures.push(format!(
                "β={} p={}: max {:.6} ≤ asymptote {:.6}",
                e.beta, e.p, e.max_qfi, e.asymptotic_qfi
            ));
        }
    }

    // (c) ≥ 10 strict local maxima of each QFI trajectory in [0, 1/Γ_T];
    // counted on a dense sub-window (15 swap periods ≪ 1/Γ_T).
    let mut min_maxima = usize::MAX;
    for e in &out.report.entries {
        let probe = ProbeSpec::new(config.omega, e.p).unwrap();
        let bath = BathSpec::new(e.beta, config.kappa).unwrap();
        let params = NonMarkovParams::new(probe, bath, config.coupling).unwrap();
        let period = std::f64::consts::TAU / params.big_omega().unwrap();
        let window = (15.0 * period).min(1.0 / params.gamma_t());
        let grid = uniform_grid(window, 15 * 80);
        let qfi: Vec<f64> = grid
            .iter()
            .map(|&t| qfi_nonmarkov(&params, t).unwrap())
            .collect();
        let count = qfi
            .windows(3)
            .filter(|w| w[1] > w[0] && w[1] > w[2])
            .count();
        min_maxima = min_maxima.min(count);
        if count < 10 {
            failures.push(format!(
                "β={} p={}: only {count} local maxima in the window",
                e.beta, e.p
            ));
        }
    }

    // (d) maxima within 1% of the weak-damping prediction 4ω²pᵉ(1−pᵉ):
    // 50-digit values 0.96104298296611660 (β=0.2), 0.78644773296592741
    // (β=0.5).
    let mut worst_d = 0.0f64;
    for e in &out.report.entries {
        let predicted = if e.beta == 0.2 {
            0.961_042_982_966_116_6
        } else {
            0.786_447_732_965_927_4
        };
        let err = (e.max_qfi - predicted).abs() / predicted;
        worst_d = worst_d.max(err);
        if err > 0.01 {
            failures.push(format!(
                "β={} p={}: max {:.6} departs from prediction {predicted:.6} by {err:.3e}",
                e.beta, e.p, e.max_qfi
            ));
        }
    }

    let max_gap = out
        .report
        .gaps
        .iter()
        .map(|g| g.relative_max_gap)
        .fold(0.0f64, f64::max);
    let pass = failures.is_empty();
    report(
        "6 (fig2 reproduction)",
        pass,
        &format!(
            "4 runs: max hot/cold gap {max_gap:.3e} (tol 1e-2), all maxima above asymptotes, \
             ≥ {min_maxima} local maxima per trajectory (need 10), \
             max departure from 4ω²pᵉ(1−pᵉ): {worst_d:.3e} (tol 1e-2)"
        ),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------------
// criterion 7 — spot values of the closed forms
// ---------------------------------------------------------------------

#[test]
fn criterion_7_spot_values() {
    // 50-digit evaluations of the closed forms at ω=1, β=0.5, κ=1e-4, p=0.
    const T_C: f64 = 4_295.704_571_147_613;
    const DELTA_TC: f64 = 1.181_351_419_063_994;
    const ALPHA_TC: f64 = 0.892_581_046_688_727_7;
    const R_TC: f64 = 1.563_545_607_989_143;

    let probe = ProbeSpec::new(1.0, 0.0).unwrap();
    let bath = BathSpec::new(0.5, 1e-4).unwrap();
    let tc = critical_time(&probe, &bath).unwrap().unwrap();
    let d = delta(&probe, &bath, tc).unwrap();
    let a = alpha(&probe, &bath, tc).unwrap();
    let r = ratio_r(&probe, &bath, tc).unwrap();

    let errs = [
        rel_err(tc, T_C),
        rel_err(d, DELTA_TC),
        rel_err(a, ALPHA_TC),
        rel_err(r, R_TC),
    ];
    let worst = errs.iter().copied().fold(0.0f64, f64::max);
    let pass = worst <= 1e-4;
    report(
        "7 (spot values)",
        pass,
        &format!(
            "t_c = {tc:.6} (ref {T_C:.6}), δ = {d:.8}, α = {a:.8}, r = {r:.8}; \
             max rel err {worst:.3e} (tolerance 1e-4)"
        ),
    );
    assert!(pass, "errors: {errs:?}");
}
