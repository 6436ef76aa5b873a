//! Subcommand implementations.

use std::fs;
use std::io::Write;

use thermoq::experiments::{
    count_violations, fig2_run, markov_trace_run, scan_with_config, Fig2Config, ScanConfig,
};
use thermoq::markov::{ode_at_grid, uniform_grid, DEFAULT_HORIZON_FACTOR, DEFAULT_STEP_FACTOR};
use thermoq::nonmarkov::{
    qfi_nonmarkov, reduced_probe_analytic, reduced_q1_at_grid, NonMarkovParams,
};
use thermoq::physics::{rates, BathSpec, ProbeSpec};
use thermoq::qfi::{default_fd_step, qfi_diagonal};

use crate::report::{write_csv, write_json, ScanReport, ScanSummary};
use crate::{
    io_err, CliError, Fig2Args, MarkovArgs, MarkovMethod, NonmarkovArgs, NonmarkovMethod,
    PhysicsArgs, TMax, TheoremScanArgs,
};

impl PhysicsArgs {
    fn specs(&self) -> Result<(ProbeSpec<f64>, BathSpec<f64>), CliError> {
        Ok((
            ProbeSpec::new(self.omega, self.p)?,
            BathSpec::new(self.beta, self.kappa)?,
        ))
    }
}

fn resolve_t_max(t_max: TMax, auto: f64) -> Result<f64, CliError> {
    match t_max {
        TMax::Auto => Ok(auto),
        TMax::Value(v) if v.is_finite() && v >= 0.0 => Ok(v),
        TMax::Value(v) => Err(CliError::Param(format!("t-max must be ≥ 0, got {v}"))),
    }
}

pub fn markov(args: &MarkovArgs) -> Result<(), CliError> {
    let (probe, bath) = args.physics.specs()?;
    let r = rates(&probe, &bath);
    let t_max = resolve_t_max(args.t_max, DEFAULT_HORIZON_FACTOR * r.relaxation_time())?;
    if args.samples == 0 {
        return Err(CliError::Param("samples must be ≥ 1".into()));
    }

    let rows: Vec<[f64; 5]> = match args.method {
        MarkovMethod::Closed => markov_trace_run(&probe, &bath, t_max, args.samples)?
            .into_iter()
            .map(|row| [row.t, row.q1, row.dq_dbeta, row.qfi, row.ratio])
            .collect(),
        MarkovMethod::Ode => {
            // Fully ODE-sourced columns: the β-derivative is a central
            // difference of the integrated population itself.
            let grid = uniform_grid(t_max, args.samples);
            let step = DEFAULT_STEP_FACTOR * r.relaxation_time();
            let h = default_fd_step(bath.beta());
            let center = ode_at_grid(&probe, &bath, &grid, step)?;
            let plus = ode_at_grid(&probe, &bath.with_beta(bath.beta() + h)?, &grid, step)?;
            let minus = ode_at_grid(&probe, &bath.with_beta(bath.beta() - h)?, &grid, step)?;
            let f_thermal = thermoq::qfi::thermal_qfi(probe.omega(), bath.beta())?;
            grid.iter()
                .enumerate()
                .map(|(i, &t)| {
                    let dq = (plus[i] - minus[i]) / (2.0 * h);
                    let qfi = qfi_diagonal(center[i], dq)?;
                    Ok([t, center[i], dq, qfi, qfi / f_thermal])
                })
                .collect::<Result<_, thermoq::Error>>()?
        }
    };

    write_csv(
        &args.out,
        "t,q1,dq_dbeta,qfi,ratio",
        rows.iter().map(|r| r.as_slice()),
    )?;
    println!("wrote {} ({} rows)", args.out.display(), rows.len());
    Ok(())
}

pub fn nonmarkov(args: &NonmarkovArgs) -> Result<(), CliError> {
    let (probe, bath) = args.physics.specs()?;
    let params = NonMarkovParams::new(probe, bath, args.coupling)?;
    let t_max = resolve_t_max(args.t_max, 2.0 / params.gamma_t())?;
    if args.samples == 0 {
        return Err(CliError::Param("samples must be ≥ 1".into()));
    }
    let grid = uniform_grid(t_max, args.samples);

    let rows: Vec<[f64; 3]> = match args.method {
        NonmarkovMethod::Analytic => grid
            .iter()
            .map(|&t| {
                Ok([
                    t,
                    reduced_probe_analytic(&params, t)?.q1(),
                    qfi_nonmarkov(&params, t)?,
                ])
            })
            .collect::<Result<_, thermoq::Error>>()?,
        NonmarkovMethod::Rk4 => {
            let h = default_fd_step(bath.beta());
            let step = params.default_step();
            let center = reduced_q1_at_grid(&params, &grid, step)?;
            let plus = reduced_q1_at_grid(&params.with_beta(bath.beta() + h)?, &grid, step)?;
            let minus = reduced_q1_at_grid(&params.with_beta(bath.beta() - h)?, &grid, step)?;
            grid.iter()
                .enumerate()
                .map(|(i, &t)| {
                    let dq = (plus[i] - minus[i]) / (2.0 * h);
                    Ok([t, center[i], qfi_diagonal(center[i], dq)?])
                })
                .collect::<Result<_, thermoq::Error>>()?
        }
    };

    write_csv(&args.out, "t,q1,qfi", rows.iter().map(|r| r.as_slice()))?;
    println!("wrote {} ({} rows)", args.out.display(), rows.len());
    Ok(())
}

pub fn theorem_scan(args: &TheoremScanArgs) -> Result<(), CliError> {
    let config: ScanConfig<f64> = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Param(format!("{}: {e}", path.display())))?
        }
        None => ScanConfig::default(),
    };

    let points = scan_with_config(&config)?;
    let violations = count_violations(&points);
    let report = ScanReport {
        summary: ScanSummary {
            points: points.len(),
            violations,
        },
        points,
    };
    write_json(&args.out, &report)?;
    println!(
        "wrote {} ({} points, {} violations)",
        args.out.display(),
        report.summary.points,
        report.summary.violations
    );
    if violations > 0 {
        return Err(CliError::Verification(format!(
            "{violations} grid points violate the cold-probe criterion"
        )));
    }
    Ok(())
}

pub fn fig2(args: &Fig2Args) -> Result<(), CliError> {
    let config = Fig2Config {
        omega: args.omega,
        kappa: args.kappa,
        coupling: args.coupling,
        beta_list: args.beta_list.clone(),
        p_list: args.p_list.clone(),
        samples: args.samples,
        t_max: args.t_max,
    };
    let out = fig2_run(&config)?;

    fs::create_dir_all(&args.out_dir).map_err(|e| io_err(&args.out_dir, e))?;
    for traj in &out.trajectories {
        let path = args
            .out_dir
            .join(format!("fig2_beta{}_p{}.csv", traj.beta, traj.p));
        let rows: Vec<[f64; 3]> = traj.points.iter().map(|&(t, q1, f)| [t, q1, f]).collect();
        write_csv(&path, "t,q1,qfi", rows.iter().map(|r| r.as_slice()))?;
    }
    let summary_path = args.out_dir.join("fig2_summary.json");
    write_json(&summary_path, &out.report)?;

    let mut stdout = std::io::stdout().lock();
    for e in &out.report.entries {
        writeln!(
            stdout,
            "beta={} p={}: max qfi {} at t={}, asymptote {}",
            e.beta, e.p, e.max_qfi, e.t_at_max, e.asymptotic_qfi
        )
        .ok();
    }
    println!(
        "wrote {} trajectories and {}",
        out.trajectories.len(),
        summary_path.display()
    );
    Ok(())
}
