//! Subcommand implementations. Each command validates its inputs
//! before touching the filesystem and writes CSV with a fixed layout.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use gpelab_core::harness::{contraction_rates, reference_solve};
use gpelab_core::iterate::run;
use gpelab_core::spectral::{linearized_pair, shift_diagnostic, spectral_report};
use gpelab_core::Scheme;

use crate::config::RunSpec;
use crate::CliError;

/// 17 significant digits, '.' decimal, deterministic.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| CliError::Numerical(format!("write {}: {e}", path.display())))?;
    Ok(())
}

fn emit(spec: &RunSpec, file_name: &str, contents: &str) -> Result<(), CliError> {
    match &spec.experiment.output {
        Some(dir) => write_file(&dir.join(file_name), contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Run the configured scheme once and report the converged state.
pub fn cmd_solve(spec: &RunSpec) -> Result<(), CliError> {
    let problem = spec.build_problem()?;
    let config = spec.scheme_config();
    let (gs, trace) =
        run(&problem, &config, None).map_err(|e| CliError::Numerical(e.to_string()))?;
    if !trace.converged {
        return Err(CliError::Numerical(format!(
            "{} scheme did not converge within {} iterations (last increment {:.3e})",
            config.scheme.name(),
            config.max_iter,
            trace.last_increment
        )));
    }
    println!(
        "scheme={} lambda={} energy={} iterations={} residual={}",
        config.scheme.name(),
        fmt_float(gs.lambda),
        fmt_float(gs.energy),
        trace.iterations(),
        fmt_float(gs.residual)
    );
    if spec.experiment.output.is_some() {
        let mesh = problem.mesh();
        let mut csv = String::from("x,u\n");
        for i in 0..=mesh.n_cells() {
            let _ = writeln!(
                csv,
                "{},{}",
                fmt_float(mesh.node(i)),
                fmt_float(gs.u.node_value(i))
            );
        }
        emit(spec, "solution.csv", &csv)?;
    }
    Ok(())
}

/// Reference solve plus a scheme run measured against it; per-iteration
/// CSV with the contraction ratios.
pub fn cmd_rates(spec: &RunSpec) -> Result<(), CliError> {
    let problem = spec.build_problem()?;
    let config = spec.scheme_config();
    let reference =
        reference_solve(&problem).map_err(|e| CliError::Numerical(e.to_string()))?;
    let (_, trace) = run(&problem, &config, Some(&reference))
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    if !trace.converged {
        return Err(CliError::Numerical(format!(
            "{} scheme did not converge within {} iterations",
            config.scheme.name(),
            config.max_iter
        )));
    }
    let rates = contraction_rates(&trace).map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut csv = String::from("n,lambda_n,energy_n,h1_error,r_n,tau_n\n");
    for (row, r) in trace.rows.iter().zip(&rates.per_row) {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.n,
            fmt_float(row.lambda),
            fmt_float(row.energy),
            row.h1_error.map(fmt_float).unwrap_or_default(),
            r.map(fmt_float).unwrap_or_default(),
            row.tau.map(fmt_float).unwrap_or_default()
        );
    }
    emit(spec, "rates.csv", &csv)?;
    eprintln!(
        "terminal contraction rate: {}",
        fmt_float(rates.terminal_rate)
    );
    Ok(())
}

/// Spectral report: eigenvalues, predicted rates and the shift
/// diagnostic table for any requested sigma values.
pub fn cmd_spectrum(spec: &RunSpec) -> Result<(), CliError> {
    let problem = spec.build_problem()?;
    let reference =
        reference_solve(&problem).map_err(|e| CliError::Numerical(e.to_string()))?;
    let report =
        spectral_report(&problem, &reference).map_err(|e| CliError::Numerical(e.to_string()))?;

    println!("lambda   = {}", fmt_float(reference.lambda));
    println!("lambda1  = {}", fmt_float(report.lambda1));
    println!("lambda2  = {}", fmt_float(report.lambda2));
    println!("mu1      = {}", fmt_float(report.mu1));
    println!("rate_basic = {}", fmt_float(report.rate_basic()));
    println!("tau_crit   = {}", fmt_float(report.tau_crit()));
    let taus: &[f64] = if spec.experiment.tau_grid.is_empty() {
        &[0.5, 1.0, 1.5]
    } else {
        &spec.experiment.tau_grid
    };
    for &tau in taus {
        println!(
            "rate_gfdn(tau={tau}) = {}",
            fmt_float(report.rate_gfdn(tau))
        );
        println!(
            "rate_damped(tau={tau}) = {}",
            fmt_float(report.rate_damped(tau))
        );
    }
    if !spec.experiment.sigma_grid.is_empty() {
        let (_, _, lambda2, _) = linearized_pair(&problem, &reference)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        println!("sigma,shift_diagnostic");
        for &sigma in &spec.experiment.sigma_grid {
            let d = shift_diagnostic(&problem, &reference, sigma, lambda2)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            println!("{},{}", fmt_float(sigma), fmt_float(d));
        }
    }
    Ok(())
}

/// Parameter sweep: one CSV row per grid point with predicted and
/// observed rates. Individual cell failures are recorded, not fatal.
pub fn cmd_sweep(spec: &RunSpec) -> Result<(), CliError> {
    let problem = spec.build_problem()?;
    let base = spec.scheme_config();
    let grid: Vec<f64> = match base.scheme {
        Scheme::Shifted => spec.experiment.sigma_grid.clone(),
        _ => spec.experiment.tau_grid.clone(),
    };
    if grid.is_empty() {
        return Err(CliError::Config(
            "sweep requires a non-empty experiment.tau_grid (or experiment.sigma_grid for the \
             shifted scheme)"
                .into(),
        ));
    }
    let reference =
        reference_solve(&problem).map_err(|e| CliError::Numerical(e.to_string()))?;
    let report =
        spectral_report(&problem, &reference).map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut csv = String::from("parameter,predicted_rate,observed_rate,converged\n");
    let mut any_ok = false;
    for &param in &grid {
        let mut config = base.clone();
        let predicted = match base.scheme {
            Scheme::Basic => report.rate_basic(),
            Scheme::Gfdn => {
                config.tau = param;
                report.rate_gfdn(param)
            }
            Scheme::Damped => {
                config.tau = param;
                report.rate_damped(param)
            }
            Scheme::Shifted => {
                config.sigma = param;
                // no closed-form predictor; record the diagnostic-free
                // placeholder of the unshifted bound
                report.rate_basic()
            }
        };
        let cell = run(&problem, &config, Some(&reference))
            .ok()
            .filter(|(_, trace)| trace.converged)
            .and_then(|(_, trace)| {
                contraction_rates(&trace)
                    .ok()
                    .map(|r| r.terminal_rate)
            });
        match cell {
            Some(observed) => {
                any_ok = true;
                let _ = writeln!(
                    csv,
                    "{},{},{},true",
                    fmt_float(param),
                    fmt_float(predicted),
                    fmt_float(observed)
                );
            }
            None => {
                let _ = writeln!(csv, "{},{},,false", fmt_float(param), fmt_float(predicted));
            }
        }
    }
    emit(spec, "sweep.csv", &csv)?;
    if any_ok {
        Ok(())
    } else {
        Err(CliError::Numerical(
            "every sweep cell failed to converge".into(),
        ))
    }
}
