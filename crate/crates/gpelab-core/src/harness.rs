//! Experiment orchestration: model-problem presets, accurate reference
//! solves, contraction-rate extraction and observed-vs-predicted
//! comparisons.

use crate::error::{GpeError, Result};
use crate::fem1d::build_mesh;
use crate::iterate::{run, IterationTrace, SchemeConfig};
use crate::model::{GpeProblem, GroundState, Potential};
use crate::spectral::{spectral_report, SpectralReport};

/// Stopping tolerance of the reference computation.
pub const REFERENCE_TOL: f64 = 1e-13;
/// Contraction ratios are only trusted while the H1 error stays above
/// this cutoff; closer to the reference the ratios are polluted.
pub const RATE_CUTOFF: f64 = 50.0 * REFERENCE_TOL;
const REFERENCE_SEED: u64 = 0xd1ce;
const REFERENCE_MAX_ITER: usize = 20_000;

/// Interval (-2, 2), V(x) = x^2/4 + sin(2 pi x)^2, beta = 5, 10^3 DOF.
pub fn model_problem_1() -> GpeProblem {
    let mesh = build_mesh(-2.0, 2.0, 1000).expect("valid preset mesh");
    GpeProblem::new(mesh, Potential::analytic(0.25, 1.0, 2.0, 0.0), 5.0)
        .expect("preset potential is nonnegative")
}

/// Interval (-16, 16), V(x) = x^2/2, beta = 400, 10^3 DOF.
pub fn model_problem_2() -> GpeProblem {
    let mesh = build_mesh(-16.0, 16.0, 1000).expect("valid preset mesh");
    GpeProblem::new(mesh, Potential::harmonic(0.5), 400.0)
        .expect("preset potential is nonnegative")
}

/// Accurate reference ground state: damped iteration with energy line
/// search from a positive random start, eigenvalue-increment tolerance
/// 1e-13, sign-aligned positive.
pub fn reference_solve(problem: &GpeProblem) -> Result<GroundState> {
    reference_solve_seeded(problem, REFERENCE_SEED)
}

pub fn reference_solve_seeded(problem: &GpeProblem, seed: u64) -> Result<GroundState> {
    let cfg = SchemeConfig::damped(1.0, true, REFERENCE_TOL, REFERENCE_MAX_ITER, seed);
    let (gs, trace) = run(problem, &cfg, None)?;
    if !trace.converged {
        return Err(GpeError::MaxIterExceeded {
            max_iter: REFERENCE_MAX_ITER,
            last_increment: trace.last_increment,
        });
    }
    Ok(gs)
}

/// Per-iteration contraction ratios r(n) = e(n) / e(n-1) of the H1
/// errors, plus their terminal mean.
#[derive(Debug, Clone)]
pub struct RateSeries {
    /// Aligned with the trace rows; None where undefined or where the
    /// denominator fell below the pollution cutoff.
    pub per_row: Vec<Option<f64>>,
    /// Mean of the last five valid ratios.
    pub terminal_rate: f64,
}

pub fn contraction_rates(trace: &IterationTrace) -> Result<RateSeries> {
    let mut per_row: Vec<Option<f64>> = vec![None; trace.rows.len()];
    let mut valid = Vec::new();
    for i in 1..trace.rows.len() {
        let (prev, cur) = (&trace.rows[i - 1], &trace.rows[i]);
        if let (Some(e_prev), Some(e_cur)) = (prev.h1_error, cur.h1_error) {
            if e_prev > RATE_CUTOFF {
                let r = e_cur / e_prev;
                per_row[i] = Some(r);
                valid.push(r);
            }
        }
    }
    if valid.len() < 6 {
        return Err(GpeError::InsufficientData { valid: valid.len() });
    }
    let tail = &valid[valid.len() - 5..];
    Ok(RateSeries {
        per_row,
        terminal_rate: tail.iter().sum::<f64>() / tail.len() as f64,
    })
}

/// One full experiment cell: a scheme config, its trace and the
/// terminal contraction rate when enough data was collected.
#[derive(Debug, Clone)]
pub struct SchemeOutcome {
    pub config: SchemeConfig,
    pub trace: IterationTrace,
    pub rates: Option<RateSeries>,
    pub final_lambda: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub problem_id: String,
    pub reference: GroundState,
    pub report: SpectralReport,
    pub outcomes: Vec<SchemeOutcome>,
}

/// Reference solve + spectral report + one trace per scheme config.
pub fn run_experiment(
    problem: &GpeProblem,
    problem_id: &str,
    configs: &[SchemeConfig],
) -> Result<ExperimentResult> {
    let reference = reference_solve(problem)?;
    let report = spectral_report(problem, &reference)?;
    let mut outcomes = Vec::with_capacity(configs.len());
    for config in configs {
        let (state, trace) = run(problem, config, Some(&reference))?;
        let rates = contraction_rates(&trace).ok();
        outcomes.push(SchemeOutcome {
            config: config.clone(),
            rates,
            final_lambda: state.lambda,
            trace,
        });
    }
    Ok(ExperimentResult {
        problem_id: problem_id.to_string(),
        reference,
        report,
        outcomes,
    })
}
