//! TOML run specifications: parsing, strict key checking and
//! validation with key-naming error messages.

use gpelab_core::{build_mesh, GpeProblem, Potential, Scheme, SchemeConfig};
use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::CliError;

/// A fully parsed and validated run specification.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub problem: ProblemSpec,
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub experiment: ExperimentSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    pub n_cells: usize,
    pub beta: f64,
    pub potential: PotentialSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "family", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// quad_coeff * x^2 + sin_amp * sin(sin_k * pi * x)^2 + offset
    Analytic {
        #[serde(default)]
        quad_coeff: f64,
        #[serde(default)]
        sin_amp: f64,
        #[serde(default = "one")]
        sin_k: f64,
        #[serde(default)]
        offset: f64,
    },
    /// quad_coeff * x^2
    Harmonic { quad_coeff: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub kind: String,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub line_search: bool,
    pub tol: f64,
    pub max_iter: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_tau() -> f64 {
    1.0
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Extra seeds for multi-seed experiments (rates uses the scheme
    /// seed; sweep runs every grid cell with the scheme seed).
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Sweep grid over the GFDN/damped parameter tau.
    #[serde(default)]
    pub tau_grid: Vec<f64>,
    /// Sweep grid over the spectral shift sigma.
    #[serde(default)]
    pub sigma_grid: Vec<f64>,
    /// Output directory for CSV files.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl RunSpec {
    /// Built-in problem presets with scheme defaults suitable for the
    /// standard experiments on each problem.
    pub fn preset(name: &str) -> Result<RunSpec, CliError> {
        match name {
            "mp1" => Ok(RunSpec {
                problem: ProblemSpec {
                    a: -2.0,
                    b: 2.0,
                    n_cells: 1000,
                    beta: 5.0,
                    potential: PotentialSpec::Analytic {
                        quad_coeff: 0.25,
                        sin_amp: 1.0,
                        sin_k: 2.0,
                        offset: 0.0,
                    },
                },
                scheme: SchemeSpec {
                    kind: "basic".into(),
                    tau: 1.0,
                    sigma: 0.0,
                    line_search: false,
                    tol: 1e-11,
                    max_iter: 500,
                    seed: 1,
                },
                experiment: ExperimentSpec::default(),
            }),
            "mp2" => Ok(RunSpec {
                problem: ProblemSpec {
                    a: -16.0,
                    b: 16.0,
                    n_cells: 1000,
                    beta: 400.0,
                    potential: PotentialSpec::Harmonic { quad_coeff: 0.5 },
                },
                scheme: SchemeSpec {
                    kind: "basic".into(),
                    tau: 1.0,
                    sigma: 0.0,
                    line_search: false,
                    tol: 1e-10,
                    max_iter: 2000,
                    seed: 1,
                },
                experiment: ExperimentSpec::default(),
            }),
            other => Err(CliError::Config(format!(
                "unknown preset '{other}' (expected 'mp1' or 'mp2')"
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.problem;
        if !(p.a < p.b) {
            return Err(CliError::Config(format!(
                "problem.a must be less than problem.b (got {} and {})",
                p.a, p.b
            )));
        }
        if p.n_cells < 2 {
            return Err(CliError::Config(format!(
                "problem.n_cells must be at least 2 (got {})",
                p.n_cells
            )));
        }
        if p.beta < 0.0 {
            return Err(CliError::Config(format!(
                "problem.beta must be nonnegative (got {})",
                p.beta
            )));
        }
        let s = &self.scheme;
        match s.kind.as_str() {
            "basic" | "shifted" => {}
            "gfdn" => {
                if s.tau <= 0.0 {
                    return Err(CliError::Config(format!(
                        "scheme.tau must be positive for gfdn (got {})",
                        s.tau
                    )));
                }
            }
            "damped" => {
                if !s.line_search && !(s.tau > 0.0 && s.tau < 2.0) {
                    return Err(CliError::Config(format!(
                        "scheme.tau must lie in (0, 2) for damped without line search (got {})",
                        s.tau
                    )));
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "scheme.kind must be one of basic|gfdn|shifted|damped (got '{other}')"
                )));
            }
        }
        if !(s.tol > 0.0) {
            return Err(CliError::Config(format!(
                "scheme.tol must be positive (got {})",
                s.tol
            )));
        }
        if s.max_iter < 1 {
            return Err(CliError::Config("scheme.max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn build_problem(&self) -> Result<GpeProblem, CliError> {
        let p = &self.problem;
        let mesh = build_mesh(p.a, p.b, p.n_cells)
            .map_err(|e| CliError::Config(format!("problem domain: {e}")))?;
        let potential = match &p.potential {
            PotentialSpec::Analytic {
                quad_coeff,
                sin_amp,
                sin_k,
                offset,
            } => Potential::analytic(*quad_coeff, *sin_amp, *sin_k, *offset),
            PotentialSpec::Harmonic { quad_coeff } => Potential::harmonic(*quad_coeff),
        };
        GpeProblem::new(mesh, potential, p.beta)
            .map_err(|e| CliError::Config(format!("problem.potential: {e}")))
    }

    pub fn scheme_config(&self) -> SchemeConfig {
        let s = &self.scheme;
        let scheme = match s.kind.as_str() {
            "basic" => Scheme::Basic,
            "gfdn" => Scheme::Gfdn,
            "shifted" => Scheme::Shifted,
            "damped" => Scheme::Damped,
            _ => unreachable!("validated"),
        };
        SchemeConfig {
            scheme,
            tau: s.tau,
            sigma: s.sigma,
            tol: s.tol,
            max_iter: s.max_iter,
            line_search: s.line_search,
            seed: s.seed,
        }
    }
}

/// Parse and validate a TOML run specification from disk.
pub fn parse_config(path: &Path) -> Result<RunSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let spec: RunSpec = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    spec.validate()?;
    Ok(spec)
}
