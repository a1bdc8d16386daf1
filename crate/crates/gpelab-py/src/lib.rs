//! Python bindings for the gpelab ground-state solver.
//!
//! Exposes problem construction, the four iteration schemes, reference
//! solves and the spectral rate predictors.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gpelab_core::harness::{contraction_rates, model_problem_1, model_problem_2, reference_solve};
use gpelab_core::iterate::run;
use gpelab_core::spectral::{shift_diagnostic, spectral_report};
use gpelab_core::{
    build_mesh, GpeProblem, GroundState, Potential, Scheme, SchemeConfig, SpectralReport,
};

fn numerical(e: gpelab_core::GpeError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn scheme_config(
    scheme: &str,
    tau: f64,
    sigma: f64,
    line_search: bool,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> PyResult<SchemeConfig> {
    let scheme = match scheme {
        "basic" => Scheme::Basic,
        "gfdn" => Scheme::Gfdn,
        "shifted" => Scheme::Shifted,
        "damped" => Scheme::Damped,
        other => {
            return Err(PyValueError::new_err(format!(
                "scheme must be one of basic|gfdn|shifted|damped (got '{other}')"
            )))
        }
    };
    if !(tol > 0.0) {
        return Err(PyValueError::new_err("tol must be positive"));
    }
    if scheme == Scheme::Gfdn && tau <= 0.0 {
        return Err(PyValueError::new_err("gfdn requires tau > 0"));
    }
    if scheme == Scheme::Damped && !line_search && !(tau > 0.0 && tau < 2.0) {
        return Err(PyValueError::new_err(
            "damped without line search requires 0 < tau < 2",
        ));
    }
    Ok(SchemeConfig {
        scheme,
        tau,
        sigma,
        tol,
        max_iter,
        line_search,
        seed,
    })
}

/// A discretized 1D Gross-Pitaevskii problem on a uniform P1 mesh.
#[pyclass(name = "Problem")]
struct PyProblem {
    inner: GpeProblem,
}

#[pymethods]
impl PyProblem {
    /// V(x) = quad_coeff*x^2 + sin_amp*sin(sin_k*pi*x)^2 + offset.
    #[new]
    #[pyo3(signature = (a, b, n_cells, beta, quad_coeff=0.0, sin_amp=0.0, sin_k=1.0, offset=0.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        a: f64,
        b: f64,
        n_cells: usize,
        beta: f64,
        quad_coeff: f64,
        sin_amp: f64,
        sin_k: f64,
        offset: f64,
    ) -> PyResult<Self> {
        let mesh = build_mesh(a, b, n_cells).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let potential = Potential::analytic(quad_coeff, sin_amp, sin_k, offset);
        let inner = GpeProblem::new(mesh, potential, beta)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyProblem { inner })
    }

    /// Interval (-2, 2), V(x) = x^2/4 + sin(2 pi x)^2, beta = 5.
    #[staticmethod]
    fn mp1() -> Self {
        PyProblem {
            inner: model_problem_1(),
        }
    }

    /// Interval (-16, 16), V(x) = x^2/2, beta = 400.
    #[staticmethod]
    fn mp2() -> Self {
        PyProblem {
            inner: model_problem_2(),
        }
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn n_cells(&self) -> usize {
        self.inner.mesh().n_cells()
    }

    /// Mesh node coordinates (including the boundary).
    fn nodes(&self) -> Vec<f64> {
        let mesh = self.inner.mesh();
        (0..=mesh.n_cells()).map(|i| mesh.node(i)).collect()
    }

    /// Run one iteration scheme from a seeded random positive start.
    #[pyo3(signature = (scheme="basic", tau=1.0, sigma=0.0, line_search=false, tol=1e-11, max_iter=500, seed=1))]
    #[allow(clippy::too_many_arguments)]
    fn solve(
        &self,
        scheme: &str,
        tau: f64,
        sigma: f64,
        line_search: bool,
        tol: f64,
        max_iter: usize,
        seed: u64,
    ) -> PyResult<PySolution> {
        let config = scheme_config(scheme, tau, sigma, line_search, tol, max_iter, seed)?;
        let (gs, trace) = run(&self.inner, &config, None).map_err(numerical)?;
        if !trace.converged {
            return Err(PyRuntimeError::new_err(format!(
                "{} scheme did not converge within {max_iter} iterations",
                config.scheme.name()
            )));
        }
        Ok(PySolution {
            state: gs,
            iterations: trace.iterations(),
            terminal_rate: None,
            lambdas: trace.rows.iter().map(|r| r.lambda).collect(),
            energies: trace.rows.iter().map(|r| r.energy).collect(),
        })
    }

    /// Accurate reference solve (damped scheme with line search,
    /// eigenvalue-increment tolerance 1e-13).
    fn ground_state(&self) -> PyResult<PySolution> {
        let gs = reference_solve(&self.inner).map_err(numerical)?;
        Ok(PySolution {
            state: gs,
            iterations: 0,
            terminal_rate: None,
            lambdas: Vec::new(),
            energies: Vec::new(),
        })
    }

    /// Like solve(), but measures per-iteration H1 errors against the
    /// reference ground state and reports the terminal contraction rate.
    #[pyo3(signature = (scheme="basic", tau=1.0, sigma=0.0, line_search=false, tol=1e-11, max_iter=500, seed=1))]
    #[allow(clippy::too_many_arguments)]
    fn rates(
        &self,
        scheme: &str,
        tau: f64,
        sigma: f64,
        line_search: bool,
        tol: f64,
        max_iter: usize,
        seed: u64,
    ) -> PyResult<PySolution> {
        let config = scheme_config(scheme, tau, sigma, line_search, tol, max_iter, seed)?;
        let reference = reference_solve(&self.inner).map_err(numerical)?;
        let (gs, trace) = run(&self.inner, &config, Some(&reference)).map_err(numerical)?;
        let terminal = contraction_rates(&trace).ok().map(|r| r.terminal_rate);
        Ok(PySolution {
            state: gs,
            iterations: trace.iterations(),
            terminal_rate: terminal,
            lambdas: trace.rows.iter().map(|r| r.lambda).collect(),
            energies: trace.rows.iter().map(|r| r.energy).collect(),
        })
    }

    /// Eigenvalues of the linearized pencil, mu1 and the predicted
    /// contraction rates at the reference ground state.
    fn spectrum(&self) -> PyResult<PySpectrum> {
        let gs = reference_solve(&self.inner).map_err(numerical)?;
        let report = spectral_report(&self.inner, &gs).map_err(numerical)?;
        Ok(PySpectrum {
            report,
            problem: self.inner.clone(),
            state: gs,
        })
    }
}

/// A converged ground-state approximation with its iteration history.
#[pyclass(name = "Solution")]
struct PySolution {
    state: GroundState,
    iterations: usize,
    terminal_rate: Option<f64>,
    lambdas: Vec<f64>,
    energies: Vec<f64>,
}

#[pymethods]
impl PySolution {
    #[getter(lambda_)]
    fn lambda_(&self) -> f64 {
        self.state.lambda
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.state.energy
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.state.residual
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.iterations
    }

    /// Mean contraction ratio over the last five trusted iterations,
    /// when measured against a reference (rates() only).
    #[getter]
    fn terminal_rate(&self) -> Option<f64> {
        self.terminal_rate
    }

    /// Eigenvalue approximations per iteration.
    #[getter]
    fn lambdas(&self) -> Vec<f64> {
        self.lambdas.clone()
    }

    /// Energy per iteration.
    #[getter]
    fn energies(&self) -> Vec<f64> {
        self.energies.clone()
    }

    /// Nodal values including the (zero) boundary nodes.
    fn values(&self) -> Vec<f64> {
        let mesh = self.state.u.mesh();
        (0..=mesh.n_cells())
            .map(|i| self.state.u.node_value(i))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(lambda={:.6}, energy={:.6}, iterations={})",
            self.state.lambda, self.state.energy, self.iterations
        )
    }
}

/// Spectral quantities and rate predictors at the ground state.
#[pyclass(name = "Spectrum")]
struct PySpectrum {
    report: SpectralReport,
    problem: GpeProblem,
    state: GroundState,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn lambda1(&self) -> f64 {
        self.report.lambda1
    }

    #[getter]
    fn lambda2(&self) -> f64 {
        self.report.lambda2
    }

    #[getter]
    fn mu1(&self) -> f64 {
        self.report.mu1
    }

    #[getter]
    fn rate_basic(&self) -> f64 {
        self.report.rate_basic()
    }

    #[getter]
    fn tau_crit(&self) -> f64 {
        self.report.tau_crit()
    }

    fn rate_gfdn(&self, tau: f64) -> f64 {
        self.report.rate_gfdn(tau)
    }

    fn rate_damped(&self, tau: f64) -> f64 {
        self.report.rate_damped(tau)
    }

    fn rate_damped_sharp(&self, tau: f64) -> f64 {
        self.report.rate_damped_sharp(tau)
    }

    /// Shift-degradation diagnostic at sigma; values above 1 predict
    /// loss of convergence for the shifted scheme.
    fn shift_diagnostic(&self, sigma: f64) -> PyResult<f64> {
        shift_diagnostic(&self.problem, &self.state, sigma, self.report.lambda2)
            .map_err(numerical)
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum(lambda1={:.6}, lambda2={:.6}, mu1={:.6})",
            self.report.lambda1, self.report.lambda2, self.report.mu1
        )
    }
}

#[pymodule]
fn gpelab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PySpectrum>()?;
    Ok(())
}
