//! The Gross-Pitaevskii model: trapping potential, energy functional,
//! linearized bilinear form and eigenvalue diagnostics.
//!
//! The linearized operator at a state z has the bilinear form
//! a_z(w, v) = 1/2 (w', v') + (V w, v) + beta (|z|^2 w, v),
//! discretized as A = 1/2 K + M_V + beta M_{|z|^2}.

use crate::error::{GpeError, Result};
use crate::fem1d::{
    assemble_stiffness, assemble_weighted_mass, l2_norm, linf_nodal, BandedSymMatrix, Field,
    Mesh1D, Weight, GAUSS3,
};

/// Trapping potential V(x) = quad_coeff x^2 + sin_amp sin(sin_k pi x)^2 + offset,
/// or a tabulated nodal profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub quad_coeff: f64,
    pub sin_amp: f64,
    pub sin_k: f64,
    pub offset: f64,
    pub tabulated: Option<Vec<f64>>,
}

impl Potential {
    pub fn analytic(quad_coeff: f64, sin_amp: f64, sin_k: f64, offset: f64) -> Self {
        Potential {
            quad_coeff,
            sin_amp,
            sin_k,
            offset,
            tabulated: None,
        }
    }

    pub fn harmonic(quad_coeff: f64) -> Self {
        Potential::analytic(quad_coeff, 0.0, 0.0, 0.0)
    }

    pub fn tabulated(values: Vec<f64>) -> Self {
        Potential {
            quad_coeff: 0.0,
            sin_amp: 0.0,
            sin_k: 0.0,
            offset: 0.0,
            tabulated: Some(values),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let s = (self.sin_k * std::f64::consts::PI * x).sin();
        self.quad_coeff * x * x + self.sin_amp * s * s + self.offset
    }
}

/// V at every node; errors when any nodal value is below -1e-12.
pub fn eval_potential(p: &Potential, mesh: &Mesh1D) -> Result<Vec<f64>> {
    let v: Vec<f64> = match &p.tabulated {
        Some(t) => {
            assert_eq!(t.len(), mesh.n_nodes());
            t.clone()
        }
        None => (0..mesh.n_nodes()).map(|i| p.eval(mesh.node(i))).collect(),
    };
    for (node, &value) in v.iter().enumerate() {
        if value < -1e-12 {
            return Err(GpeError::NegativePotential { node, value });
        }
    }
    Ok(v)
}

/// A Gross-Pitaevskii problem instance with cached nodal potential.
#[derive(Debug, Clone)]
pub struct GpeProblem {
    mesh: Mesh1D,
    potential: Potential,
    beta: f64,
    v_nodes: Vec<f64>,
}

impl GpeProblem {
    pub fn new(mesh: Mesh1D, potential: Potential, beta: f64) -> Result<Self> {
        assert!(beta >= 0.0, "repulsion constant beta must be nonnegative");
        let v_nodes = eval_potential(&potential, &mesh)?;
        Ok(GpeProblem {
            mesh,
            potential,
            beta,
            v_nodes,
        })
    }

    pub fn mesh(&self) -> Mesh1D {
        self.mesh
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn potential(&self) -> &Potential {
        &self.potential
    }
    pub fn potential_nodes(&self) -> &[f64] {
        &self.v_nodes
    }
}

/// A converged ground-state approximation.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub u: Field,
    pub lambda: f64,
    pub energy: f64,
    pub residual: f64,
}

/// A = 1/2 K + M_V + beta M_{|z|^2}.
pub fn assemble_a(problem: &GpeProblem, z: &Field) -> Result<BandedSymMatrix> {
    if z.mesh() != problem.mesh {
        return Err(GpeError::MeshMismatch);
    }
    let mesh = problem.mesh;
    let mut a = assemble_stiffness(&mesh);
    a.scale(0.5);
    a.add_scaled(
        &assemble_weighted_mass(&mesh, &Weight::Nodal(&problem.v_nodes)),
        1.0,
    );
    if problem.beta != 0.0 {
        a.add_scaled(
            &assemble_weighted_mass(&mesh, &Weight::SquaredField(z)),
            problem.beta,
        );
    }
    Ok(a)
}

/// E(v) = 1/2 int 1/2 |v'|^2 + V |v|^2 + beta/2 |v|^4 dx.
pub fn energy(problem: &GpeProblem, v: &Field) -> f64 {
    let mesh = problem.mesh;
    let h = mesh.h();
    let mut e = 0.0;
    for cell in 0..mesh.n_cells() {
        let vl = v.node_value(cell);
        let vr = v.node_value(cell + 1);
        let pl = problem.v_nodes[cell];
        let pr = problem.v_nodes[cell + 1];
        let grad = (vr - vl) / h;
        let mut cell_int = 0.0;
        for &(xi, q) in &GAUSS3 {
            let vv = vl + xi * (vr - vl);
            let pv = pl + xi * (pr - pl);
            cell_int += q * (pv * vv * vv + 0.5 * problem.beta * vv * vv * vv * vv);
        }
        e += 0.5 * (0.5 * grad * grad * h + h * cell_int);
    }
    e
}

/// int |v|^4 dx, exact for P1 data with the 3-point rule.
pub fn quartic_integral(problem: &GpeProblem, v: &Field) -> f64 {
    let mesh = problem.mesh;
    let h = mesh.h();
    let mut s = 0.0;
    for cell in 0..mesh.n_cells() {
        let vl = v.node_value(cell);
        let vr = v.node_value(cell + 1);
        for &(xi, q) in &GAUSS3 {
            let vv = vl + xi * (vr - vl);
            s += h * q * vv * vv * vv * vv;
        }
    }
    s
}

/// lambda^(n) = a_v(v, v) for an L2-normalized state.
pub fn rayleigh_lambda(problem: &GpeProblem, v: &Field) -> Result<f64> {
    let norm = l2_norm(v);
    if (norm - 1.0).abs() > 1e-8 {
        return Err(GpeError::NotNormalized { norm });
    }
    let a = assemble_a(problem, v)?;
    let av = a.matvec(v.values());
    Ok(v.values().iter().zip(&av).map(|(a, b)| a * b).sum())
}

/// Nodal max of |1 - 2 beta (lambda - sigma)^{-1} |u|^2|, boundary
/// contributing the value 1. At sigma = 0 and the exact ground state the
/// result equals 1; it blows up as sigma approaches lambda.
pub fn theta_linf(problem: &GpeProblem, u: &Field, lambda: f64, sigma: f64) -> Result<f64> {
    let gap = lambda - sigma;
    if gap.abs() < 1e-14 {
        return Err(GpeError::ShiftEqualsLambda { gap: gap.abs() });
    }
    let c = 2.0 * problem.beta / gap;
    let interior = u
        .values()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max((1.0 - c * v * v).abs()));
    Ok(interior.max(1.0))
}

/// Flip the sign so that the mean nodal value is positive.
pub fn align_positive(u: &mut Field) {
    let s: f64 = u.values().iter().sum();
    if s < 0.0 {
        u.scale(-1.0);
    }
}

/// Euclidean norm of the algebraic residual A_v v - lambda M v.
pub fn residual_norm(problem: &GpeProblem, v: &Field, lambda: f64) -> Result<f64> {
    let a = assemble_a(problem, v)?;
    let av = a.matvec(v.values());
    let mv = crate::fem1d::apply_mass(v);
    let r: Vec<f64> = av
        .iter()
        .zip(&mv)
        .map(|(a, m)| a - lambda * m)
        .collect();
    Ok(crate::fem1d::euclidean_norm(&r))
}

/// Re-export for diagnostics: beta |u|_inf^2 <= lambda at the ground state.
pub fn thomas_fermi_bound(problem: &GpeProblem, u: &Field) -> f64 {
    problem.beta * linf_nodal(u).powi(2)
}
