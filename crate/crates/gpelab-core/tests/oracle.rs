//! Cross-checks of the iterative eigensolvers against dense
//! factorization-based oracles on small meshes, plus the classical
//! linear-inverse-iteration equivalence at beta = 0.

use gpelab_core::fem1d::{
    assemble_mass, assemble_weighted_mass, build_mesh, BandedSymMatrix, Field, Weight,
};
use gpelab_core::harness::reference_solve;
use gpelab_core::iterate::{normalize, random_initial, run, SchemeConfig};
use gpelab_core::model::{assemble_a, GpeProblem, Potential};
use gpelab_core::spectral::{linearized_pair, weighted_mu1};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

fn to_dense(t: &BandedSymMatrix) -> DMatrix<f64> {
    let n = t.diag.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = t.diag[i];
        if i + 1 < n {
            d[(i, i + 1)] = t.offdiag[i];
            d[(i + 1, i)] = t.offdiag[i];
        }
    }
    d
}

/// All eigenvalues of the symmetric pencil (A, B) with B positive
/// definite, ascending.
fn dense_pencil_eigs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    let chol = b.clone().cholesky().expect("right-hand matrix is SPD");
    let linv = chol.l().try_inverse().expect("triangular inverse");
    let c = &linv * a * linv.transpose();
    let sym = SymmetricEigen::new((&c + c.transpose()) * 0.5);
    let mut eigs: Vec<f64> = sym.eigenvalues.iter().cloned().collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Orthonormal (Euclidean) basis of the hyperplane { x : x . c = 0 } as
/// the trailing n-1 columns of the Householder reflector that maps c to
/// a multiple of e1.
fn complement_basis(c: &DVector<f64>) -> DMatrix<f64> {
    let n = c.len();
    let mut v = c.clone();
    v[0] += c[0].signum() * c.norm();
    let h = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / v.norm_squared());
    h.columns(1, n - 1).into_owned()
}

fn small_problem(n_cells: usize) -> GpeProblem {
    let mesh = build_mesh(-2.0, 2.0, n_cells).unwrap();
    GpeProblem::new(mesh, Potential::analytic(0.25, 1.0, 2.0, 0.0), 5.0).unwrap()
}

#[test]
fn linearized_pair_matches_dense_oracle() {
    for n_cells in [16usize, 32, 64] {
        let problem = small_problem(n_cells);
        let gs = reference_solve(&problem).unwrap();
        let (l1, _, l2, _) = linearized_pair(&problem, &gs).unwrap();

        let a = to_dense(&assemble_a(&problem, &gs.u).unwrap());
        let m = to_dense(&assemble_mass(&problem.mesh()));
        let eigs = dense_pencil_eigs(&a, &m);

        assert!(
            (l1 - eigs[0]).abs() <= 1e-8 * (1.0 + eigs[0].abs()),
            "n_cells={n_cells}: lambda1 {l1} vs dense {}",
            eigs[0]
        );
        assert!(
            (l2 - eigs[1]).abs() <= 1e-8 * (1.0 + eigs[1].abs()),
            "n_cells={n_cells}: lambda2 {l2} vs dense {}",
            eigs[1]
        );
        // the iterative lambda1 must also agree with the ground-state
        // eigenvalue itself
        assert!((l1 - gs.lambda).abs() <= 1e-8 * (1.0 + gs.lambda.abs()));
    }
}

#[test]
fn weighted_mu1_matches_dense_complement_oracle() {
    for n_cells in [16usize, 32, 64] {
        let problem = small_problem(n_cells);
        let gs = reference_solve(&problem).unwrap();
        let mu1 = weighted_mu1(&problem, &gs).unwrap();

        let mesh = problem.mesh();
        let a = to_dense(&assemble_a(&problem, &gs.u).unwrap());
        let m = to_dense(&assemble_mass(&mesh));
        let m_u2 = to_dense(&assemble_weighted_mass(
            &mesh,
            &Weight::SquaredField(&gs.u),
        ));
        // weighted mass of theta = lambda - 2 beta |u|^2
        let m_theta = &m * gs.lambda - m_u2 * (2.0 * problem.beta());

        // restrict both forms to the L2-orthogonal complement of u,
        // i.e. { v : v . (M u) = 0 }, via an explicit basis
        let mu = &m * DVector::from_column_slice(gs.u.values());
        let q = complement_basis(&mu);
        let a_red = q.transpose() * &a * &q;
        let t_red = q.transpose() * &m_theta * &q;

        // eigenvalues mu of (v, theta w) = mu a(v, w) on the complement
        let eigs = dense_pencil_eigs(&t_red, &a_red);
        let dense_mu1 = eigs
            .iter()
            .cloned()
            .max_by(|x, y| x.abs().total_cmp(&y.abs()))
            .unwrap();

        assert!(
            (mu1 - dense_mu1).abs() <= 1e-8,
            "n_cells={n_cells}: mu1 {mu1} vs dense {dense_mu1}"
        );
    }
}

#[test]
fn beta_zero_equals_classical_inverse_iteration() {
    // with beta = 0 the operator no longer depends on the iterate, so
    // the scheme must reproduce textbook inverse iteration for the
    // linear pencil step by step
    let mesh = build_mesh(-8.0, 8.0, 64).unwrap();
    let problem = GpeProblem::new(mesh, Potential::harmonic(0.5), 0.0).unwrap();

    let cfg = SchemeConfig::basic(1e-12, 500, 7);
    let (gs, trace) = run(&problem, &cfg, None).unwrap();
    assert!(trace.converged);

    // classical iteration: factor once, iterate solve + normalize
    let u0 = random_initial(mesh, 7);
    let a = assemble_a(&problem, &u0).unwrap();
    let factor = a.ldlt().unwrap();
    let mut u = u0;
    for _ in 0..trace.iterations() {
        let rhs = gpelab_core::fem1d::apply_mass(&u);
        u = Field::new(mesh, factor.solve(&rhs));
        normalize(&mut u);
    }
    gpelab_core::model::align_positive(&mut u);

    let lambda = gpelab_core::model::rayleigh_lambda(&problem, &u).unwrap();
    assert!((gs.lambda - lambda).abs() < 1e-9);
    for (a, b) in gs.u.values().iter().zip(u.values()) {
        assert!((a - b).abs() < 1e-9);
    }
}
