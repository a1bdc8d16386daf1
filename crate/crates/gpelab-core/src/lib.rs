//! Ground-state solver laboratory for the 1D Gross-Pitaevskii
//! eigenvector problem.
//!
//! The crate discretizes the problem with uniform P1 finite elements,
//! implements four generalized inverse-iteration schemes (basic, GFDN,
//! shifted, damped with energy line search), and computes the spectral
//! quantities lambda1, lambda2 and mu1 that predict their asymptotic
//! contraction rates.

pub mod error;
pub mod fem1d;
pub mod harness;
pub mod iterate;
pub mod model;
pub mod spectral;

pub use error::{GpeError, Result};
pub use fem1d::{build_mesh, Field, Mesh1D};
pub use iterate::{run, Scheme, SchemeConfig};
pub use model::{GpeProblem, GroundState, Potential};
pub use spectral::SpectralReport;
