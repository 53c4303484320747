//! Dense complex linear algebra.

pub mod eigen;
mod matrix;
pub mod spectrum;
pub mod structure;
pub mod svd;

pub use eigen::eigenvalues;
pub use matrix::CMatrix;
pub use spectrum::{cluster, match_multisets, MatchResult, Method, SpectrumReport};
pub use structure::{flat_adjoint, sharp_adjoint, sharp_adjoint_complex, symplectic_j, DoubledUp, SignatureJ};
pub use svd::{null_space, range_basis, rank_at_tolerance, singular_values, solve};

use crate::error::Result;

/// Eigenvalues clustered into a spectrum report.
pub fn spectrum(m: &CMatrix, tol: f64) -> Result<SpectrumReport> {
    Ok(SpectrumReport::from_values(&eigenvalues(m)?, tol, Method::Eigenvalues))
}
