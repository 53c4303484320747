//! Exact arithmetic over the Gaussian rationals: polynomials, rational
//! functions, matrices, transfer matrices and canonical forms.

pub mod gaussian;
pub mod matrix;
pub mod poly;
pub mod ratfn;
pub mod roots;
pub mod smith;
pub mod transfer;

pub use gaussian::GaussianRational;
pub use matrix::{ExactDiv, Mat, PolyMat, QMat, RationalMatrix, Ring};
pub use poly::Poly;
pub use ratfn::RationalFn;
pub use roots::{roots, Roots};
pub use smith::{smith_form, smith_mcmillan, ElementaryOp, SmithForm, SmithMcMillanForm};
pub use transfer::transfer_matrix_exact;
