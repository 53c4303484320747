use crate::Complex;

fn list(v: &[Complex]) -> String {
    v.iter().map(|z| format!("{z:.6}")).collect::<Vec<_>>().join(", ")
}

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("evaluation at s = {s} hits the eigenvalue {eigenvalue} of A")]
    PoleEvaluation { s: Complex, eigenvalue: Complex },

    #[error("exact Gaussian-rational data is not available; use the numeric path")]
    ExactnessUnavailable,

    #[error("physical realizability fails (max residual {residual:.3e} > tol {tol:.1e}); the identity used by this method does not apply")]
    NotRealizable { residual: f64, tol: f64 },

    #[error("hidden-mode assumption fails: the controllable-unobservable, uncontrollable-observable and uncontrollable-unobservable blocks have eigenvalues off the imaginary axis [{}]; the criterion does not apply to this system", list(offending))]
    AssumptionViolated { offending: Vec<Complex> },

    #[error("subspace dimension is unstable at tol {tol:.1e}: singular value {sigma:.3e} lies near the threshold {threshold:.3e}; adjust the tolerance")]
    SubspaceInstability { tol: f64, sigma: f64, threshold: f64 },

    #[error("s0 = {s0} is not an invariant zero: smallest singular value of P(s0) is {sigma_min:.3e}")]
    NoNullSpace { s0: Complex, sigma_min: f64 },

    #[error("s0 = {s0} is a pole of G(s) (nearest pole {pole}); the determinant criterion requires a non-pole point")]
    AtPole { s0: Complex, pole: Complex },

    #[error("the pencil P(s) has deficient normal rank {normal_rank} < {full}")]
    NormalRankDeficient { normal_rank: usize, full: usize },

    #[error("degenerate feedback network: {0}")]
    DegenerateNetwork(String),

    #[error("controller synthesis is singular: {0}")]
    SynthesisSingular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
