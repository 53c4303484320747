//! Small reference systems used in tests, documentation and the CLI.

use crate::exact::{GaussianRational as Q, QMat};
use crate::numeric::CMatrix;
use crate::system::{ExactParams, QSystemParams, Representation, StateSpace};
use crate::Complex;

fn scalar(z: Complex) -> CMatrix {
    CMatrix::from_diag(&[z])
}

fn qscalar(z: Q) -> QMat {
    QMat::from_diag(vec![z])
}

/// Single mode detuned by `omega`, damped at rate `kappa`.
pub fn passive_cavity(omega: f64, kappa: f64) -> QSystemParams {
    QSystemParams::new(
        scalar(Complex::new(omega, 0.0)),
        CMatrix::zeros(1, 1),
        scalar(Complex::new(kappa.sqrt(), 0.0)),
        CMatrix::zeros(1, 1),
    )
    .expect("valid single-mode parameters")
}

pub fn passive_cavity_exact(omega: Q, kappa: Q) -> ExactParams {
    ExactParams::new(
        qscalar(omega),
        QMat::zeros(1, 1),
        qscalar(Q::one()),
        QMat::zeros(1, 1),
        kappa,
    )
    .expect("valid single-mode parameters")
}

/// Single mode coupled only through the creation channel (`C₊ = 1`).
pub fn gain_system() -> QSystemParams {
    QSystemParams::new(
        CMatrix::zeros(1, 1),
        CMatrix::zeros(1, 1),
        CMatrix::zeros(1, 1),
        scalar(Complex::new(1.0, 0.0)),
    )
    .expect("valid single-mode parameters")
}

pub fn gain_system_exact() -> ExactParams {
    ExactParams::new(
        QMat::zeros(1, 1),
        QMat::zeros(1, 1),
        QMat::zeros(1, 1),
        qscalar(Q::one()),
        Q::one(),
    )
    .expect("valid single-mode parameters")
}

/// Degenerate parametric amplifier: pump `Ω₊ = iε/2`, damping `κ`.
pub fn dpa(kappa: f64, epsilon: f64) -> QSystemParams {
    QSystemParams::new(
        CMatrix::zeros(1, 1),
        scalar(Complex::new(0.0, epsilon / 2.0)),
        scalar(Complex::new(kappa.sqrt(), 0.0)),
        CMatrix::zeros(1, 1),
    )
    .expect("valid single-mode parameters")
}

pub fn dpa_exact(kappa: Q, epsilon: Q) -> ExactParams {
    let pump = &epsilon.mul_i() * &Q::from_ratio(1, 2);
    ExactParams::new(
        QMat::zeros(1, 1),
        qscalar(pump),
        qscalar(Q::one()),
        QMat::zeros(1, 1),
        kappa,
    )
    .expect("valid single-mode parameters")
}

/// Closed single mode at frequency `omega`.
pub fn lossless_mode(omega: f64) -> QSystemParams {
    QSystemParams::new(
        scalar(Complex::new(omega, 0.0)),
        CMatrix::zeros(1, 1),
        CMatrix::zeros(1, 1),
        CMatrix::zeros(1, 1),
    )
    .expect("valid single-mode parameters")
}

/// Classical `A = B = C = I₂`, `D = 0`: `G(s) = I/(s-1)`.
pub fn first_order_classical() -> StateSpace {
    let i2 = CMatrix::identity(2);
    StateSpace::new(
        i2.clone(),
        i2.clone(),
        i2,
        CMatrix::zeros(2, 2),
        Representation::Annihilation,
    )
    .expect("consistent shapes")
}

pub fn first_order_classical_exact() -> crate::system::ExactStateSpace {
    crate::system::ExactStateSpace::from_float(&first_order_classical()).expect("finite")
}

/// Classical `A = diag(1,2)`, `B = C = diag(1,0)`, `D = I`: `G(s) = diag(s/(s-1), 1)`.
pub fn two_mode_classical() -> StateSpace {
    let a = CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 2.0]]).expect("finite");
    let bc = CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]).expect("finite");
    StateSpace::new(a, bc.clone(), bc, CMatrix::identity(2), Representation::Annihilation).expect("consistent shapes")
}

pub fn two_mode_classical_exact() -> crate::system::ExactStateSpace {
    crate::system::ExactStateSpace::from_float(&two_mode_classical()).expect("finite")
}

/// Quadrature system `A = diag(-1, 1)`, `B = C = [[0,1],[0,0]]`, `D = I` with one
/// unobservable and one uncontrollable mode and `G ≡ I`.
pub fn hidden_mode_quadrature() -> StateSpace {
    let a = CMatrix::from_real(&[&[-1.0, 0.0], &[0.0, 1.0]]).expect("finite");
    let bc = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("finite");
    StateSpace::new(a, bc.clone(), bc, CMatrix::identity(2), Representation::Quadrature).expect("consistent shapes")
}

pub fn hidden_mode_quadrature_exact() -> crate::system::ExactStateSpace {
    crate::system::ExactStateSpace::from_float(&hidden_mode_quadrature()).expect("finite")
}
