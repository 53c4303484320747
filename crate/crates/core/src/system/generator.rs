//! Seedable random system parameters.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::exact::{GaussianRational as Q, Mat, QMat};
use crate::numeric::CMatrix;
use crate::system::{ExactParams, QSystemParams};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// All four parameter blocks dense.
    General,
    /// `Ω₊ = 0`, `C₊ = 0`: no pumping, annihilation coupling only.
    Passive,
    /// `Ω₊ = 0`, `C₋ = 0`: creation coupling only.
    Amplifier,
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im)
}

fn dense<R: Rng + ?Sized>(rng: &mut R, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| gaussian(rng))
}

/// Gaussian entries, then `Ω₋ ← (X + X†)/2` and `Ω₊ ← (Y + Yᵀ)/2`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, kind: SystemKind) -> QSystemParams {
    let x = dense(rng, n, n);
    let omega_minus = (&x + &x.adjoint()).scale_real(0.5);
    let y = dense(rng, n, n);
    let mut omega_plus = (&y + &y.transpose()).scale_real(0.5);
    let mut c_minus = dense(rng, m, n);
    let mut c_plus = dense(rng, m, n);
    match kind {
        SystemKind::General => {}
        SystemKind::Passive => {
            omega_plus = CMatrix::zeros(n, n);
            c_plus = CMatrix::zeros(m, n);
        }
        SystemKind::Amplifier => {
            omega_plus = CMatrix::zeros(n, n);
            c_minus = CMatrix::zeros(m, n);
        }
    }
    QSystemParams::new(omega_minus, omega_plus, c_minus, c_plus).expect("symmetrized parameters satisfy the invariants")
}

/// Random real Hermitian frequencies for closed modes appended with
/// [`QSystemParams::with_lossless_modes`].
pub fn random_lossless_block<R: Rng + ?Sized>(rng: &mut R, k: usize) -> CMatrix {
    let x = dense(rng, k, k);
    (&x + &x.adjoint()).scale_real(0.5)
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let den = rng.random_range(1..=3);
    let re = rng.random_range(-4..=4);
    let im = rng.random_range(-4..=4);
    Q::from_parts(re, den, im, rng.random_range(1..=2))
}

fn exact_dense<R: Rng + ?Sized>(rng: &mut R, r: usize, c: usize) -> QMat {
    Mat::from_fn(r, c, |_, _| small_rational(rng))
}

/// Exact analogue of [`random_params`] with small Gaussian-rational entries
/// and `coupling_scale_sq = 1`.
pub fn random_exact_params<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, kind: SystemKind) -> ExactParams {
    let half = Q::from_ratio(1, 2);
    let x = exact_dense(rng, n, n);
    let omega_minus = x.add(&x.adjoint()).expect("square").scale(&half);
    let y = exact_dense(rng, n, n);
    let mut omega_plus = y.add(&y.transpose()).expect("square").scale(&half);
    let mut c_minus = exact_dense(rng, m, n);
    let mut c_plus = exact_dense(rng, m, n);
    match kind {
        SystemKind::General => {}
        SystemKind::Passive => {
            omega_plus = QMat::zeros(n, n);
            c_plus = QMat::zeros(m, n);
        }
        SystemKind::Amplifier => {
            omega_plus = QMat::zeros(n, n);
            c_minus = QMat::zeros(m, n);
        }
    }
    ExactParams::new(omega_minus, omega_plus, c_minus, c_plus, Q::one())
        .expect("symmetrized parameters satisfy the invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_params(&mut ChaCha8Rng::seed_from_u64(5), 3, 2, SystemKind::General);
        let b = random_params(&mut ChaCha8Rng::seed_from_u64(5), 3, 2, SystemKind::General);
        assert_eq!(a, b);
    }

    #[test]
    fn passive_kind_zeroes_active_terms() {
        let p = random_params(&mut ChaCha8Rng::seed_from_u64(1), 2, 1, SystemKind::Passive);
        assert_eq!(p.omega_plus.max_abs(), 0.0);
        assert_eq!(p.c_plus.max_abs(), 0.0);
        let e = random_exact_params(&mut ChaCha8Rng::seed_from_u64(1), 2, 1, SystemKind::Amplifier);
        assert!(e.c_minus.is_zero());
    }
}
