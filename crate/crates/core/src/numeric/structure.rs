//! Doubled-up matrices and the two adjoints used by quantum system models.

use crate::error::{Error, Result};
use crate::numeric::CMatrix;
use crate::Complex;

/// `J_k = diag(I_k, -I_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureJ {
    pub k: usize,
}

impl SignatureJ {
    pub fn new(k: usize) -> Self {
        Self { k }
    }

    pub fn matrix(&self) -> CMatrix {
        let mut d = vec![Complex::new(1.0, 0.0); self.k];
        d.extend(std::iter::repeat_n(Complex::new(-1.0, 0.0), self.k));
        CMatrix::from_diag(&d)
    }
}

/// `[[0, I_k], [-I_k, 0]]`, the real symplectic form used by the quadrature adjoint.
pub fn symplectic_j(k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        m[(i, k + i)] = Complex::new(1.0, 0.0);
        m[(k + i, i)] = Complex::new(-1.0, 0.0);
    }
    m
}

fn half_dims(x: &CMatrix) -> Result<(usize, usize)> {
    let (r, c) = x.shape();
    if r % 2 != 0 || c % 2 != 0 {
        return Err(Error::Dimension(format!("adjoint needs even dimensions, got {r}x{c}")));
    }
    Ok((r / 2, c / 2))
}

/// `X♭ = J_r X† J_k` for `X` of size `2k x 2r`.
pub fn flat_adjoint(x: &CMatrix) -> Result<CMatrix> {
    let (k, r) = half_dims(x)?;
    // Sign flips on the off-diagonal blocks, no products needed.
    let xa = x.adjoint();
    Ok(CMatrix::from_fn(2 * r, 2 * k, |i, j| {
        if (i < r) == (j < k) {
            xa[(i, j)]
        } else {
            -xa[(i, j)]
        }
    }))
}

/// `X♯ = 𝕁_r Xᵀ 𝕁_kᵀ`. Intended for real matrices; complex entries are transposed
/// without conjugation.
pub fn sharp_adjoint(x: &CMatrix) -> Result<CMatrix> {
    let (k, r) = half_dims(x)?;
    Ok(&(&symplectic_j(r) * &x.transpose()) * &symplectic_j(k).transpose())
}

/// Quadrature-coordinate image of `♭` for complex matrices: `𝕁_r X† 𝕁_kᵀ`.
/// Agrees with [`sharp_adjoint`] on real input.
pub fn sharp_adjoint_complex(x: &CMatrix) -> Result<CMatrix> {
    let (k, r) = half_dims(x)?;
    Ok(&(&symplectic_j(r) * &x.adjoint()) * &symplectic_j(k).transpose())
}

/// `X#`: entrywise conjugate.
pub fn sharp_conj(x: &CMatrix) -> CMatrix {
    x.conj()
}

/// `Δ(U, V) = [[U, V], [V#, U#]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledUp {
    pub u: CMatrix,
    pub v: CMatrix,
}

impl DoubledUp {
    pub fn new(u: CMatrix, v: CMatrix) -> Result<Self> {
        if u.shape() != v.shape() {
            return Err(Error::Dimension(format!(
                "doubled-up blocks differ in shape: {:?} vs {:?}",
                u.shape(),
                v.shape()
            )));
        }
        Ok(Self { u, v })
    }

    pub fn materialize(&self) -> CMatrix {
        CMatrix::block2x2(&self.u, &self.v, &self.v.conj(), &self.u.conj()).expect("blocks share a shape")
    }

    /// Recover `(U, V)` from a materialized matrix if it has the doubled-up pattern.
    pub fn extract(x: &CMatrix, tol: f64) -> Option<Self> {
        let (k, r) = half_dims(x).ok()?;
        let u = x.submatrix(0, 0, k, r);
        let v = x.submatrix(0, r, k, r);
        let d = Self { u, v };
        let res = (&d.materialize() - x).frobenius_norm();
        (res <= tol * x.frobenius_norm().max(1.0)).then_some(d)
    }

    /// Frobenius distance from `x` to the doubled-up pattern defined by its top blocks.
    pub fn structure_residual(x: &CMatrix) -> Result<f64> {
        let (k, r) = half_dims(x)?;
        let d = Self {
            u: x.submatrix(0, 0, k, r),
            v: x.submatrix(0, r, k, r),
        };
        Ok((&d.materialize() - x).frobenius_norm())
    }

    /// `Δ(U,V)♭ = Δ(U† , -Vᵀ)`.
    pub fn flat(&self) -> Self {
        Self {
            u: self.u.adjoint(),
            v: -&self.v.transpose(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn identity_is_self_flat() {
        let i2 = CMatrix::identity(2);
        assert_eq!(flat_adjoint(&i2).unwrap(), i2);
    }

    #[test]
    fn flat_of_diagonal() {
        let x = CMatrix::from_diag(&[c(-1.0, -1.0), c(-1.0, 1.0)]);
        let f = flat_adjoint(&x).unwrap();
        assert_eq!(f, CMatrix::from_diag(&[c(-1.0, 1.0), c(-1.0, -1.0)]));
    }

    #[test]
    fn flat_of_pure_creation_coupling() {
        let cc = c(0.3, -1.2);
        let x = DoubledUp::new(CMatrix::zeros(1, 1), CMatrix::from_diag(&[cc]))
            .unwrap()
            .materialize();
        let prod = &flat_adjoint(&x).unwrap() * &x;
        let expect = CMatrix::identity(2).scale_real(-cc.norm_sqr());
        assert!((&prod - &expect).frobenius_norm() < 1e-14);
    }

    #[test]
    fn odd_dimension_rejected() {
        let x = CMatrix::zeros(3, 2);
        assert!(matches!(flat_adjoint(&x), Err(Error::Dimension(_))));
        assert!(matches!(sharp_adjoint(&x), Err(Error::Dimension(_))));
    }

    #[test]
    fn sharp_examples() {
        let a = CMatrix::from_real(&[&[-1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(
            sharp_adjoint(&a).unwrap(),
            CMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
        );
        let b = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let bs = sharp_adjoint(&b).unwrap();
        assert_eq!(bs, CMatrix::from_real(&[&[0.0, -1.0], &[0.0, 0.0]]).unwrap());
        assert_eq!((&b * &bs).max_abs(), 0.0);
        let i2 = CMatrix::identity(2);
        assert_eq!(sharp_adjoint(&i2).unwrap(), i2);
    }

    #[test]
    fn structured_flat_matches_materialized() {
        let u = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.5, 0.0)]]).unwrap();
        let v = CMatrix::from_rows(&[vec![c(0.0, -1.0), c(3.0, 1.0)]]).unwrap();
        let d = DoubledUp::new(u, v).unwrap();
        let lhs = flat_adjoint(&d.materialize()).unwrap();
        assert_eq!(lhs, d.flat().materialize());
        assert!(DoubledUp::extract(&lhs, 1e-14).is_some());
    }

    #[test]
    fn signature_squares_to_identity() {
        let j = SignatureJ::new(3).matrix();
        assert_eq!(&j * &j, CMatrix::identity(6));
        assert_eq!(j.adjoint(), j);
    }
}
