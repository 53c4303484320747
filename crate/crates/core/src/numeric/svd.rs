//! Singular values, numerical rank, null spaces and linear solves (nalgebra-backed).

use crate::error::{Error, Result};
use crate::numeric::CMatrix;
use crate::Complex;

/// Singular values with the matching left and right singular vectors,
/// sorted in decreasing order. `v` is square (`cols x cols`).
#[derive(Debug, Clone)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

/// Full SVD. Wide matrices are padded with zero rows so the right factor
/// always spans the whole domain.
pub fn svd(m: &CMatrix) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd {
            sigma: Vec::new(),
            u: CMatrix::identity(r),
            v: CMatrix::identity(c),
        };
    }
    let padded = if r < c {
        CMatrix::vstack(&[m, &CMatrix::zeros(c - r, c)]).expect("same width")
    } else {
        m.clone()
    };
    let dec = nalgebra::SVD::new(padded.to_nalgebra(), true, true);
    let u = CMatrix::from_nalgebra(&dec.u.expect("requested"));
    let vt = CMatrix::from_nalgebra(&dec.v_t.expect("requested"));
    let s: Vec<f64> = dec.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| s[i]).collect();
    let u = CMatrix::from_fn(r, order.len(), |i, j| u[(i, order[j])]);
    let v = CMatrix::from_fn(c, order.len(), |i, j| vt[(order[j], i)].conj());
    // keep only the genuine singular values of an unpadded wide matrix
    let k = r.min(c);
    let sigma = if r < c {
        let mut full = sigma;
        for x in full.iter_mut().skip(k) {
            *x = 0.0;
        }
        full
    } else {
        sigma
    };
    Svd { sigma, u, v }
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s = svd(m).sigma;
    s.truncate(m.rows().min(m.cols()));
    s
}

/// Number of singular values greater than `tol * sigma_max`.
pub fn rank_at_tolerance(m: &CMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * top).count()
}

/// Orthonormal basis (as columns) of `{x : M x = 0}` with relative tolerance.
pub fn null_space(m: &CMatrix, tol: f64) -> CMatrix {
    let c = m.cols();
    let d = svd(m);
    let top = d.sigma.first().copied().unwrap_or(0.0);
    let rank = if top == 0.0 {
        0
    } else {
        d.sigma.iter().take(m.rows().min(c)).filter(|&&x| x > tol * top).count()
    };
    let idx: Vec<usize> = (rank..c).collect();
    d.v.select_columns(&idx)
}

/// Orthonormal basis of the column space with relative tolerance.
pub fn range_basis(m: &CMatrix, tol: f64) -> CMatrix {
    let d = svd(m);
    let top = d.sigma.first().copied().unwrap_or(0.0);
    let k = m.rows().min(m.cols());
    let idx: Vec<usize> = (0..k).filter(|&i| top > 0.0 && d.sigma[i] > tol * top).collect();
    d.u.select_columns(&idx)
}

/// Solve `A X = B` with partial-pivot LU.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve needs square A matching B rows, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if a.rows() == 0 {
        return Ok(CMatrix::zeros(0, b.cols()));
    }
    let x = a
        .to_nalgebra()
        .lu()
        .solve(&b.to_nalgebra())
        .ok_or_else(|| Error::Dimension("singular system matrix".into()))?;
    Ok(CMatrix::from_nalgebra(&x))
}

pub fn determinant(a: &CMatrix) -> Result<Complex> {
    if !a.is_square() {
        return Err(Error::Dimension("determinant of non-square matrix".into()));
    }
    if a.rows() == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    Ok(a.to_nalgebra().lu().determinant())
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_at_tolerance(&CMatrix::identity(4), 1e-9), 4);
        let ones = CMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(rank_at_tolerance(&ones, 1e-9), 1);
        assert_eq!(rank_at_tolerance(&CMatrix::zeros(3, 2), 1e-9), 0);
        assert_eq!(rank_at_tolerance(&CMatrix::zeros(0, 0), 1e-9), 0);
    }

    #[test]
    fn rank_nullity_on_low_rank_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (r, c, k) in [(4, 6, 2), (6, 4, 3), (5, 5, 1), (3, 7, 3)] {
            let m = &random(&mut rng, r, k) * &random(&mut rng, k, c);
            let rank = rank_at_tolerance(&m, 1e-9);
            let ns = null_space(&m, 1e-9);
            assert_eq!(rank, k);
            assert_eq!(rank + ns.cols(), c);
            assert!((&m * &ns).frobenius_norm() < 1e-10);
            let gram = &ns.adjoint() * &ns;
            assert!((&gram - &CMatrix::identity(ns.cols())).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn solve_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random(&mut rng, 4, 4);
        let b = random(&mut rng, 4, 2);
        let x = solve(&a, &b).unwrap();
        assert!((&(&a * &x) - &b).frobenius_norm() < 1e-10);
        let inv = inverse(&a).unwrap();
        assert!((&(&a * &inv) - &CMatrix::identity(4)).frobenius_norm() < 1e-10);
    }

    #[test]
    fn range_of_rank_one() {
        let m = CMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(range_basis(&m, 1e-9).cols(), 1);
    }
}
