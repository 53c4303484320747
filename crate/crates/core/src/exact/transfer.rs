use crate::error::{Error, Result};
use crate::exact::{GaussianRational as Q, Poly, QMat, RationalFn, RationalMatrix};

/// Characteristic polynomial `det(sI - A)` and the adjugate coefficients
/// `adj(sI - A) = Σ_k M_k s^{n-k}`, `k = 1..n`.
pub fn faddeev_leverrier(a: &QMat) -> Result<(Poly, Vec<QMat>)> {
    if a.rows() != a.cols() {
        return Err(Error::Dimension("state matrix must be square".into()));
    }
    let n = a.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut ms = Vec::with_capacity(n);
    let mut m = QMat::identity(n);
    for k in 1..=n {
        if k > 1 {
            m = a.mul(&m)?.add(&QMat::identity(n).scale(&c[n - k + 1]))?;
        }
        let am = a.mul(&m)?;
        c[n - k] = -&(&am.trace() / &Q::from_int(k as i64));
        ms.push(m.clone());
    }
    Ok((Poly::new(c), ms))
}

/// `G(s) = D + C (sI - A)^{-1} B` with every entry reduced.
pub fn transfer_matrix_exact(a: &QMat, b: &QMat, c: &QMat, d: &QMat) -> Result<RationalMatrix> {
    let n = a.rows();
    if b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols() {
        return Err(Error::Dimension("inconsistent (A, B, C, D) shapes".into()));
    }
    let (chi, ms) = faddeev_leverrier(a)?;
    let terms: Vec<QMat> = ms.iter().map(|m| c.mul(m)?.mul(b)).collect::<Result<_>>()?;
    Ok(RationalMatrix::from_fn(d.rows(), d.cols(), |i, j| {
        let mut coeffs = vec![Q::zero(); n];
        for (k, t) in terms.iter().enumerate() {
            coeffs[n - 1 - k] = t.get(i, j).clone();
        }
        let num = &Poly::new(coeffs) + &(&chi * &Poly::constant(d.get(i, j).clone()));
        RationalFn::new(num, chi.clone())
    }))
}

/// `det G(s)` as a reduced rational function.
pub fn rational_det(g: &RationalMatrix) -> Result<RationalFn> {
    g.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PolyMat;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn characteristic_polynomial_matches_bareiss() {
        let a = QMat::from_fn(3, 3, |i, j| {
            Q::from_parts((i * 3 + j) as i64 - 4, 1, i as i64 - j as i64, 2)
        });
        let (chi, _) = faddeev_leverrier(&a).unwrap();
        let det: Poly = a.resolvent_pencil().det().unwrap();
        assert_eq!(chi, det);
    }

    #[test]
    fn adjugate_identity() {
        let a = QMat::from_fn(3, 3, |i, j| q([[1, 2, 0], [0, -1, 3], [2, 0, 1]][i][j]));
        let (chi, ms) = faddeev_leverrier(&a).unwrap();
        let n = 3;
        let adj = PolyMat::from_fn(n, n, |i, j| {
            let mut coeffs = vec![Q::zero(); n];
            for (k, m) in ms.iter().enumerate() {
                coeffs[n - 1 - k] = m.get(i, j).clone();
            }
            Poly::new(coeffs)
        });
        let prod = a.resolvent_pencil().mul(&adj).unwrap();
        assert_eq!(prod, PolyMat::identity(n).scale(&chi));
    }

    #[test]
    fn classical_first_order_example() {
        let i2 = QMat::identity(2);
        let g = transfer_matrix_exact(&i2, &i2, &i2, &QMat::zeros(2, 2)).unwrap();
        let expect = RationalFn::new(Poly::one(), Poly::from_ints(&[-1, 1]));
        assert_eq!(g.get(0, 0), &expect);
        assert_eq!(g.get(1, 1), &expect);
        assert!(g.get(0, 1).is_zero());
    }

    #[test]
    fn two_mode_classical_example() {
        let a = QMat::from_diag(vec![q(1), q(2)]);
        let bc = QMat::from_diag(vec![q(1), q(0)]);
        let g = transfer_matrix_exact(&a, &bc, &bc, &QMat::identity(2)).unwrap();
        assert_eq!(g.get(0, 0).to_string(), "s/(s-1)");
        assert!(g.get(1, 1).is_one());
    }
}
