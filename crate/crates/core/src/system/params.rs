use crate::error::{Error, Result};
use crate::exact::{GaussianRational as Q, QMat};
use crate::numeric::CMatrix;

const HERMITIAN_TOL: f64 = 1e-12;

/// Physical parameters of an `n`-mode system driven by `m` fields, with the
/// scattering matrix fixed to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct QSystemParams {
    pub n: usize,
    pub m: usize,
    /// Hermitian `n x n`.
    pub omega_minus: CMatrix,
    /// Symmetric `n x n`.
    pub omega_plus: CMatrix,
    /// `m x n`.
    pub c_minus: CMatrix,
    /// `m x n`.
    pub c_plus: CMatrix,
}

fn check_shape(name: &str, m: &CMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Dimension(format!(
            "{name} must be {rows}x{cols}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl QSystemParams {
    pub fn new(omega_minus: CMatrix, omega_plus: CMatrix, c_minus: CMatrix, c_plus: CMatrix) -> Result<Self> {
        let n = omega_minus.rows();
        let m = c_minus.rows();
        check_shape("omega_minus", &omega_minus, n, n)?;
        check_shape("omega_plus", &omega_plus, n, n)?;
        check_shape("c_minus", &c_minus, m, n)?;
        check_shape("c_plus", &c_plus, m, n)?;
        let scale = omega_minus.max_abs().max(1.0);
        let herm = (&omega_minus - &omega_minus.adjoint()).max_abs();
        if herm > HERMITIAN_TOL * scale {
            return Err(Error::Parameter(format!(
                "omega_minus is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let scale = omega_plus.max_abs().max(1.0);
        let sym = (&omega_plus - &omega_plus.transpose()).max_abs();
        if sym > HERMITIAN_TOL * scale {
            return Err(Error::Parameter(format!(
                "omega_plus is not symmetric (deviation {sym:.3e})"
            )));
        }
        Ok(Self {
            n,
            m,
            omega_minus,
            omega_plus,
            c_minus,
            c_plus,
        })
    }

    /// Independent modes appended block-diagonally. Fields are stacked, so the
    /// result has `m1 + m2` fields.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            n: self.n + other.n,
            m: self.m + other.m,
            omega_minus: CMatrix::block_diag(&[&self.omega_minus, &other.omega_minus]),
            omega_plus: CMatrix::block_diag(&[&self.omega_plus, &other.omega_plus]),
            c_minus: CMatrix::block_diag(&[&self.c_minus, &other.c_minus]),
            c_plus: CMatrix::block_diag(&[&self.c_plus, &other.c_plus]),
        }
    }

    /// Append closed modes (no coupling to any field) with the given
    /// Hermitian detuning matrix.
    pub fn with_lossless_modes(&self, omega: &CMatrix) -> Result<Self> {
        let k = omega.rows();
        Self::new(
            CMatrix::block_diag(&[&self.omega_minus, omega]),
            CMatrix::block_diag(&[&self.omega_plus, &CMatrix::zeros(k, k)]),
            CMatrix::hstack(&[&self.c_minus, &CMatrix::zeros(self.m, k)])?,
            CMatrix::hstack(&[&self.c_plus, &CMatrix::zeros(self.m, k)])?,
        )
    }
}

/// Exact parameters. The couplings are `sqrt(coupling_scale_sq) · C±`, which
/// lets square-root couplings such as `sqrt(κ)` stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactParams {
    pub n: usize,
    pub m: usize,
    pub omega_minus: QMat,
    pub omega_plus: QMat,
    pub c_minus: QMat,
    pub c_plus: QMat,
    /// Positive rational `κ`.
    pub coupling_scale_sq: Q,
}

impl ExactParams {
    pub fn new(omega_minus: QMat, omega_plus: QMat, c_minus: QMat, c_plus: QMat, coupling_scale_sq: Q) -> Result<Self> {
        let n = omega_minus.rows();
        let m = c_minus.rows();
        let shapes = [
            ("omega_minus", omega_minus.shape(), (n, n)),
            ("omega_plus", omega_plus.shape(), (n, n)),
            ("c_minus", c_minus.shape(), (m, n)),
            ("c_plus", c_plus.shape(), (m, n)),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::Dimension(format!(
                    "{name} must be {}x{}, got {}x{}",
                    want.0, want.1, got.0, got.1
                )));
            }
        }
        if omega_minus != omega_minus.adjoint() {
            return Err(Error::Parameter("omega_minus is not Hermitian".into()));
        }
        if omega_plus != omega_plus.transpose() {
            return Err(Error::Parameter("omega_plus is not symmetric".into()));
        }
        if !coupling_scale_sq.is_real() || coupling_scale_sq.re <= num_rational::BigRational::from_integer(0.into()) {
            return Err(Error::Parameter("coupling_scale_sq must be a positive rational".into()));
        }
        Ok(Self {
            n,
            m,
            omega_minus,
            omega_plus,
            c_minus,
            c_plus,
            coupling_scale_sq,
        })
    }

    pub fn coupling_scale(&self) -> f64 {
        self.coupling_scale_sq.to_complex().re.sqrt()
    }

    pub fn to_float(&self) -> Result<QSystemParams> {
        let k = self.coupling_scale();
        QSystemParams::new(
            self.omega_minus.to_cmatrix(),
            self.omega_plus.to_cmatrix(),
            self.c_minus.to_cmatrix().scale_real(k),
            self.c_plus.to_cmatrix().scale_real(k),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex;

    #[test]
    fn rejects_non_hermitian_detuning() {
        let om = CMatrix::from_real(&[&[0.0, 1.0], &[2.0, 0.0]]).unwrap();
        let z = CMatrix::zeros(2, 2);
        let c = CMatrix::zeros(1, 2);
        assert!(matches!(
            QSystemParams::new(om, z, c.clone(), c),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        let om = CMatrix::identity(2);
        let c = CMatrix::zeros(1, 3);
        assert!(matches!(
            QSystemParams::new(om.clone(), om, c.clone(), c),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn lossless_extension() {
        let p = QSystemParams::new(
            CMatrix::identity(1),
            CMatrix::zeros(1, 1),
            CMatrix::from_diag(&[Complex::new(2f64.sqrt(), 0.0)]),
            CMatrix::zeros(1, 1),
        )
        .unwrap();
        let q = p
            .with_lossless_modes(&CMatrix::from_diag(&[Complex::new(2.0, 0.0)]))
            .unwrap();
        assert_eq!((q.n, q.m), (2, 1));
        assert_eq!(q.c_minus[(0, 1)], Complex::new(0.0, 0.0));
    }
}
