use crate::error::{Error, Result};
use crate::exact::{transfer_matrix_exact, GaussianRational as Q, Mat, QMat, RationalMatrix};
use crate::numeric::{eigenvalues, flat_adjoint, sharp_adjoint_complex, solve, CMatrix, DoubledUp, SignatureJ};
use crate::system::{ExactParams, QSystemParams};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Doubled-up annihilation/creation coordinates; the adjoint is `♭`.
    Annihilation,
    /// Real quadrature coordinates; the adjoint is `♯`.
    Quadrature,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Annihilation => "annihilation",
            Representation::Quadrature => "quadrature",
        }
    }
}

/// `(A, B, C, D)` with `A: N x N`, `B: N x M`, `C: P x N`, `D: P x M`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub representation: Representation,
}

impl StateSpace {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix, representation: Representation) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() || b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols() {
            return Err(Error::Dimension(format!(
                "inconsistent realization shapes A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            representation,
        })
    }

    pub fn n_states(&self) -> usize {
        self.a.rows()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn n_outputs(&self) -> usize {
        self.c.rows()
    }

    /// `♭` in annihilation coordinates, its quadrature image otherwise.
    pub fn adjoint(&self, x: &CMatrix) -> Result<CMatrix> {
        match self.representation {
            Representation::Annihilation => flat_adjoint(x),
            Representation::Quadrature => sharp_adjoint_complex(x),
        }
    }

    /// `P(s) = [[A - sI, B], [C, D]]`.
    pub fn rosenbrock(&self, s: Complex) -> CMatrix {
        let n = self.n_states();
        let a_s = &self.a - &CMatrix::identity(n).scale(s);
        CMatrix::block2x2(&a_s, &self.b, &self.c, &self.d).expect("validated shapes")
    }

    /// `D + C (sI - A)^{-1} B` by a linear solve. Fails when `s` lies within
    /// `tol · max(1, |λ|)` of an eigenvalue `λ` of `A`.
    pub fn frequency_response_tol(&self, s: Complex, tol: f64) -> Result<CMatrix> {
        let n = self.n_states();
        if let Some(&l) = eigenvalues(&self.a)?
            .iter()
            .find(|l| (s - **l).norm() <= tol * l.norm().max(1.0))
        {
            return Err(Error::PoleEvaluation { s, eigenvalue: l });
        }
        let lhs = &CMatrix::identity(n).scale(s) - &self.a;
        let x = solve(&lhs, &self.b).map_err(|_| Error::PoleEvaluation { s, eigenvalue: s })?;
        Ok(&self.d + &(&self.c * &x))
    }

    pub fn frequency_response(&self, s: Complex) -> Result<CMatrix> {
        self.frequency_response_tol(s, 1e-9)
    }

    /// Same transfer function in new state coordinates `x = T z`.
    pub fn similarity(&self, t: &CMatrix) -> Result<Self> {
        let ti = crate::numeric::svd::inverse(t)?;
        Self::new(
            &(&ti * &self.a) * t,
            &ti * &self.b,
            &self.c * t,
            self.d.clone(),
            self.representation,
        )
    }

    /// Realization of `G(-s*)^♭`: `(-A♭, C♭, -B♭, D♭)`.
    pub fn flat_inverse(&self) -> Result<Self> {
        Self::new(
            -&self.adjoint(&self.a)?,
            self.adjoint(&self.c)?,
            -&self.adjoint(&self.b)?,
            self.adjoint(&self.d)?,
            self.representation,
        )
    }
}

/// Unitary `V_k = (1/sqrt 2) [[I, I], [-iI, iI]]` from annihilation to quadrature coordinates.
pub fn quadrature_unitary(k: usize) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(2 * k, 2 * k, |i, j| {
        if i % k != j % k {
            return Complex::new(0.0, 0.0);
        }
        match (i < k, j < k) {
            (true, _) => Complex::new(h, 0.0),
            (false, true) => Complex::new(0.0, -h),
            (false, false) => Complex::new(0.0, h),
        }
    })
}

fn exact_w(k: usize) -> QMat {
    Mat::from_fn(2 * k, 2 * k, |i, j| {
        if i % k != j % k {
            return Q::zero();
        }
        match (i < k, j < k) {
            (true, _) => Q::one(),
            (false, true) => Q::from_parts(0, 1, -1, 1),
            (false, false) => Q::i(),
        }
    })
}

/// Annihilation-coordinate realization built from physical parameters:
/// `D = I`, `C = Δ(C₋, C₊)`, `B = -C♭D`, `A = -iJΩ - ½C♭C`.
pub fn build_state_space(p: &QSystemParams) -> Result<StateSpace> {
    let (n, m) = (p.n, p.m);
    let omega = DoubledUp::new(p.omega_minus.clone(), p.omega_plus.clone())?.materialize();
    let c = DoubledUp::new(p.c_minus.clone(), p.c_plus.clone())?.materialize();
    let d = CMatrix::identity(2 * m);
    let c_flat = flat_adjoint(&c)?;
    let b = -&(&c_flat * &d);
    let j = SignatureJ::new(n).matrix();
    let a = &(&j * &omega).scale(Complex::new(0.0, -1.0)) - &(&c_flat * &c).scale_real(0.5);
    StateSpace::new(a, b, c, d, Representation::Annihilation)
}

/// Same change of coordinates in both directions of the quadrature map.
fn conjugate(v_left: &CMatrix, x: &CMatrix, v_right: &CMatrix) -> CMatrix {
    &(v_left * x) * &v_right.adjoint()
}

/// `Ā = V A V†`, `B̄ = V B V†`, `C̄ = V C V†`, `D̄ = V D V†`, imaginary residue checked.
pub fn to_quadrature(ss: &StateSpace) -> Result<StateSpace> {
    if ss.representation != Representation::Annihilation {
        return Err(Error::Parameter(
            "to_quadrature expects an annihilation-coordinate realization".into(),
        ));
    }
    let (n2, m2) = (ss.n_states(), ss.n_inputs());
    if n2 % 2 != 0 || m2 % 2 != 0 || ss.n_outputs() != m2 {
        return Err(Error::Dimension("quadrature map needs doubled-up dimensions".into()));
    }
    let vn = quadrature_unitary(n2 / 2);
    let vm = quadrature_unitary(m2 / 2);
    let parts = [
        ("A", conjugate(&vn, &ss.a, &vn)),
        ("B", conjugate(&vn, &ss.b, &vm)),
        ("C", conjugate(&vm, &ss.c, &vn)),
        ("D", conjugate(&vm, &ss.d, &vm)),
    ];
    let mut real = Vec::with_capacity(4);
    for (name, x) in parts {
        let residue = x.max_imag_abs();
        if residue > 1e-10 * x.max_abs().max(1.0) {
            return Err(Error::Parameter(format!(
                "quadrature {name} keeps an imaginary residue {residue:.3e}; the input is not doubled-up"
            )));
        }
        real.push(x.real_part());
    }
    let mut it = real.into_iter();
    StateSpace::new(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        Representation::Quadrature,
    )
}

/// Inverse of [`to_quadrature`].
pub fn from_quadrature(ss: &StateSpace) -> Result<StateSpace> {
    if ss.representation != Representation::Quadrature {
        return Err(Error::Parameter(
            "from_quadrature expects a quadrature realization".into(),
        ));
    }
    let (n2, m2) = (ss.n_states(), ss.n_inputs());
    if n2 % 2 != 0 || m2 % 2 != 0 || ss.n_outputs() != m2 {
        return Err(Error::Dimension("quadrature map needs even dimensions".into()));
    }
    let vn = quadrature_unitary(n2 / 2).adjoint();
    let vm = quadrature_unitary(m2 / 2).adjoint();
    StateSpace::new(
        conjugate(&vn, &ss.a, &vn),
        conjugate(&vn, &ss.b, &vm),
        conjugate(&vm, &ss.c, &vn),
        conjugate(&vm, &ss.d, &vm),
        Representation::Annihilation,
    )
}

/// Exact realization. When built from [`ExactParams`] with `κ ≠ 1` the input
/// and output matrices are rescaled (`B' = B·sqrt κ`, `C' = C / sqrt κ`) so that
/// everything stays rational; the transfer matrix and `det P(s)` are unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactStateSpace {
    pub a: QMat,
    pub b: QMat,
    pub c: QMat,
    pub d: QMat,
    pub representation: Representation,
    pub coupling_scale_sq: Q,
}

impl ExactStateSpace {
    pub fn new(a: QMat, b: QMat, c: QMat, d: QMat, representation: Representation) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n || b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols() {
            return Err(Error::Dimension("inconsistent exact realization shapes".into()));
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            representation,
            coupling_scale_sq: Q::one(),
        })
    }

    /// Exact binary values of a float realization.
    pub fn from_float(ss: &StateSpace) -> Result<Self> {
        Self::new(
            QMat::from_cmatrix(&ss.a)?,
            QMat::from_cmatrix(&ss.b)?,
            QMat::from_cmatrix(&ss.c)?,
            QMat::from_cmatrix(&ss.d)?,
            ss.representation,
        )
    }

    pub fn adjoint(&self, x: &QMat) -> Result<QMat> {
        match self.representation {
            Representation::Annihilation => x.flat(),
            Representation::Quadrature => x.sharp(),
        }
    }

    pub fn to_float(&self) -> Result<StateSpace> {
        let k = self.coupling_scale_sq.to_complex().re.sqrt();
        StateSpace::new(
            self.a.to_cmatrix(),
            self.b.to_cmatrix().scale_real(1.0 / k),
            self.c.to_cmatrix().scale_real(k),
            self.d.to_cmatrix(),
            self.representation,
        )
    }

    pub fn transfer_matrix(&self) -> Result<RationalMatrix> {
        transfer_matrix_exact(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn to_quadrature(&self) -> Result<Self> {
        if self.representation != Representation::Annihilation {
            return Err(Error::Parameter(
                "to_quadrature expects an annihilation-coordinate realization".into(),
            ));
        }
        let (n2, m2) = (self.a.rows(), self.b.cols());
        if n2 % 2 != 0 || m2 % 2 != 0 || self.c.rows() != m2 {
            return Err(Error::Dimension("quadrature map needs doubled-up dimensions".into()));
        }
        let half = Q::from_ratio(1, 2);
        let wn = exact_w(n2 / 2);
        let wm = exact_w(m2 / 2);
        let conj = |l: &QMat, x: &QMat, r: &QMat| -> Result<QMat> { Ok(l.mul(x)?.mul(&r.adjoint())?.scale(&half)) };
        let out = Self {
            a: conj(&wn, &self.a, &wn)?,
            b: conj(&wn, &self.b, &wm)?,
            c: conj(&wm, &self.c, &wn)?,
            d: conj(&wm, &self.d, &wm)?,
            representation: Representation::Quadrature,
            coupling_scale_sq: self.coupling_scale_sq.clone(),
        };
        if ![&out.a, &out.b, &out.c, &out.d].iter().all(|m| m.is_real()) {
            return Err(Error::Parameter(
                "quadrature form is not real; the input is not doubled-up".into(),
            ));
        }
        Ok(out)
    }
}

fn exact_doubled(u: &QMat, v: &QMat) -> Result<QMat> {
    QMat::block2x2(u, v, &v.conj(), &u.conj())
}

pub fn build_exact_state_space(p: &ExactParams) -> Result<ExactStateSpace> {
    let (n, m) = (p.n, p.m);
    let omega = exact_doubled(&p.omega_minus, &p.omega_plus)?;
    let c0 = exact_doubled(&p.c_minus, &p.c_plus)?;
    let d = QMat::identity(2 * m);
    let kappa = &p.coupling_scale_sq;
    let c0_flat = c0.flat()?;
    let b = c0_flat.mul(&d)?.scale(&-kappa);
    let minus_i_j = Mat::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            Q::zero()
        } else if i < n {
            Q::from_parts(0, 1, -1, 1)
        } else {
            Q::i()
        }
    });
    let a = minus_i_j
        .mul(&omega)?
        .sub(&c0_flat.mul(&c0)?.scale(&(kappa * &Q::from_ratio(1, 2))))?;
    let mut ss = ExactStateSpace::new(a, b, c0, d, Representation::Annihilation)?;
    ss.coupling_scale_sq = kappa.clone();
    Ok(ss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::examples;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn assert_close(x: &CMatrix, y: &CMatrix, tol: f64) {
        assert!((x - y).max_abs() <= tol, "{x:?} vs {y:?}");
    }

    #[test]
    fn passive_cavity_matrices() {
        let ss = build_state_space(&examples::passive_cavity(1.0, 2.0)).unwrap();
        let r2 = 2f64.sqrt();
        assert_close(&ss.a, &CMatrix::from_diag(&[c(-1.0, -1.0), c(-1.0, 1.0)]), 1e-15);
        assert_close(&ss.b, &CMatrix::identity(2).scale_real(-r2), 1e-15);
        assert_close(&ss.c, &CMatrix::identity(2).scale_real(r2), 1e-15);
        assert_eq!(ss.d, CMatrix::identity(2));
    }

    #[test]
    fn gain_system_matrices() {
        let ss = build_state_space(&examples::gain_system()).unwrap();
        let swap = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(ss.c, swap);
        assert_eq!(ss.b, swap);
        assert_eq!(ss.a, CMatrix::identity(2).scale_real(0.5));
        let cfc = &flat_adjoint(&ss.c).unwrap() * &ss.c;
        assert_eq!(cfc, CMatrix::identity(2).scale_real(-1.0));
    }

    #[test]
    fn frequency_response_examples() {
        let gain = build_state_space(&examples::gain_system()).unwrap();
        assert_close(
            &gain.frequency_response(c(1.0, 0.0)).unwrap(),
            &CMatrix::identity(2).scale_real(3.0),
            1e-14,
        );
        let cav = build_state_space(&examples::passive_cavity(1.0, 2.0)).unwrap();
        assert_close(
            &cav.frequency_response(c(0.0, 0.0)).unwrap(),
            &CMatrix::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]),
            1e-14,
        );
        assert_close(&cav.frequency_response(c(1e9, 0.0)).unwrap(), &cav.d, 1e-6);
        assert!(matches!(
            gain.frequency_response(c(0.5, 0.0)),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn quadrature_forms() {
        let cav = build_state_space(&examples::passive_cavity(1.0, 2.0)).unwrap();
        let q = to_quadrature(&cav).unwrap();
        assert_close(
            &q.a,
            &CMatrix::from_real(&[&[-1.0, 1.0], &[-1.0, -1.0]]).unwrap(),
            1e-14,
        );
        let dpa = build_state_space(&examples::dpa(2.0, 1.0)).unwrap();
        let q = to_quadrature(&dpa).unwrap();
        assert_close(&q.a, &CMatrix::from_real(&[&[-0.5, 0.0], &[0.0, -1.5]]).unwrap(), 1e-14);
        let back = from_quadrature(&q).unwrap();
        assert_close(&back.a, &dpa.a, 1e-14);
    }

    #[test]
    fn exact_build_matches_float_build() {
        let ep = examples::dpa_exact(Q::from_int(2), Q::from_int(1));
        let ex = build_exact_state_space(&ep).unwrap();
        let fl = build_state_space(&ep.to_float().unwrap()).unwrap();
        let ef = ex.to_float().unwrap();
        assert_close(&ef.a, &fl.a, 1e-14);
        assert_close(&ef.b, &fl.b, 1e-14);
        assert_close(&ef.c, &fl.c, 1e-14);
        let qa = ex.to_quadrature().unwrap();
        assert_eq!(qa.a, QMat::from_diag(vec![Q::from_ratio(-1, 2), Q::from_ratio(-3, 2)]));
    }

    #[test]
    fn flat_inverse_realization() {
        let gain = build_state_space(&examples::gain_system()).unwrap();
        let inv = gain.flat_inverse().unwrap();
        let s = c(1.0, 0.0);
        let prod = &gain.frequency_response(s).unwrap() * &inv.frequency_response(s).unwrap();
        assert_close(&prod, &CMatrix::identity(2), 1e-14);
    }
}
