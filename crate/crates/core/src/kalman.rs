//! Controllable/observable subspaces, the four-block Kalman split and the
//! minimal realization.
//!
//! With `𝒞` the controllable subspace, `𝒩` the unobservable subspace and
//! `𝒪 = 𝒩⊥`, the basis `T = [𝒞∩𝒩, 𝒞⊖(𝒞∩𝒩), (𝒞+𝒩)⊖𝒞, 𝒪∩𝒞⊥]` follows the
//! invariant flag `𝒞∩𝒩 ⊂ 𝒞 ⊂ 𝒞+𝒩 ⊂ ℂᴺ`, so `T†AT` is block upper triangular.

use crate::error::{Error, Result};
use crate::numeric::svd::svd;
use crate::numeric::{eigenvalues, CMatrix, Method, SpectrumReport};
use crate::system::StateSpace;
use crate::Complex;

/// Real-part tolerance for "purely imaginary" when none is given.
pub const DEFAULT_IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct KalmanReport {
    pub eig_co: SpectrumReport,
    pub eig_c_obar: SpectrumReport,
    pub eig_cbar_o: SpectrumReport,
    pub eig_cbar_obar: SpectrumReport,
    /// `co ∪ c̄o`
    pub eig_observable: SpectrumReport,
    /// `cō ∪ c̄ō`
    pub eig_unobservable: SpectrumReport,
    pub controllable_dim: usize,
    pub observable_dim: usize,
    /// Unitary; columns ordered `cō, co, c̄ō, c̄o`.
    pub transformation: CMatrix,
    /// Block sizes in the same order as the columns of `transformation`.
    pub block_dims: [usize; 4],
    pub minimal: StateSpace,
    pub tol: f64,
}

fn band_check(sigma: f64, threshold: f64, tol: f64) -> Result<()> {
    if sigma > threshold / 10.0 && sigma < threshold * 10.0 {
        return Err(Error::SubspaceInstability { tol, sigma, threshold });
    }
    Ok(())
}

/// Columns of `v` whose singular values are above (`keep_large`) or at most
/// `threshold`. Missing singular values count as zero.
fn split_by_sigma(sigma: &[f64], cols: usize, threshold: f64, tol: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut large = Vec::new();
    let mut small = Vec::new();
    for j in 0..cols {
        let s = sigma.get(j).copied().unwrap_or(0.0);
        band_check(s, threshold, tol)?;
        if s > threshold {
            large.push(j);
        } else {
            small.push(j);
        }
    }
    Ok((large, small))
}

/// Orthonormal basis of `span{B, AB, A²B, ...}` by a block staircase.
pub fn controllable_subspace(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = a.rows();
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    let mut basis = CMatrix::zeros(n, 0);
    if scale == 0.0 || n == 0 {
        return Ok(basis);
    }
    let threshold = tol * scale;
    let mut block = b.clone();
    while basis.cols() < n && block.cols() > 0 {
        // remove the part already spanned, twice for orthogonality
        let mut w = block;
        for _ in 0..2 {
            w = &w - &(&basis * &(&basis.adjoint() * &w));
        }
        let d = svd(&w);
        let k = w.rows().min(w.cols());
        let mut fresh = Vec::new();
        for j in 0..k {
            band_check(d.sigma[j], threshold, tol)?;
            if d.sigma[j] > threshold {
                fresh.push(j);
            }
        }
        if fresh.is_empty() {
            break;
        }
        let new_cols = d.u.select_columns(&fresh);
        basis = CMatrix::hstack(&[&basis, &new_cols])?;
        block = a * &new_cols;
    }
    Ok(basis)
}

/// Orthonormal basis of the observable subspace (orthogonal complement of the
/// unobservable subspace).
pub fn observable_subspace(a: &CMatrix, c: &CMatrix, tol: f64) -> Result<CMatrix> {
    controllable_subspace(&a.adjoint(), &c.adjoint(), tol)
}

/// Orthonormal basis of the orthogonal complement of the span of orthonormal columns.
fn complement(q: &CMatrix, n: usize) -> CMatrix {
    if q.cols() == 0 {
        return CMatrix::identity(n);
    }
    let d = svd(&q.adjoint());
    let idx: Vec<usize> = (0..n)
        .filter(|&j| d.sigma.get(j).copied().unwrap_or(0.0) < 0.5)
        .collect();
    d.v.select_columns(&idx)
}

fn block_spectrum(a: &CMatrix, q: &CMatrix, tol: f64) -> Result<SpectrumReport> {
    let blk = &(&q.adjoint() * a) * q;
    Ok(SpectrumReport::from_values(
        &eigenvalues(&blk)?,
        tol,
        Method::Eigenvalues,
    ))
}

pub fn kalman_decompose(ss: &StateSpace, tol: f64) -> Result<KalmanReport> {
    let n = ss.n_states();
    let a = &ss.a;
    let qc = controllable_subspace(a, &ss.b, tol)?;
    let qo = observable_subspace(a, &ss.c, tol)?;

    // y with Qo† Qc y = 0 spans 𝒞∩𝒩 inside 𝒞
    let m = &qo.adjoint() * &qc;
    let d = svd(&m);
    let (keep, drop) = split_by_sigma(&d.sigma, qc.cols(), tol, tol)?;
    let q_c_obar = &qc * &d.v.select_columns(&drop);
    let q_co = &qc * &d.v.select_columns(&keep);

    // z with Qc† Qo z = 0 spans 𝒪∩𝒞⊥
    let m2 = &qc.adjoint() * &qo;
    let d2 = svd(&m2);
    let (_, drop2) = split_by_sigma(&d2.sigma, qo.cols(), tol, tol)?;
    let q_cbar_o = &qo * &d2.v.select_columns(&drop2);

    let spanned = CMatrix::hstack(&[&qc, &q_cbar_o])?;
    let q_cbar_obar = complement(&spanned, n);

    let t = CMatrix::hstack(&[&q_c_obar, &q_co, &q_cbar_obar, &q_cbar_o])?;
    if t.cols() != n {
        return Err(Error::SubspaceInstability {
            tol,
            sigma: f64::NAN,
            threshold: tol,
        });
    }

    let eig_co = block_spectrum(a, &q_co, tol)?;
    let eig_c_obar = block_spectrum(a, &q_c_obar, tol)?;
    let eig_cbar_o = block_spectrum(a, &q_cbar_o, tol)?;
    let eig_cbar_obar = block_spectrum(a, &q_cbar_obar, tol)?;
    let union = |x: &SpectrumReport, y: &SpectrumReport| {
        let mut v = x.multiset();
        v.extend(y.multiset());
        SpectrumReport::from_values(&v, tol, Method::Eigenvalues)
    };
    let eig_observable = union(&eig_co, &eig_cbar_o);
    let eig_unobservable = union(&eig_c_obar, &eig_cbar_obar);

    let minimal = StateSpace::new(
        &(&q_co.adjoint() * a) * &q_co,
        &q_co.adjoint() * &ss.b,
        &ss.c * &q_co,
        ss.d.clone(),
        ss.representation,
    )?;

    Ok(KalmanReport {
        block_dims: [q_c_obar.cols(), q_co.cols(), q_cbar_obar.cols(), q_cbar_o.cols()],
        eig_co,
        eig_c_obar,
        eig_cbar_o,
        eig_cbar_obar,
        eig_observable,
        eig_unobservable,
        controllable_dim: qc.cols(),
        observable_dim: qo.cols(),
        transformation: t,
        minimal,
        tol,
    })
}

pub fn minimal_realization(ss: &StateSpace, tol: f64) -> Result<StateSpace> {
    Ok(kalman_decompose(ss, tol)?.minimal)
}

/// Whether the controllable-unobservable, uncontrollable-observable and
/// uncontrollable-unobservable blocks have purely imaginary spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenModeReport {
    pub holds: bool,
    pub offending_eigenvalues: Vec<Complex>,
    pub real_part_tol: f64,
}

pub fn check_hidden_mode_assumption(report: &KalmanReport, real_part_tol: f64) -> HiddenModeReport {
    let offending: Vec<Complex> = [&report.eig_c_obar, &report.eig_cbar_o, &report.eig_cbar_obar]
        .iter()
        .flat_map(|s| s.multiset())
        .filter(|z| z.re.abs() > real_part_tol)
        .collect();
    HiddenModeReport {
        holds: offending.is_empty(),
        offending_eigenvalues: offending,
        real_part_tol,
    }
}

/// Invariant zeros as `{-λ* : λ observable} ∪ {λ unobservable}`; valid only when
/// the hidden-mode assumption holds, refused otherwise.
pub fn invariant_zeros_from_kalman(ss: &StateSpace, tol: f64, real_part_tol: f64) -> Result<SpectrumReport> {
    let k = kalman_decompose(ss, tol)?;
    let h = check_hidden_mode_assumption(&k, real_part_tol);
    if !h.holds {
        return Err(Error::AssumptionViolated {
            offending: h.offending_eigenvalues,
        });
    }
    let mut v: Vec<Complex> = k.eig_observable.multiset().iter().map(|z| -z.conj()).collect();
    v.extend(k.eig_unobservable.multiset());
    Ok(SpectrumReport::from_values(&v, tol, Method::KalmanTheorem))
}
