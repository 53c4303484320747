//! Poles, invariant zeros and transmission zeros by independent routes, and
//! checks of the structural identities linking them.

use crate::error::{Error, Result};
use crate::exact::{roots, smith_mcmillan, GaussianRational as Q, Poly, PolyMat, SmithMcMillanForm};
use crate::kalman::kalman_decompose;
use crate::numeric::svd::{determinant, inverse, svd};
use crate::numeric::{
    eigenvalues, match_multisets, rank_at_tolerance, singular_values, CMatrix, MatchResult, Method, SpectrumReport,
};
use crate::system::{check_physical_realizability, ExactStateSpace, StateSpace};
use crate::Complex;

/// Relative rank tolerance used when deflating infinite zeros.
const RANGE_TOL: f64 = 1e-10;

fn generic_point(scale: f64) -> Complex {
    Complex::new(0.537_812_9, 0.811_393_7) * scale.max(1.0)
}

/// Finite generalized eigenvalues of the pencil `(P0, E)`,
/// `P(s) = P0 - sE = [[A - sI, B], [C, D]]`.
///
/// With an invertible feedthrough the pencil reduces to the eigenvalues of
/// `A - B D⁻¹ C`. Otherwise a shifted pencil `(P0 - σE)⁻¹E` is used and the
/// report carries the note `degraded`.
pub fn invariant_zeros_pencil(ss: &StateSpace, tol: f64) -> Result<SpectrumReport> {
    let (n, m, p) = (ss.n_states(), ss.n_inputs(), ss.n_outputs());
    if m == p && m > 0 && rank_at_tolerance(&ss.d, tol) == m {
        let dinv = inverse(&ss.d)?;
        let reduced = &ss.a - &(&(&ss.b * &dinv) * &ss.c);
        return Ok(SpectrumReport::from_values(
            &eigenvalues(&reduced)?,
            tol,
            Method::Pencil,
        ));
    }
    if m == 0 && p == 0 {
        return Ok(SpectrumReport::from_values(&eigenvalues(&ss.a)?, tol, Method::Pencil));
    }
    if m != p {
        return Err(Error::Dimension(
            "the pencil route needs a square system matrix (equal input and output counts)".into(),
        ));
    }
    let scale = ss.a.frobenius_norm().max(1.0);
    let full = n + m;
    let sigma = generic_point(scale);
    let p_sigma = ss.rosenbrock(sigma);
    let rank = rank_at_tolerance(&p_sigma, tol);
    if rank < full {
        return Err(Error::NormalRankDeficient {
            normal_rank: rank,
            full,
        });
    }
    let mut e = CMatrix::zeros(full, full);
    for i in 0..n {
        e[(i, i)] = Complex::new(1.0, 0.0);
    }
    // P0 - sE = (P0 - σE)(I - (s - σ)M); zeros are σ + 1/μ for the nonzero
    // eigenvalues μ of M. The nilpotent part is removed by iterating
    // R ← range(M R) until the dimension settles.
    let mmat = &inverse(&p_sigma)? * &e;
    let mnorm = singular_values(&mmat).first().copied().unwrap_or(0.0);
    let mut r = CMatrix::identity(full);
    loop {
        let d = svd(&(&mmat * &r));
        let keep: Vec<usize> = (0..d.sigma.len()).filter(|&i| d.sigma[i] > RANGE_TOL * mnorm).collect();
        let next = d.u.select_columns(&keep);
        if next.cols() == r.cols() {
            break;
        }
        r = next;
        if r.cols() == 0 {
            break;
        }
    }
    let mut zeros = Vec::new();
    if r.cols() > 0 {
        let restricted = &(&r.adjoint() * &mmat) * &r;
        for mu in eigenvalues(&restricted)? {
            if mu.norm() > 0.0 {
                zeros.push(sigma + mu.inv());
            }
        }
    }
    Ok(SpectrumReport::from_values(&zeros, tol, Method::Pencil).with_note("degraded"))
}

/// Realizability tolerance scaled to the size of the data.
pub fn realizability_tol(ss: &StateSpace) -> f64 {
    let s = ss.a.frobenius_norm().max(ss.c.frobenius_norm().powi(2)).max(1.0);
    1e-8 * s
}

/// Invariant zeros as the eigenvalues of `-A♭` (`-A♯` in quadrature
/// coordinates); requires physical realizability.
pub fn invariant_zeros_flat(ss: &StateSpace, tol: f64) -> Result<SpectrumReport> {
    let rtol = realizability_tol(ss);
    let rep = check_physical_realizability(ss, rtol)?;
    if !rep.pass {
        return Err(Error::NotRealizable {
            residual: rep.max_residual(),
            tol: rtol,
        });
    }
    let neg = -&ss.adjoint(&ss.a)?;
    Ok(SpectrumReport::from_values(
        &eigenvalues(&neg)?,
        tol,
        Method::FlatAdjoint,
    ))
}

/// Poles of the transfer matrix: eigenvalues of the minimal realization.
pub fn poles_numeric(ss: &StateSpace, tol: f64) -> Result<SpectrumReport> {
    let min = kalman_decompose(ss, tol)?.minimal;
    Ok(SpectrumReport::from_values(
        &eigenvalues(&min.a)?,
        tol,
        Method::MinimalRealization,
    ))
}

/// Transmission zeros: invariant zeros of the minimal realization.
pub fn transmission_zeros_numeric(ss: &StateSpace, tol: f64) -> Result<SpectrumReport> {
    let min = kalman_decompose(ss, tol)?.minimal;
    let z = invariant_zeros_pencil(&min, tol)?;
    let mut out = SpectrumReport::from_values(&z.multiset(), tol, Method::MinimalRealization);
    out.notes = z.notes;
    Ok(out)
}

/// Poles and transmission zeros read off the Smith–McMillan form.
#[derive(Debug, Clone, PartialEq)]
pub struct SmfSpectra {
    pub smf: SmithMcMillanForm,
    pub zeros: SpectrumReport,
    pub poles: SpectrumReport,
}

pub fn zeros_poles_from_smf(smf: &SmithMcMillanForm, tol: f64) -> Result<(SpectrumReport, SpectrumReport)> {
    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    let mut numeric = false;
    for a in &smf.alphas {
        let r = roots(a)?;
        numeric |= !r.is_exact();
        zeros.extend(r.multiset());
    }
    for b in &smf.betas {
        let r = roots(b)?;
        numeric |= !r.is_exact();
        poles.extend(r.multiset());
    }
    let mut z = SpectrumReport::from_values(&zeros, tol, Method::Smf);
    let mut p = SpectrumReport::from_values(&poles, tol, Method::Smf);
    if numeric {
        z = z.with_note("numeric roots");
        p = p.with_note("numeric roots");
    }
    Ok((z, p))
}

pub fn smf_spectra(ss: &ExactStateSpace, tol: f64) -> Result<SmfSpectra> {
    let g = ss.transfer_matrix()?;
    let smf = smith_mcmillan(&g)?;
    let (zeros, poles) = zeros_poles_from_smf(&smf, tol)?;
    Ok(SmfSpectra { smf, zeros, poles })
}

/// Outcome of the determinant test for a transmission zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DetZeroTest {
    pub is_zero: bool,
    pub det: Complex,
    /// Hadamard bound `Π ‖G e_j‖` used to scale the tolerance.
    pub scale: f64,
}

/// `det G(s0) = 0` test at a point that is not a pole.
pub fn det_zero_test(ss: &StateSpace, s0: Complex, tol: f64) -> Result<DetZeroTest> {
    let poles = poles_numeric(ss, tol)?;
    if let Some(&(p, _)) = poles
        .values
        .iter()
        .find(|(p, _)| (s0 - p).norm() <= tol.sqrt() * p.norm().max(1.0))
    {
        return Err(Error::AtPole { s0, pole: p });
    }
    let g = ss.frequency_response_tol(s0, 0.0)?;
    let det = determinant(&g)?;
    let scale = (0..g.cols())
        .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product::<f64>()
        .max(1.0);
    Ok(DetZeroTest {
        is_zero: det.norm() <= tol * scale,
        det,
        scale,
    })
}

/// Unit null vectors of `P(s0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDirections {
    pub s0: Complex,
    pub x: Vec<Complex>,
    pub u: Vec<Complex>,
    pub y: Vec<Complex>,
    pub v: Vec<Complex>,
    /// `u = 0`: the zero is an unobservable mode.
    pub unobservable_mode: bool,
    /// `v = 0`: the zero is an uncontrollable mode.
    pub uncontrollable_mode: bool,
    pub sigma_min: f64,
}

fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn zero_directions(ss: &StateSpace, s0: Complex, tol: f64) -> Result<ZeroDirections> {
    let n = ss.n_states();
    let p = ss.rosenbrock(s0);
    if !p.is_square() {
        return Err(Error::Dimension(
            "zero directions need equal input and output counts".into(),
        ));
    }
    let d = svd(&p);
    let k = p.rows();
    let smax = d.sigma.first().copied().unwrap_or(0.0);
    let smin = d.sigma.get(k - 1).copied().unwrap_or(0.0);
    if smin > tol * smax.max(1.0) {
        return Err(Error::NoNullSpace { s0, sigma_min: smin });
    }
    let right = d.v.column(k - 1);
    let left = d.u.column(k - 1);
    let (x, u) = right.split_at(n);
    let (y, v) = left.split_at(n);
    let flag_tol = tol.sqrt();
    Ok(ZeroDirections {
        s0,
        unobservable_mode: vec_norm(u) <= flag_tol,
        uncontrollable_mode: vec_norm(v) <= flag_tol,
        x: x.to_vec(),
        u: u.to_vec(),
        y: y.to_vec(),
        v: v.to_vec(),
        sigma_min: smin,
    })
}

/// Transmission zeros against the negative conjugates of the poles.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorReport {
    pub pass: bool,
    pub poles: SpectrumReport,
    pub zeros: SpectrumReport,
    /// `{-p* : p ∈ poles}` with multiplicity.
    pub mirrored_poles: Vec<Complex>,
    pub matching: MatchResult,
}

/// Checks that `z` is a transmission zero exactly when `-z*` is a pole.
pub fn verify_pole_zero_mirror(ss: &StateSpace, tol: f64, match_tol: f64) -> Result<MirrorReport> {
    let poles = poles_numeric(ss, tol)?;
    let zeros = transmission_zeros_numeric(ss, tol)?;
    Ok(mirror_from_spectra(poles, zeros, match_tol))
}

pub fn mirror_from_spectra(poles: SpectrumReport, zeros: SpectrumReport, match_tol: f64) -> MirrorReport {
    let mirrored: Vec<Complex> = poles.multiset().iter().map(|p| -p.conj()).collect();
    let matching = match_multisets(&mirrored, &zeros.multiset(), match_tol);
    MirrorReport {
        pass: matching.matched,
        poles,
        zeros,
        mirrored_poles: mirrored,
        matching,
    }
}

/// `det P(s)` against `det(sI + A♭)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetIdentityReport {
    pub holds: bool,
    pub exact: bool,
    /// Monic-normalized `det P(s)` (exact path only).
    pub lhs: Option<Poly>,
    /// Monic-normalized `det(sI + A♭)` (exact path only).
    pub rhs: Option<Poly>,
    /// Constant `c` with `det P(s) = c · det(sI + A♭)`.
    pub unit: Option<Complex>,
    pub unit_exact: Option<Q>,
    pub max_deviation: f64,
}

/// `det P(s) = [[A - sI, B], [C, D]]` as an exact polynomial.
pub fn rosenbrock_determinant(ss: &ExactStateSpace) -> Result<Poly> {
    let a_s = ss.a.resolvent_pencil().neg();
    let p = PolyMat::block2x2(&a_s, &ss.b.to_poly(), &ss.c.to_poly(), &ss.d.to_poly())?;
    p.det_interpolated()
}

pub fn verify_determinant_identity_exact(ss: &ExactStateSpace) -> Result<DetIdentityReport> {
    let lhs = rosenbrock_determinant(ss)?;
    let af = ss.adjoint(&ss.a)?;
    let rhs = af.neg().resolvent_pencil().det_interpolated()?;
    let lm = lhs.monic();
    let rm = rhs.monic();
    let holds = !lhs.is_zero() && lm == rm;
    let unit = holds.then(|| &lhs.leading() / &rhs.leading());
    Ok(DetIdentityReport {
        holds,
        exact: true,
        unit: unit.as_ref().map(Q::to_complex),
        unit_exact: unit,
        lhs: Some(lm),
        rhs: Some(rm),
        max_deviation: if holds { 0.0 } else { f64::INFINITY },
    })
}

/// Floating-point fallback: the ratio `det P(s_k) / det(s_k I + A♭)` must be
/// the same constant at `2N + 1` sample points.
pub fn verify_determinant_identity_numeric(ss: &StateSpace, tol: f64) -> Result<DetIdentityReport> {
    let n = ss.n_states();
    let af = ss.adjoint(&ss.a)?;
    let scale = ss.a.frobenius_norm().max(1.0);
    let mut ratios = Vec::new();
    for k in 0..(2 * n + 1) {
        let t = k as f64 + 1.0;
        let s = Complex::new(0.31 * t, 0.17 * t * t).scale(scale / (n as f64 + 1.0)) + Complex::new(0.5, 0.25);
        let lhs = determinant(&ss.rosenbrock(s))?;
        let rhs = determinant(&(&CMatrix::identity(n).scale(s) + &af))?;
        if rhs.norm() == 0.0 {
            continue;
        }
        ratios.push(lhs / rhs);
    }
    let unit = ratios.first().copied();
    let dev = match unit {
        Some(u) => ratios
            .iter()
            .map(|r| (r - u).norm() / u.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max),
        None => f64::INFINITY,
    };
    Ok(DetIdentityReport {
        holds: unit.is_some_and(|u| u.norm() > 0.0) && dev <= tol,
        exact: false,
        lhs: None,
        rhs: None,
        unit,
        unit_exact: None,
        max_deviation: dev,
    })
}

/// Normal rank of the pencil at a generic point.
pub fn normal_rank(ss: &StateSpace, tol: f64) -> usize {
    rank_at_tolerance(&ss.rosenbrock(generic_point(ss.a.frobenius_norm())), tol)
}
