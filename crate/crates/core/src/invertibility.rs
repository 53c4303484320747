//! Left-invertibility classification from the observable spectrum.

use crate::error::{Error, Result};
use crate::kalman::{check_hidden_mode_assumption, kalman_decompose, HiddenModeReport, DEFAULT_IMAG_TOL};
use crate::numeric::SpectrumReport;
use crate::system::{check_physical_realizability, verify_inverse_identity, InverseIdentityReport, StateSpace};
use crate::zeros::{realizability_tol, transmission_zeros_numeric};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Invertible,
    NotInvertible,
    /// Some observable eigenvalue lies within the margin of the imaginary axis.
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Invertible => "invertible",
            Verdict::NotInvertible => "not-invertible",
            Verdict::Indeterminate => "indeterminate-at-tolerance",
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Invertible => Some(true),
            Verdict::NotInvertible => Some(false),
            Verdict::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertibilityReport {
    /// Asymptotic strong left invertibility.
    pub verdict: Verdict,
    /// The starred variant; always equal to `verdict` for these systems.
    pub star_verdict: Verdict,
    pub observable_eigenvalues: SpectrumReport,
    /// `Re λ` for every observable eigenvalue, in the order of `observable_eigenvalues`.
    pub real_parts: Vec<f64>,
    /// Smallest real part among observable eigenvalues (`+∞` if there are none).
    pub margin: f64,
    pub margin_tol: f64,
    pub hidden_modes: HiddenModeReport,
    /// Strong left invertibility has no spectral criterion here.
    pub strong: &'static str,
}

impl InvertibilityReport {
    pub fn as_left_invertible(&self) -> Option<bool> {
        self.verdict.as_bool()
    }

    pub fn as_star_left_invertible(&self) -> Option<bool> {
        self.star_verdict.as_bool()
    }
}

/// Classifies asymptotic strong left invertibility: every observable
/// eigenvalue must satisfy `Re λ > margin_tol`. Refused when the hidden-mode
/// assumption fails.
pub fn classify_left_invertibility(ss: &StateSpace, tol: f64, margin_tol: f64) -> Result<InvertibilityReport> {
    let rtol = realizability_tol(ss);
    let rep = check_physical_realizability(ss, rtol)?;
    if !rep.pass {
        return Err(Error::NotRealizable {
            residual: rep.max_residual(),
            tol: rtol,
        });
    }
    let k = kalman_decompose(ss, tol)?;
    let hidden = check_hidden_mode_assumption(&k, DEFAULT_IMAG_TOL.max(margin_tol));
    if !hidden.holds {
        return Err(Error::AssumptionViolated {
            offending: hidden.offending_eigenvalues,
        });
    }
    let eigs = k.eig_observable.multiset();
    let real_parts: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    let margin = real_parts.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = if real_parts.iter().all(|&r| r > margin_tol) {
        Verdict::Invertible
    } else if real_parts.iter().any(|&r| r < -margin_tol) {
        Verdict::NotInvertible
    } else {
        Verdict::Indeterminate
    };
    Ok(InvertibilityReport {
        verdict,
        star_verdict: verdict,
        observable_eigenvalues: k.eig_observable,
        real_parts,
        margin,
        margin_tol,
        hidden_modes: hidden,
        strong: "not classified",
    })
}

/// Pointwise inverse `G(-s*)^♭` composed with `G`, plus the inverse's poles.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionWitness {
    pub identity: InverseIdentityReport,
    /// Poles of the inverse: the transmission zeros of `G`.
    pub inverse_poles: SpectrumReport,
    /// Inverse poles as `-z*` of the poles `z` of `G`, for comparison.
    pub mirrored_poles: Vec<Complex>,
}

pub fn inversion_witness(ss: &StateSpace, samples: &[Complex], tol: f64) -> Result<InversionWitness> {
    let identity = verify_inverse_identity(ss, samples, tol)?;
    let inverse_poles = transmission_zeros_numeric(ss, 1e-9)?;
    let mirrored_poles = crate::zeros::poles_numeric(ss, 1e-9)?
        .multiset()
        .iter()
        .map(|p| -p.conj())
        .collect();
    Ok(InversionWitness {
        identity,
        inverse_poles,
        mirrored_poles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::match_multisets;
    use crate::numeric::CMatrix;
    use crate::system::{build_state_space, examples, to_quadrature, QSystemParams};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn gain_is_invertible() {
        let ss = build_state_space(&examples::gain_system()).unwrap();
        let r = classify_left_invertibility(&ss, 1e-9, 1e-8).unwrap();
        assert_eq!(r.as_left_invertible(), Some(true));
        assert_eq!(r.as_star_left_invertible(), Some(true));
        assert!((r.margin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cavity_is_not() {
        let ss = build_state_space(&examples::passive_cavity(1.0, 2.0)).unwrap();
        let r = classify_left_invertibility(&ss, 1e-9, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::NotInvertible);
    }

    #[test]
    fn hidden_mode_example_is_refused() {
        let err = classify_left_invertibility(&examples::hidden_mode_quadrature(), 1e-9, 1e-8).unwrap_err();
        assert!(matches!(err, Error::AssumptionViolated { .. }));
    }

    #[test]
    fn boundary_is_indeterminate() {
        // equal annihilation and creation coupling: pole on the axis
        let one = CMatrix::identity(1);
        let p = QSystemParams::new(CMatrix::zeros(1, 1), CMatrix::zeros(1, 1), one.clone(), one).unwrap();
        let ss = build_state_space(&p).unwrap();
        let r = classify_left_invertibility(&ss, 1e-9, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn witness_values() {
        let ss = build_state_space(&examples::gain_system()).unwrap();
        let w = inversion_witness(&ss, &[c(1.0, 0.0)], 1e-12).unwrap();
        assert!(w.identity.pass);
        let dpa = to_quadrature(&build_state_space(&examples::dpa(2.0, 1.0)).unwrap()).unwrap();
        let w = inversion_witness(&dpa, &[c(0.1, 0.7)], 1e-9).unwrap();
        assert!(match_multisets(&w.inverse_poles.multiset(), &[c(0.5, 0.0), c(1.5, 0.0)], 1e-9).matched);
        assert!(match_multisets(&w.mirrored_poles, &w.inverse_poles.multiset(), 1e-9).matched);
    }
}
