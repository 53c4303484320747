use crate::error::{Error, Result};
use crate::numeric::CMatrix;
use crate::system::StateSpace;
use crate::Complex;

/// Outcome of checking `G(s) · G(-s*)^♭ = I` at sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseIdentityReport {
    pub pass: bool,
    pub tol: f64,
    pub max_residual: f64,
    /// `(s, ‖G(s)G(-s*)^♭ - I‖_F)` for every evaluated sample.
    pub evaluated: Vec<(Complex, f64)>,
    /// Samples at a pole of `G` or of its inverse.
    pub skipped: Vec<(Complex, String)>,
}

/// `G(-s*)^♭`, the candidate inverse evaluated at `s`.
pub fn flat_reflected_response(ss: &StateSpace, s: Complex) -> Result<CMatrix> {
    let g = ss.frequency_response(-s.conj())?;
    ss.adjoint(&g)
}

pub fn verify_inverse_identity(ss: &StateSpace, samples: &[Complex], tol: f64) -> Result<InverseIdentityReport> {
    let id = CMatrix::identity(ss.n_outputs());
    let mut evaluated = Vec::new();
    let mut skipped = Vec::new();
    for &s in samples {
        let pair = ss
            .frequency_response(s)
            .and_then(|g| Ok((g, flat_reflected_response(ss, s)?)));
        match pair {
            Ok((g, ginv)) => {
                let r = (&(&g * &ginv) - &id).frobenius_norm();
                evaluated.push((s, r));
            }
            Err(e @ Error::PoleEvaluation { .. }) => skipped.push((s, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let max_residual = evaluated.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(InverseIdentityReport {
        pass: !evaluated.is_empty() && max_residual <= tol,
        tol,
        max_residual,
        evaluated,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{build_state_space, examples};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn gain_system_scalar_check() {
        let ss = build_state_space(&examples::gain_system()).unwrap();
        let inv = flat_reflected_response(&ss, c(2.0, 0.0)).unwrap();
        assert!((&inv - &CMatrix::identity(2).scale_real(0.6)).max_abs() < 1e-14);
        let r = verify_inverse_identity(&ss, &[c(2.0, 0.0), c(0.3, 1.0)], 1e-12).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn dpa_on_imaginary_axis() {
        let ss = build_state_space(&examples::dpa(2.0, 1.0)).unwrap();
        let r = verify_inverse_identity(&ss, &[c(0.0, 1.0)], 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn pole_samples_are_skipped() {
        let ss = build_state_space(&examples::gain_system()).unwrap();
        let r = verify_inverse_identity(&ss, &[c(0.5, 0.0), c(1.0, 0.0)], 1e-12).unwrap();
        assert_eq!(r.skipped.len(), 1);
        assert!(r.pass);
    }

    #[test]
    fn closed_system_is_trivially_inverted() {
        let ss = build_state_space(&examples::lossless_mode(1.5)).unwrap();
        let r = verify_inverse_identity(&ss, &[c(0.2, 0.3)], 1e-14).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_residual, 0.0);
    }
}
