use crate::error::Result;
use crate::numeric::{CMatrix, DoubledUp};
use crate::system::{Representation, StateSpace};

/// Frobenius residuals of the physical realizability identities.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizabilityReport {
    pub pass: bool,
    pub tol: f64,
    /// `(identity, residual)` in a fixed order.
    pub residuals: Vec<(&'static str, f64)>,
}

impl RealizabilityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.0 == name).map(|r| r.1)
    }
}

/// Annihilation coordinates: `A + A♭ + C♭C`, `B + C♭D`, `D†D - I`, doubled-up
/// pattern of all four blocks. Quadrature coordinates: `A + A♯ + BB♯`,
/// `B + C♯D`, `DᵀD - I`, imaginary parts.
pub fn check_physical_realizability(ss: &StateSpace, tol: f64) -> Result<RealizabilityReport> {
    let residuals = if ss.n_states() % 2 != 0 || ss.n_inputs() % 2 != 0 || ss.n_outputs() % 2 != 0 {
        // no even split, so no quantum structure at all
        vec![("even_dimensions", 1.0)]
    } else {
        let id = CMatrix::identity(ss.d.cols());
        match ss.representation {
            Representation::Annihilation => {
                let cf = ss.adjoint(&ss.c)?;
                let a_id = &(&ss.a + &ss.adjoint(&ss.a)?) + &(&cf * &ss.c);
                let b_id = &ss.b + &(&cf * &ss.d);
                let d_id = &(&ss.d.adjoint() * &ss.d) - &id;
                let structure = [&ss.a, &ss.b, &ss.c, &ss.d]
                    .iter()
                    .map(|m| DoubledUp::structure_residual(m))
                    .collect::<Result<Vec<_>>>()?
                    .iter()
                    .map(|x| x * x)
                    .sum::<f64>()
                    .sqrt();
                vec![
                    ("A+A_flat+C_flat*C", a_id.frobenius_norm()),
                    ("B+C_flat*D", b_id.frobenius_norm()),
                    ("D_adj*D-I", d_id.frobenius_norm()),
                    ("doubled_up_structure", structure),
                ]
            }
            Representation::Quadrature => {
                let bs = ss.adjoint(&ss.b)?;
                let a_id = &(&ss.a + &ss.adjoint(&ss.a)?) + &(&ss.b * &bs);
                let b_id = &ss.b + &(&ss.adjoint(&ss.c)? * &ss.d);
                let d_id = &(&ss.d.transpose() * &ss.d) - &id;
                let imag = [&ss.a, &ss.b, &ss.c, &ss.d]
                    .iter()
                    .map(|m| {
                        let im = &(*m).clone() - &m.real_part();
                        im.frobenius_norm().powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                vec![
                    ("A+A_sharp+B*B_sharp", a_id.frobenius_norm()),
                    ("B+C_sharp*D", b_id.frobenius_norm()),
                    ("D_T*D-I", d_id.frobenius_norm()),
                    ("imaginary_part", imag),
                ]
            }
        }
    };
    Ok(RealizabilityReport {
        pass: residuals.iter().all(|r| r.1 <= tol),
        tol,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{build_state_space, examples, to_quadrature};

    #[test]
    fn constructed_systems_pass() {
        for p in [
            examples::passive_cavity(1.0, 2.0),
            examples::gain_system(),
            examples::dpa(2.0, 1.0),
        ] {
            let ss = build_state_space(&p).unwrap();
            let r = check_physical_realizability(&ss, 1e-12).unwrap();
            assert!(r.pass, "{r:?}");
            let q = to_quadrature(&ss).unwrap();
            assert!(check_physical_realizability(&q, 1e-12).unwrap().pass);
        }
    }

    #[test]
    fn quadrature_example_passes() {
        let r = check_physical_realizability(&examples::hidden_mode_quadrature(), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn zero_feedthrough_fails() {
        let r = check_physical_realizability(&examples::first_order_classical(), 1e-9).unwrap();
        assert!(!r.pass);
        // D†D - I = -I₂
        assert!((r.residual("D_adj*D-I").unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }
}
