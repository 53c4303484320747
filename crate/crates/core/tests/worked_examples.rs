use lqs_core::exact::{smith_mcmillan, GaussianRational as Q, Poly, RationalFn};
use lqs_core::feedback::{QuadPlantParams, Quadrature};
use lqs_core::invertibility::{classify_left_invertibility, inversion_witness, Verdict};
use lqs_core::kalman::{check_hidden_mode_assumption, invariant_zeros_from_kalman, kalman_decompose};
use lqs_core::numeric::{eigenvalues, match_multisets, SpectrumReport};
use lqs_core::system::{build_exact_state_space, build_state_space, examples, to_quadrature};
use lqs_core::zeros::{
    invariant_zeros_flat, invariant_zeros_pencil, poles_numeric, smf_spectra, transmission_zeros_numeric,
};
use lqs_core::{Complex, Error};

fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

fn same(s: &SpectrumReport, expect: &[Complex]) -> bool {
    match_multisets(&s.multiset(), expect, 1e-9).matched
}

fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFn {
    let p = |v: &[(i64, i64)]| Poly::new(v.iter().map(|&(a, b)| Q::from_ratio(a, b)).collect());
    RationalFn::new(p(num), p(den))
}

#[test]
fn two_mode_classical_system() {
    let ss = examples::two_mode_classical();
    assert!(same(&invariant_zeros_pencil(&ss, 1e-9).unwrap(), &[c(0.0), c(2.0)]));
    assert!(same(&transmission_zeros_numeric(&ss, 1e-9).unwrap(), &[c(0.0)]));
    assert!(same(&poles_numeric(&ss, 1e-9).unwrap(), &[c(1.0)]));
    assert!(match_multisets(&eigenvalues(&ss.a).unwrap(), &[c(1.0), c(2.0)], 1e-12).matched);
    let g = examples::two_mode_classical_exact().transfer_matrix().unwrap();
    let smf = smith_mcmillan(&g).unwrap();
    assert_eq!(
        smf.entries(),
        vec![rf(&[(1, 1)], &[(-1, 1), (1, 1)]), rf(&[(0, 1), (1, 1)], &[(1, 1)])]
    );
}

#[test]
fn hidden_mode_quadrature_system() {
    let ss = examples::hidden_mode_quadrature();
    let k = kalman_decompose(&ss, 1e-9).unwrap();
    assert!(same(&k.eig_c_obar, &[c(-1.0)]));
    assert!(same(&k.eig_cbar_o, &[c(1.0)]));
    assert!(!check_hidden_mode_assumption(&k, 1e-8).holds);
    assert!(same(&invariant_zeros_flat(&ss, 1e-9).unwrap(), &[c(-1.0), c(1.0)]));
    assert!(matches!(
        invariant_zeros_from_kalman(&ss, 1e-9, 1e-8),
        Err(Error::AssumptionViolated { .. })
    ));
    assert!(matches!(
        classify_left_invertibility(&ss, 1e-9, 1e-8),
        Err(Error::AssumptionViolated { .. })
    ));
    // G ≡ I: no poles and no transmission zeros at all
    let s = smf_spectra(&examples::hidden_mode_quadrature_exact(), 1e-9).unwrap();
    assert!(s.zeros.is_empty() && s.poles.is_empty());
}

#[test]
fn dpa_quadrature_transfer_matches_closed_form() {
    let dpa = build_exact_state_space(&examples::dpa_exact(Q::from_int(2), Q::from_int(1))).unwrap();
    let g = dpa.to_quadrature().unwrap().transfer_matrix().unwrap();
    // (s - ε/2 - κ/2)/(s - ε/2 + κ/2) and (s + ε/2 - κ/2)/(s + ε/2 + κ/2)
    let gq = rf(&[(-3, 2), (1, 1)], &[(1, 2), (1, 1)]);
    let gp = rf(&[(-1, 2), (1, 1)], &[(3, 2), (1, 1)]);
    assert_eq!(g.get(0, 0), &gq);
    assert_eq!(g.get(1, 1), &gp);
    assert!(g.get(0, 1).is_zero() && g.get(1, 0).is_zero());
    // same pair from the single-mode quadrature model
    let plant = QuadPlantParams::from_coupling(Q::from_parts(0, 1, 1, 2), Q::from_int(2)).unwrap();
    assert_eq!(plant.transfer(Quadrature::Q), gq);
    assert_eq!(plant.transfer(Quadrature::P), gp);
}

#[test]
fn dpa_zero_and_pole_reach_origin_at_threshold() {
    let mut last = f64::INFINITY;
    for eps in [1.0, 1.5, 1.9, 1.99, 2.0] {
        let ss = to_quadrature(&build_state_space(&examples::dpa(2.0, eps)).unwrap()).unwrap();
        let p = poles_numeric(&ss, 1e-9).unwrap().multiset();
        let z = transmission_zeros_numeric(&ss, 1e-9).unwrap().multiset();
        let closest = p.iter().chain(&z).map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        assert!(closest <= last);
        last = closest;
    }
    assert!(last < 1e-10);
}

#[test]
fn invertibility_examples() {
    let gain = build_state_space(&examples::gain_system()).unwrap();
    assert_eq!(
        classify_left_invertibility(&gain, 1e-9, 1e-8).unwrap().verdict,
        Verdict::Invertible
    );
    let cav = build_state_space(&examples::passive_cavity(0.0, 1.0)).unwrap();
    assert_eq!(
        classify_left_invertibility(&cav, 1e-9, 1e-8).unwrap().verdict,
        Verdict::NotInvertible
    );
    // scalar oracle: G(s) = (s + 1/2)/(s - 1/2)
    let g = |s: Complex| (s + 0.5) / (s - 0.5);
    let w = inversion_witness(&gain, &[c(1.0)], 1e-12).unwrap();
    let s = c(1.0);
    let inv = g(-s.conj()).conj();
    assert!((inv - c(1.0 / 3.0)).norm() < 1e-15);
    assert!((g(s) * inv - c(1.0)).norm() < 1e-15);
    assert!(w.identity.pass);
}
