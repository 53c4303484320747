use lqs_core::exact::{smith_mcmillan, GaussianRational as Q, RationalFn};
use lqs_core::feedback::{
    check_quadrature_duality, solve_alpha_for_squeezing, synthesize_matched_controller, Beamsplitter, FeedbackNetwork,
    QuadPlantParams, Quadrature, SynthesisSign,
};
use lqs_core::invertibility::classify_left_invertibility;
use lqs_core::kalman::invariant_zeros_from_kalman;
use lqs_core::numeric::{eigenvalues, flat_adjoint, match_multisets, CMatrix};
use lqs_core::system::{
    build_exact_state_space, build_state_space, check_physical_realizability, random_exact_params,
    random_lossless_block, random_params, to_quadrature, verify_inverse_identity, StateSpace, SystemKind,
};
use lqs_core::zeros::{
    invariant_zeros_flat, invariant_zeros_pencil, poles_numeric, transmission_zeros_numeric,
    verify_determinant_identity_exact, verify_pole_zero_mirror,
};
use lqs_core::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kind_from(k: u8) -> SystemKind {
    match k % 3 {
        0 => SystemKind::General,
        1 => SystemKind::Passive,
        _ => SystemKind::Amplifier,
    }
}

fn random_system(seed: u64, kind: SystemKind) -> StateSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=2);
    build_state_space(&random_params(&mut rng, n, m, kind)).unwrap()
}

/// Random unitary from a QR of a Gaussian matrix, via Gram–Schmidt.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<Complex> = (0..n)
            .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        for u in &cols {
            let dot: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

fn sample_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<Complex> {
    (0..k)
        .map(|_| Complex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flat_adjoint_is_involutive(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = CMatrix::from_fn(2 * k, 2 * k, |_, _| Complex::new(rng.random(), rng.random()));
        let back = flat_adjoint(&flat_adjoint(&x).unwrap()).unwrap();
        prop_assert!((&back - &x).max_abs() < 1e-15);
    }

    #[test]
    fn generated_systems_are_realizable(seed in any::<u64>(), kind in any::<u8>()) {
        let ss = random_system(seed, kind_from(kind));
        prop_assert!(check_physical_realizability(&ss, 1e-9).unwrap().pass);
        let quad = to_quadrature(&ss).unwrap();
        prop_assert!(check_physical_realizability(&quad, 1e-9).unwrap().pass);
    }

    #[test]
    fn pencil_and_flat_zeros_agree(seed in any::<u64>(), kind in any::<u8>()) {
        let ss = random_system(seed, kind_from(kind));
        let a = invariant_zeros_pencil(&ss, 1e-9).unwrap();
        let b = invariant_zeros_flat(&ss, 1e-9).unwrap();
        prop_assert!(match_multisets(&a.multiset(), &b.multiset(), 1e-8).matched);
    }

    #[test]
    fn trace_of_invariant_zeros(seed in any::<u64>()) {
        // zeros are eig(-A♭), so their sum is -tr(A)*
        let ss = random_system(seed, SystemKind::General);
        let z: Complex = invariant_zeros_pencil(&ss, 1e-9).unwrap().multiset().iter().sum();
        prop_assert!((z + ss.a.trace().conj()).norm() < 1e-8 * ss.a.frobenius_norm().max(1.0));
    }

    #[test]
    fn transmission_zeros_mirror_poles(seed in any::<u64>(), kind in any::<u8>()) {
        let ss = random_system(seed, kind_from(kind));
        prop_assert!(verify_pole_zero_mirror(&ss, 1e-9, 1e-7).unwrap().pass);
    }

    #[test]
    fn inverse_identity_holds(seed in any::<u64>()) {
        let ss = random_system(seed, SystemKind::General);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let r = verify_inverse_identity(&ss, &sample_points(&mut rng, 6), 1e-9).unwrap();
        prop_assert!(r.pass, "{:?}", r.max_residual);
    }

    #[test]
    fn zeros_survive_flat_unitary_similarity(seed in any::<u64>()) {
        let ss = random_system(seed, SystemKind::General);
        let n = ss.n_states() / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let u = random_unitary(&mut rng, n);
        let t = CMatrix::block_diag(&[&u, &u.conj()]);
        let moved = ss.similarity(&t).unwrap();
        prop_assert!(check_physical_realizability(&moved, 1e-9).unwrap().pass);
        let a = invariant_zeros_flat(&ss, 1e-9).unwrap();
        let b = invariant_zeros_flat(&moved, 1e-9).unwrap();
        prop_assert!(match_multisets(&a.multiset(), &b.multiset(), 1e-8).matched);
    }

    #[test]
    fn classification_survives_similarity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&mut rng, 2, 1, SystemKind::Amplifier);
        let ss = build_state_space(&p).unwrap();
        let u = random_unitary(&mut rng, 2);
        let moved = ss.similarity(&CMatrix::block_diag(&[&u, &u.conj()])).unwrap();
        let a = classify_left_invertibility(&to_quadrature(&ss).unwrap(), 1e-9, 1e-8);
        let b = classify_left_invertibility(&to_quadrature(&moved).unwrap(), 1e-9, 1e-8);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.verdict, b.verdict);
                prop_assert_eq!(a.verdict, a.star_verdict);
                if a.as_left_invertible() == Some(true) {
                    let tz = transmission_zeros_numeric(&ss, 1e-9).unwrap();
                    prop_assert!(tz.multiset().iter().all(|z| z.re < 0.0));
                }
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "verdicts diverge: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn theorem_route_on_hidden_mode_corpus(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=2);
        let k = rng.random_range(1..=2);
        let p = random_params(&mut rng, n, 1, SystemKind::Passive);
        let omega = random_lossless_block(&mut rng, k);
        let ss = build_state_space(&p.with_lossless_modes(&omega).unwrap()).unwrap();
        let a = invariant_zeros_from_kalman(&ss, 1e-9, 1e-8).unwrap();
        let b = invariant_zeros_flat(&ss, 1e-9).unwrap();
        prop_assert!(match_multisets(&a.multiset(), &b.multiset(), 1e-8).matched);
    }

    #[test]
    fn poles_are_eigenvalues_of_a_when_minimal(seed in any::<u64>()) {
        let ss = random_system(seed, SystemKind::General);
        let p = poles_numeric(&ss, 1e-9).unwrap();
        if p.len() == ss.n_states() {
            let e = eigenvalues(&ss.a).unwrap();
            prop_assert!(match_multisets(&p.multiset(), &e, 1e-8).matched);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn determinant_identity_is_exact(seed in any::<u64>(), kind in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=2);
        let m = rng.random_range(1..=2);
        let p = random_exact_params(&mut rng, n, m, kind_from(kind));
        let ss = build_exact_state_space(&p).unwrap();
        prop_assert!(verify_determinant_identity_exact(&ss).unwrap().holds);
    }

    #[test]
    fn smith_mcmillan_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_exact_params(&mut rng, 1, 1, SystemKind::General);
        let g = build_exact_state_space(&p).unwrap().transfer_matrix().unwrap();
        let smf = smith_mcmillan(&g).unwrap();
        prop_assert_eq!(smf.apply_to(&g), smf.diagonal());
        prop_assert!(smf.check_divisibility());
    }

    #[test]
    fn exact_and_float_responses_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_exact_params(&mut rng, 1, 1, SystemKind::General);
        let exact = build_exact_state_space(&p).unwrap();
        let float = build_state_space(&p.to_float().unwrap()).unwrap();
        let g = exact.transfer_matrix().unwrap();
        let s = Complex::new(0.37, 1.91);
        if let Ok(gf) = float.frequency_response(s) {
            for i in 0..g.rows() {
                for j in 0..g.cols() {
                    prop_assert!((g.get(i, j).eval_complex(s) - gf[(i, j)]).norm() < 1e-9);
                }
            }
        }
    }
}

fn random_quad_plant(rng: &mut ChaCha8Rng) -> QuadPlantParams {
    let w = Q::from_parts(0, 1, rng.random_range(-6..=6), rng.random_range(1..=4));
    let c = Q::from_ratio(rng.random_range(-6..=6), rng.random_range(1..=3));
    QuadPlantParams::from_coupling(w, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn closed_loop_keeps_quadrature_duality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = FeedbackNetwork::new(
            random_quad_plant(&mut rng),
            random_quad_plant(&mut rng),
            Beamsplitter::new(Q::from_ratio(rng.random_range(-8..=8), 8)).unwrap(),
        );
        if let Ok((tq, tp)) = net.closed_loop() {
            prop_assert!(check_quadrature_duality(&tq, &tp));
        }
    }

    #[test]
    fn residual_vanishes_iff_closed_loop_zero(seed in any::<u64>(), quad in any::<bool>()) {
        let quad = if quad { Quadrature::Q } else { Quadrature::P };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plant = random_quad_plant(&mut rng);
        let ctrl = random_quad_plant(&mut rng);
        let sol = solve_alpha_for_squeezing(&plant, &ctrl, quad);
        // the residual is the condition multiplied through by both
        // denominators at the origin, so it says nothing when one vanishes
        let degenerate = sol.residual_unsolvable || sol.from_closed_loop.is_none()
            || plant.is_identity() || ctrl.is_identity() || sol.disconnected;
        if let (Some(alpha), false) = (sol.alpha.clone(), degenerate) {
            let net = FeedbackNetwork::new(plant.clone(), ctrl.clone(), Beamsplitter::new(alpha.clone()).unwrap());
            if let Ok(t) = net.closed_loop_quadrature(quad) {
                prop_assert_eq!(net.squeezing_residual(quad).is_zero(), t.eval(&Q::zero()) == Some(Q::zero()));
                let v = t.eval_complex(Complex::new(0.0, 1e-6)).norm();
                if t.eval(&Q::zero()) == Some(Q::zero()) {
                    prop_assert!(v < 1e-4);
                }
            }
            // a perturbed beamsplitter breaks both sides together
            let shifted = &alpha * &Q::from_ratio(1, 2);
            if shifted != alpha {
                let net = FeedbackNetwork::new(plant, ctrl, Beamsplitter::new(shifted).unwrap());
                if let Ok(t) = net.closed_loop_quadrature(quad) {
                    prop_assert_eq!(net.squeezing_residual(quad).is_zero(), t.eval(&Q::zero()) == Some(Q::zero()));
                }
            }
        }
    }

    #[test]
    fn synthesized_controller_zeroes_residual(seed in any::<u64>(), plus in any::<bool>()) {
        let sign = if plus { SynthesisSign::Plus } else { SynthesisSign::Minus };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plant = random_quad_plant(&mut rng);
        let alpha = Q::from_ratio(rng.random_range(-7..=7), 8);
        if let Ok(k) = synthesize_matched_controller(&plant, &alpha, sign) {
            let net = FeedbackNetwork::new(plant, k, Beamsplitter::new(alpha).unwrap());
            prop_assert!(net.squeezing_residual(sign.quadrature()).is_zero());
        }
    }

    #[test]
    fn sensitivity_matches_finite_difference(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = FeedbackNetwork::new(
            random_quad_plant(&mut rng),
            random_quad_plant(&mut rng),
            Beamsplitter::new(Q::from_ratio(rng.random_range(-7..=7), 8)).unwrap(),
        );
        let s = Complex::new(0.0, rng.random_range(0.05..5.0));
        let alpha = net.bs.alpha().to_complex();
        for quad in [Quadrature::Q, Quadrature::P] {
            let Ok(sens) = net.sensitivity_quadrature(quad, s) else { continue };
            let g = net.plant.transfer(quad).eval_complex(s);
            let k = net.controller.transfer(quad).eval_complex(s);
            let t = |g: Complex| (alpha + g * k) / (1.0 + alpha * g * k);
            let h = 1e-6;
            let dt = (t(g * (1.0 + h)) - t(g * (1.0 - h))) / (2.0 * h);
            let fd = dt / t(g);
            if t(g).norm() > 1e-6 && sens.norm() < 1e6 {
                prop_assert!((fd - sens).norm() <= 1e-4 * sens.norm().max(1.0), "{fd} vs {sens}");
            }
        }
    }
}

#[test]
fn identity_transfer_is_one() {
    let (gq, gp) = QuadPlantParams::identity().quadrature_transfer();
    assert_eq!(gq, RationalFn::one());
    assert_eq!(gp, RationalFn::one());
}
