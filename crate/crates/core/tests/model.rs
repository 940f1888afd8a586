mod common;

use common::*;
use lioup::angular::HalfInteger;
use lioup::linalg::{eigvals, expm, ComplexMatrix};
use lioup::model::*;
use lioup::spectra::multiset_distance;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: f64 = DEFAULT_GAMMA_SP;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn reduced_and_optical_frequencies_stay_linked() {
    let p = ModelParams::from_reduced(30.0, 10.0, 0.0, GAMMA);
    assert!((p.omega_r * p.omega_r / GAMMA - 30.0).abs() < 1e-9);
    p.validate().unwrap();
    let p2 = p.with_param("omega", 20.0).unwrap();
    assert!((p2.omega_r * p2.omega_r / GAMMA - 20.0).abs() < 1e-9);
    let p3 = p.with_param("omega_r", 1.0e4).unwrap();
    assert!((p3.omega - 1.0e8 / GAMMA).abs() < 1e-12);
    let p4 = ModelParams::from_optical(1.0e4, 0.0, 0.0, GAMMA);
    assert_eq!(p4.omega, p3.omega);
    assert!(matches!(
        p.with_param("bogus", 1.0),
        Err(ModelError::UnknownParam(_))
    ));
}

#[test]
fn validation_rejects_out_of_range() {
    let p = ModelParams::tuned(30.0, 10.0);
    assert!(p.with_q(1.5).validate().is_err());
    assert!(p.with_gamma_g(-1.0).validate().is_err());
    assert!(p.with_param("j", -1.0).unwrap().validate().is_err());
    let mut broken = p;
    broken.omega = 31.0;
    assert!(matches!(
        broken.validate(),
        Err(ModelError::InvalidParam { name: "omega", .. })
    ));
    let mut zero_rate = p;
    zero_rate.gamma_sp = 0.0;
    assert!(zero_rate.validate().is_err());
}

#[test]
fn params_serde_round_trip_and_rejects_unknown_keys() {
    let p = ModelParams::tuned(30.0, 10.0).with_q(0.25);
    let text = serde_json::to_string(&p).unwrap();
    let back: ModelParams<f64> = serde_json::from_str(&text).unwrap();
    assert_eq!(p, back);
    let bad = text.replace("\"q\"", "\"qq\"");
    assert!(serde_json::from_str::<ModelParams<f64>>(&bad).is_err());
}

#[test]
fn lab_frame_decoupled_limit() {
    let mut p = ModelParams::from_optical(0.0, 0.0, 0.0, GAMMA);
    p.omega_r = 0.0;
    let h = build_full4_time_dep(&p, 3.0, 50.0, 40.0)(0.0);
    let want = ComplexMatrix::from_real_rows(&[
        &[3.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, -3.0, 0.0],
        &[0.0, 0.0, 0.0, 40.0],
    ]);
    assert_eq!(h, want);
    let p = ModelParams::from_optical(7.0, 2.0, 0.0, GAMMA);
    let h = build_full4_time_dep(&p, 3.0, 50.0, 40.0)(0.0);
    assert_eq!(h[(1, 3)], c(-7.0, 0.0));
    assert_eq!(h[(0, 1)], c(2.0, 0.0));
}

#[test]
fn rotating_frame_average_matches_rwa() {
    let (j, omega_r, delta, big_delta) = (2.0, 3.0, 0.5, 0.7);
    let mut p = ModelParams::from_optical(omega_r, j, delta, GAMMA);
    p.delta_opt = big_delta;
    let omega_larmor = 1.0e5;
    let omega_0 = 1.7e5;
    let omega_laser = omega_0 + big_delta;
    let omega_rf = omega_larmor + delta;
    let h_t = build_full4_time_dep(&p, omega_larmor, omega_laser, omega_0);
    let g = build_grwa_generator(omega_rf, omega_laser);

    let window = 0.0123456;
    let steps = 400_000;
    let dt = window / steps as f64;
    let mut avg = ComplexMatrix::<f64>::zeros(4, 4);
    for k in 0..steps {
        let t = (k as f64 + 0.5) * dt;
        let u = ComplexMatrix::from_diag(&[
            c(0.0, -omega_rf * t).exp(),
            c(1.0, 0.0),
            c(0.0, omega_rf * t).exp(),
            c(0.0, -omega_laser * t).exp(),
        ]);
        let rotated = &(&u.adjoint() * &h_t(t)) * &u;
        avg += &(&rotated - &g).scale_real(1.0 / steps as f64);
    }
    let mut halved = p.with_param("omega_r", omega_r / 2.0).unwrap();
    halved.j = j / 2.0;
    let rwa = build_full4_rwa(&halved);
    let err = avg.max_diff(rwa.hamiltonian());
    assert!(
        err <= 1e-3 * rwa.hamiltonian().max_abs(),
        "average deviates by {err}"
    );
}

#[test]
fn frame_generator() {
    let g = build_grwa_generator(1.0, 5.0);
    assert_eq!(
        g,
        ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(5.0, 0.0)])
    );
    assert_eq!(build_grwa_generator(0.0, 0.0), ComplexMatrix::zeros(4, 4));
    let (w_rf, w, t) = (1.3, 4.1, 0.77);
    let u = expm(&build_grwa_generator(w_rf, w).scale(c(0.0, -t))).unwrap();
    let want = ComplexMatrix::from_diag(&[
        c(0.0, -w_rf * t).exp(),
        c(1.0, 0.0),
        c(0.0, w_rf * t).exp(),
        c(0.0, -w * t).exp(),
    ]);
    assert!(u.max_diff(&want) < 1e-13);
}

#[test]
fn rwa_hamiltonian_layout() {
    let p = ModelParams::from_optical(4.0, 0.0, 0.0, GAMMA);
    let sys = build_full4_rwa(&p);
    let mut want = ComplexMatrix::zeros(4, 4);
    want[(1, 3)] = c(-4.0, 0.0);
    want[(3, 1)] = c(-4.0, 0.0);
    assert_eq!(sys.hamiltonian(), &want);

    let mut p = ModelParams::from_optical(4.0, 1.5, 0.3, GAMMA);
    p.delta_opt = 0.2;
    let h = build_full4_rwa(&p).hamiltonian().clone();
    let want = ComplexMatrix::from_real_rows(&[
        &[-0.3, 1.5, 0.0, 0.0],
        &[1.5, 0.0, 1.5, -4.0],
        &[0.0, 1.5, 0.3, 0.0],
        &[0.0, -4.0, 0.0, -0.2],
    ]);
    assert!(h.max_diff(&want) < 1e-14);
}

#[test]
fn rwa_jumps_sum_to_excited_decay() {
    let p = ModelParams::tuned(30.0, 10.0);
    let sys = build_full4_rwa(&p);
    assert_eq!(sys.jumps().len(), 3);
    let g = sys.relaxation();
    let want = ComplexMatrix::unit(4, 3, 3).scale_real(GAMMA);
    assert!(g.max_diff(&want) < 1e-12 * GAMMA);
    // each operator is i√(Γ/3)|1,−ε⟩⟨00|
    let amp = (GAMMA / 3.0).sqrt();
    for (k, (_, l)) in sys.jumps().iter().enumerate() {
        assert!(l.max_diff(&ComplexMatrix::unit(4, k, 3).scale(c(0.0, amp))) < 1e-9);
    }
    let with_ground = build_full4_rwa(&p.with_gamma_g(0.3));
    assert_eq!(with_ground.jumps().len(), 12);
}

#[test]
fn generic_jumps_reproduce_hand_written_up_to_phase() {
    let gamma = 2.5;
    let p = ModelParams::from_reduced(1.0, 0.0, 0.0, gamma);
    let explicit: Vec<_> = build_full4_rwa(&p).jump_ops().cloned().collect();
    for phase in [JumpPhase::Imaginary, JumpPhase::DeltaF] {
        let generic = build_spont_jumps::<f64>(
            HalfInteger::integer(1),
            HalfInteger::integer(0),
            gamma,
            phase,
        )
        .unwrap();
        for g in &generic {
            // find the explicit operator with the same support and check |ratio| = 1
            let (r, col) = (0..4)
                .flat_map(|r| (0..4).map(move |c| (r, c)))
                .find(|&(r, c)| g[(r, c)].norm() > 0.0)
                .unwrap();
            let e = explicit.iter().find(|e| e[(r, col)].norm() > 0.0).unwrap();
            let ratio = g[(r, col)] / e[(r, col)];
            assert!((ratio.norm() - 1.0).abs() < 1e-14);
            assert!(g.max_diff(&e.scale(ratio)) < 1e-14);
        }
        let sys = LindbladSystem::new(
            ComplexMatrix::zeros(4, 4),
            generic
                .into_iter()
                .enumerate()
                .map(|(k, l)| (k.to_string(), l))
                .collect(),
            true,
        )
        .unwrap();
        let reference = build_full4_rwa(&p).with_jumps(vec![]).unwrap();
        let mut r = rng(3);
        for _ in 0..5 {
            let rho = random_density(&mut r, 4);
            assert!(
                sys.repopulation(&rho)
                    .max_diff(&reference.repopulation(&rho))
                    < 1e-14
            );
        }
        assert!(sys.relaxation().max_diff(&reference.relaxation()) < 1e-14);
    }
}

#[test]
fn spontaneous_sum_rule_for_allowed_transitions() {
    let gamma = 1.7;
    for tf in 0..=4 {
        for tbig in 0..=4 {
            let (f, big_f) = (HalfInteger::from_twice(tf), HalfInteger::from_twice(tbig));
            let allowed = (tf - tbig).abs() <= 2 && (tf - tbig) % 2 == 0 && !(tf == 0 && tbig == 0);
            let res = build_spont_jumps::<f64>(f, big_f, gamma, JumpPhase::DeltaF);
            if !allowed {
                assert!(
                    matches!(res, Err(ModelError::TransitionForbidden { .. })),
                    "{f} -> {big_f}"
                );
                continue;
            }
            let ls = res.unwrap();
            let ng = f.multiplicity();
            let n = ng + big_f.multiplicity();
            let mut sum = ComplexMatrix::zeros(n, n);
            for l in &ls {
                sum += &(&l.adjoint() * l);
            }
            let mut want = ComplexMatrix::zeros(n, n);
            for k in ng..n {
                want[(k, k)] = c(gamma / big_f.multiplicity() as f64, 0.0);
            }
            assert!(sum.max_diff(&want) < 1e-14, "{f} -> {big_f}");
        }
    }
}

#[test]
fn jump_entries_obey_projection_rule() {
    let ls = build_spont_jumps::<f64>(
        HalfInteger::integer(1),
        HalfInteger::integer(2),
        1.0,
        JumpPhase::Imaginary,
    )
    .unwrap();
    for (k, eps) in [-1, 0, 1].into_iter().enumerate() {
        for a in 0..3 {
            for b in 0..5 {
                let m = 1 - a as i32;
                let big_m = 2 - b as i32;
                let nonzero = ls[k][(a, 3 + b)].norm() > 0.0;
                assert_eq!(nonzero, -m + eps + big_m == 0, "eps {eps} m {m} M {big_m}");
            }
        }
        // nothing outside the ground-row / excited-column block
        for r in 0..8 {
            for col in 0..8 {
                if !(r < 3 && col >= 3) {
                    assert_eq!(ls[k][(r, col)], c(0.0, 0.0));
                }
            }
        }
    }
}

#[test]
fn effective_hamiltonian_at_resonance() {
    for &(omega, j) in &[(30.0, 10.0), (20.0, 35.0)] {
        let p = ModelParams::tuned(omega, j);
        let red = reduce_effective(&build_full4_rwa(&p), &p).unwrap();
        let mut want =
            ComplexMatrix::from_real_rows(&[&[0.0, j, 0.0], &[j, 0.0, j], &[0.0, j, 0.0]]);
        want[(1, 1)] = c(0.0, -2.0 * omega);
        assert!(red.h_nh.max_diff(&want) < 1e-9 * omega, "{:?}", red.h_nh);
        let mag = 2.0 * p.omega_r / (3.0 * GAMMA).sqrt();
        assert_eq!(red.l_eff.len(), 3);
        for (_, l) in &red.l_eff {
            let nz: Vec<_> = l.data().iter().filter(|z| z.norm() > 1e-12 * mag).collect();
            assert_eq!(nz.len(), 1);
            assert!((nz[0].norm() - mag).abs() < 1e-12 * mag);
        }
        assert!(red.ground_jumps.is_empty());
    }
}

#[test]
fn effective_detuned_light_shift_and_decay() {
    let gamma = 50.0;
    let (omega_r, big_delta) = (3.0, 7.0);
    let mut p = ModelParams::from_optical(omega_r, 1.2, 0.4, gamma);
    p.delta_opt = big_delta;
    let red = reduce_effective(&build_full4_rwa(&p), &p).unwrap();
    let den = gamma * gamma + 4.0 * big_delta * big_delta;
    let shift = 4.0 * big_delta * omega_r * omega_r / den;
    let mut want_eff =
        ComplexMatrix::from_real_rows(&[&[-0.4, 1.2, 0.0], &[1.2, 0.0, 1.2], &[0.0, 1.2, 0.4]]);
    want_eff[(1, 1)] = c(shift, 0.0);
    assert!(red.h_eff.max_diff(&want_eff) < 1e-13);
    let mut sum = ComplexMatrix::zeros(3, 3);
    for (_, l) in &red.l_eff {
        sum += &(&l.adjoint() * l);
    }
    let rate = 4.0 * omega_r * omega_r * gamma / den;
    assert!(sum.max_diff(&ComplexMatrix::unit(3, 1, 1).scale_real(rate)) < 1e-14);
    let centre = c(0.0, -2.0 * omega_r * omega_r) / c(gamma, -2.0 * big_delta);
    assert!((red.h_nh[(1, 1)] - centre).norm() < 1e-14);
    // l_eff amplitude 2√Γ Ω_R / (√3 (Γ − 2iΔ))
    let amp = c(2.0 * gamma.sqrt() * omega_r / 3f64.sqrt(), 0.0) / c(gamma, -2.0 * big_delta);
    for (_, l) in &red.l_eff {
        let z = l.data().iter().copied().find(|z| z.norm() > 1e-14).unwrap();
        assert!((z.norm() - amp.norm()).abs() < 1e-14);
    }
}

#[test]
fn singular_excited_manifold_is_reported() {
    let mut p = ModelParams::from_optical(1.0, 1.0, 0.0, 1.0);
    p.gamma_sp = 0.0;
    let sys = build_full4_rwa(&p);
    assert!(matches!(
        reduce_effective(&sys, &p),
        Err(ModelError::SingularExcited)
    ));
}

#[test]
fn ground_relaxation_forms() {
    let gamma = 0.9;
    let ls = build_ground_relaxation(gamma);
    assert_eq!(ls.len(), 9);
    let sys = LindbladSystem::new(
        ComplexMatrix::zeros(3, 3),
        ls.into_iter()
            .enumerate()
            .map(|(k, l)| (k.to_string(), l))
            .collect(),
        true,
    )
    .unwrap();
    let (g, lambda) = gamma_lambda_forms(&sys);
    assert!(g.max_diff(&ComplexMatrix::identity(3).scale_real(gamma)) < 1e-15);
    let mut r = rng(11);
    for _ in 0..5 {
        let rho = random_matrix(&mut r, 3, 1.0);
        let want = ComplexMatrix::identity(3).scale(rho.trace() * gamma / 3.0);
        assert!(lambda(&rho).max_diff(&want) < 1e-15);
    }
}

#[test]
fn relaxed_effective_hamiltonian() {
    let (omega, j, gamma_g) = (30.0, 12.0, 0.8);
    let p = ModelParams::tuned(omega, j).with_gamma_g(gamma_g);
    let sys = build_eff3(&p).unwrap();
    let h = sys.non_hermitian_hamiltonian();
    let mut want = ComplexMatrix::from_real_rows(&[&[0.0, j, 0.0], &[j, 0.0, j], &[0.0, j, 0.0]]);
    want[(0, 0)] = c(0.0, -gamma_g / 2.0);
    want[(2, 2)] = c(0.0, -gamma_g / 2.0);
    want[(1, 1)] = c(0.0, -(gamma_g + 4.0 * omega) / 2.0);
    assert!(h.max_diff(&want) < 1e-9 * omega);

    let bare = build_eff3(&ModelParams::tuned(omega, j))
        .unwrap()
        .non_hermitian_hamiltonian();
    let shifted: Vec<C> = eigvals(&bare)
        .unwrap()
        .into_iter()
        .map(|e| e + c(0.0, -gamma_g / 2.0))
        .collect();
    assert!(multiset_distance(&eigvals(&h).unwrap(), &shifted) < 1e-9 * omega);
    // E₀ = −iγ/2, E± = −(i/2)(γ + 2Ω) ± √(2J² − Ω²)
    let root = 2.0 * j * j - omega * omega;
    let root = c(root, 0.0).sqrt();
    let analytic = [
        c(0.0, -gamma_g / 2.0),
        c(0.0, -(gamma_g + 2.0 * omega) / 2.0) + root,
        c(0.0, -(gamma_g + 2.0 * omega) / 2.0) - root,
    ];
    assert!(multiset_distance(&eigvals(&h).unwrap(), &analytic) < 1e-9 * omega);
}

#[test]
fn master_equation_forms_agree() {
    let mut r = rng(5);
    let p = ModelParams::tuned(30.0, 10.0).with_gamma_g(0.5);
    let sys = build_eff3(&p).unwrap();
    let (g, lambda) = gamma_lambda_forms(&sys);
    let h = sys.hamiltonian();
    let h_nh = h - &g.scale(c(0.0, 0.5));
    for _ in 0..20 {
        let rho = random_hermitian(&mut r, 3, 1.0);
        // direct form: −i[H, ρ] + Σ (LρLᴴ − ½{LᴴL, ρ})
        let mut direct = h.commutator(&rho).scale(c(0.0, -1.0));
        for l in sys.jump_ops() {
            direct += &(&(l * &rho) * &l.adjoint());
            direct -= &(&l.adjoint() * l).anticommutator(&rho).scale_real(0.5);
        }
        let via_forms =
            &(&(&h_nh * &rho) - &(&rho * &h_nh.adjoint())).scale(c(0.0, -1.0)) + &lambda(&rho);
        let scale = direct.max_abs().max(1.0);
        assert!(direct.max_diff(&via_forms) < 1e-12 * scale);
        assert!(direct.max_diff(&sys.master_rhs(&rho, 1.0)) < 1e-12 * scale);
    }
    let empty = LindbladSystem::new(ComplexMatrix::<f64>::identity(3), vec![], true).unwrap();
    let (g0, l0) = gamma_lambda_forms(&empty);
    assert_eq!(g0, ComplexMatrix::zeros(3, 3));
    assert_eq!(l0(&ComplexMatrix::identity(3)), ComplexMatrix::zeros(3, 3));
}

#[test]
fn system_rejects_bad_shapes() {
    let h = ComplexMatrix::<f64>::identity(3);
    let bad = vec![("x".to_string(), ComplexMatrix::identity(2))];
    assert!(matches!(
        LindbladSystem::new(h.clone(), bad, true),
        Err(ModelError::OperatorShape { .. })
    ));
    let mut nh = h.clone();
    nh[(0, 1)] = c(0.0, 1.0);
    assert!(matches!(
        LindbladSystem::new(nh.clone(), vec![], true),
        Err(ModelError::NotHermitian { .. })
    ));
    assert!(LindbladSystem::new(nh, vec![], false).is_ok());
}

#[test]
fn field_reversal_leaves_spectrum_unchanged() {
    for &(j, delta) in &[(10.0, 4.62), (23.0, 11.5), (40.0, 14.0)] {
        let a = build_eff3(&ModelParams::tuned(30.0, j).with_delta_rf(delta))
            .unwrap()
            .non_hermitian_hamiltonian();
        let b = build_eff3(&ModelParams::tuned(30.0, j).with_delta_rf(-delta))
            .unwrap()
            .non_hermitian_hamiltonian();
        assert!(multiset_distance(&eigvals(&a).unwrap(), &eigvals(&b).unwrap()) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn effective_operators_are_consistent(
        omega_r in 0.1f64..20.0,
        big_delta in -30.0f64..30.0,
        gamma in 5.0f64..200.0,
        j in 0.0f64..10.0,
        delta in -5.0f64..5.0,
    ) {
        let mut p = ModelParams::from_optical(omega_r, j, delta, gamma);
        p.delta_opt = big_delta;
        let red = reduce_effective(&build_full4_rwa(&p), &p).unwrap();
        let dev = (&red.h_eff - &red.h_eff.adjoint()).frobenius_norm();
        prop_assert!(dev <= 1e-12 * red.h_eff.frobenius_norm());
        let mut sum = ComplexMatrix::zeros(3, 3);
        for (_, l) in &red.l_eff {
            sum += &(&l.adjoint() * l);
        }
        let anti = (&red.h_nh - &red.h_nh.adjoint()).scale_real(0.5);
        prop_assert!(anti.max_diff(&sum.scale(c(0.0, -0.5))) <= 1e-12 * sum.max_abs().max(1e-300));
    }

    #[test]
    fn jump_phase_never_changes_relaxation(tf in 0i32..=4, step in -1i32..=1, gamma in 0.1f64..10.0) {
        let tbig = tf + 2 * step;
        prop_assume!(tbig >= 0 && !(tf == 0 && tbig == 0));
        let (f, big_f) = (HalfInteger::from_twice(tf), HalfInteger::from_twice(tbig));
        let a = build_spont_jumps::<f64>(f, big_f, gamma, JumpPhase::Imaginary).unwrap();
        let b = build_spont_jumps::<f64>(f, big_f, gamma, JumpPhase::DeltaF).unwrap();
        for (la, lb) in a.iter().zip(&b) {
            prop_assert!((&la.adjoint() * la).max_diff(&(&lb.adjoint() * lb)) < 1e-14);
            let x = ComplexMatrix::from_fn(la.rows(), la.cols(), |r, c| common::c((r + 2 * c) as f64, 1.0));
            prop_assert!((&(la * &x) * &la.adjoint()).max_diff(&(&(lb * &x) * &lb.adjoint())) < 1e-12);
        }
    }
}
