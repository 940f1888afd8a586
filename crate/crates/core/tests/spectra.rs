mod common;

use common::{c, random_density, C};
use lioup::analytic::{
    alpha, degenerate_couplings, hybrid_triplet, jump_splitting_limit, triple_point,
    triple_point_vector,
};
use lioup::linalg::{eig, eigvals, ComplexMatrix};
use lioup::model::{build_eff3, ModelError, ModelParams};
use lioup::scalar::cabs;
use lioup::spectra::*;
use lioup::superop::{full_liouvillian, hybrid_liouvillian, nhh_superop, BasisTag, GellMannBasis};
use lioup::{QuadDouble, Real};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn operator<T: Real>(p: &ModelParams<T>) -> Result<ComplexMatrix<T>, ModelError> {
    Ok(build_eff3(p)?.non_hermitian_hamiltonian())
}

fn hybrid<T: Real>(p: &ModelParams<T>) -> Result<ComplexMatrix<T>, SpectraError> {
    Ok(hybrid_liouvillian(&build_eff3(p)?, p.q, BasisTag::gell_mann(3))?.matrix)
}

fn max_cluster<T: Real>(values: &[num_complex::Complex<T>], radius: T) -> usize {
    cluster_values(values, radius)
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0)
}

#[test]
fn classification_examples() {
    let tol = 1e-8 * 30.0;
    assert_eq!(classify_value(c(0.0, 0.0), tol), EigKind::Stationary);
    assert_eq!(classify_value(c(-60.0, 0.0), tol), EigKind::PureDecay);
    assert_eq!(
        classify_value(-alpha(30.0, 30.0, 1), tol),
        EigKind::DampedOscillation
    );
    assert_eq!(classify_value(c(0.0, 3.0), tol), EigKind::PureOscillation);
    assert_eq!(classify_value(c(1e-3, 3.0), tol), EigKind::Unstable);
    let classes = classify(&[c(0.0, 0.0), c(-1.0, 2.0)], tol);
    assert_eq!(classes[1].class, EigKind::DampedOscillation);
}

#[test]
fn full_liouvillian_has_one_stationary_state_and_nothing_unstable() {
    for &(o, j, d) in &[(30.0, 10.0, 0.0), (30.0, 17.0, 3.0), (20.0, 40.0, -6.0)] {
        let sys = build_eff3(&ModelParams::tuned(o, j).with_delta_rf(d)).unwrap();
        let values = eigvals(
            &full_liouvillian(&sys, BasisTag::gell_mann(3))
                .unwrap()
                .matrix,
        )
        .unwrap();
        let classes = classify(&values, default_tol_class(&values));
        let count = |k| classes.iter().filter(|e| e.class == k).count();
        assert_eq!(count(EigKind::Stationary), 1, "Ω={o} J={j} δ={d}");
        assert_eq!(count(EigKind::Unstable), 0);
    }
}

#[test]
fn splitting_table_is_antisymmetric() {
    let values = [c(0.0, 0.0), c(-1.0, 2.0), c(-3.0, -0.5), c(-2.0, 1.0)];
    let t = splittings(&values);
    assert_eq!(t.pairs.len(), 6);
    for i in 0..4 {
        assert_eq!(t.get(i, i), Some((0.0, 0.0)));
        for j in 0..4 {
            let (a, b) = (t.get(i, j).unwrap(), t.get(j, i).unwrap());
            assert_eq!((a.0, a.1), (-b.0, -b.1));
            let d = values[i] - values[j];
            assert_eq!(a, (d.re, d.im));
        }
    }
    assert_eq!(t.get(4, 0), None);
    let flat = splittings(&[c(2.0, -1.0); 3]);
    assert!(flat.pairs.iter().all(|s| s.re == 0.0 && s.im == 0.0));
}

#[test]
fn operator_ep2_is_exceptional() {
    let o = 30.0;
    let h = operator(&ModelParams::tuned(o, o / 2f64.sqrt())).unwrap();
    let reports = detect_degeneracy_default(&h).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!((r.algebraic_mult, r.geometric_mult, r.order), (2, 1, 2));
    assert_eq!(r.kind, DegeneracyKind::Exceptional);
    assert!(cabs(r.cluster_value - c(0.0, -30.0)) < 1e-6);
    assert!(r.vector_overlap > 1.0 - 1e-4);
    assert!(!r.ambiguous);
}

#[test]
fn superoperator_ep3_at_q_zero() {
    type Q = QuadDouble;
    let o = Q::of(30.0);
    let p = ModelParams::tuned(o, o / Q::of(2.0).sqrt());
    let m = hybrid(&p).unwrap();
    let reports = detect_degeneracy_default(&m).unwrap();
    // the q-independent −2Ω sits on top of the coalescing triplet
    let at = reports
        .iter()
        .find(|r| {
            cabs(r.cluster_value - num_complex::Complex::new(Q::of(-60.0), Q::of(0.0)))
                < Q::of(1e-6)
        })
        .expect("cluster at −2Ω");
    assert!(at.has_block(3), "{:?}", at.partition);
    assert_eq!(at.partition, vec![3, 1]);
    assert_eq!(at.algebraic_mult, 4);
    assert_eq!(at.geometric_mult, 2);
    assert_eq!(at.kind, DegeneracyKind::Hybrid);
    // −α₁ and −α₋₁ meet at −Ω, each twice
    let others: Vec<_> = reports.iter().filter(|r| !std::ptr::eq(*r, at)).collect();
    assert_eq!(others.len(), 1);
    assert_eq!(others[0].partition, vec![2, 2]);
}

#[test]
fn triple_point_superoperator_collapse() {
    type Q = QuadDouble;
    let tp = triple_point(Q::of(30.0));
    let p = ModelParams::tuned(Q::of(30.0), tp.j).with_delta_rf(tp.delta);
    let m = hybrid(&p).unwrap();
    let reports = detect_degeneracy_default(&m).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r.algebraic_mult, 9);
    assert_eq!(r.geometric_mult, 3);
    assert_eq!(r.partition, vec![5, 3, 1]);
    assert!(r.gap_residual < Q::of(1e-6));

    let op = operator(&p).unwrap();
    let e = eig(&op, false).unwrap();
    let v = e.right_vectors.column(0);
    let fidelity = cabs(lioup::linalg::dot(&triple_point_vector::<Q>(), &v));
    assert!(fidelity > Q::of(1.0 - 1e-12));
}

#[test]
fn diabolical_and_hybrid_kinds() {
    let diag = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.5)]);
    let r = &detect_degeneracy(&diag, 1e-6, 1e-7).unwrap()[0];
    assert_eq!(r.kind, DegeneracyKind::Diabolical);
    assert_eq!((r.algebraic_mult, r.geometric_mult, r.order), (2, 2, 1));
    assert!(r.vector_overlap < 1e-4);

    let mut mixed = ComplexMatrix::from_diag(&[c(0.5, 0.0); 3]);
    mixed[(0, 1)] = c(1.0, 0.0);
    let r = &detect_degeneracy(&mixed, 1e-6, 1e-7).unwrap()[0];
    assert_eq!(r.kind, DegeneracyKind::Hybrid);
    assert_eq!(r.partition, vec![2, 1]);
}

#[test]
fn close_clusters_are_flagged() {
    let m = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(0.0, 0.0), c(1.5e-6, 0.0), c(5.0, 0.0)]);
    let reports = detect_degeneracy(&m, 1e-6, 1e-7).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].ambiguous);
}

#[test]
fn correspondence_examples() {
    let h = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(0.0, -1.0)]);
    let mut pairs = pairwise_spectrum(&h).unwrap();
    pairs.sort_by(|a, b| b.re.total_cmp(&a.re));
    let expected = [c(0.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0)];
    for (a, b) in pairs.iter().zip(&expected) {
        assert!((a - b).norm() < 1e-14);
    }
    assert!(matches!(
        correspondence_check(&h, &expected[..3]),
        Err(SpectraError::DimensionMismatch {
            expected: 4,
            found: 3
        })
    ));

    for &(o, j, d) in &[(30.0, 10.0, 0.0), (30.0, 21.0, 4.0), (20.0, 35.0, 0.0)] {
        let p = ModelParams::tuned(o, j).with_delta_rf(d);
        let values = eigvals(&hybrid(&p).unwrap()).unwrap();
        let err = correspondence_check(&operator(&p).unwrap(), &values).unwrap();
        assert!(err < 1e-9 * o, "{err}");
    }
}

#[test]
fn operator_degeneracy_squares_in_the_superoperator() {
    let e = c(1.0, -1.0);
    let h = ComplexMatrix::from_diag(&[e, e, c(-2.0, -0.3)]);
    let generator = nhh_superop(&h, &GellMannBasis::new(3).unwrap())
        .unwrap()
        .scale(c(0.0, -1.0));
    let values = eigvals(&generator).unwrap();
    let target = c(0.0, -1.0) * (e - e.conj());
    let hits = values
        .iter()
        .filter(|v| (*v - target).norm() < 1e-9)
        .count();
    assert!(hits >= 4, "{hits}");
}

#[test]
fn sweep_columns_are_permutations_of_the_raw_spectrum() {
    let base = ModelParams::tuned(30.0, 15.0).with_q(0.3);
    let grid = linspace(15.0, 25.0, 21);
    let s = sweep(hybrid::<f64>, "j", &grid, &base).unwrap();
    assert_eq!(s.n_branches(), 9);
    for (g, &j) in grid.iter().enumerate() {
        let raw = eigvals(&hybrid(&base.with_param("j", j).unwrap()).unwrap()).unwrap();
        assert!(multiset_distance(&s.column(g), &raw) < 1e-9);
    }
}

#[test]
fn q_zero_sweep_bifurcates_at_the_ep() {
    let o = 30.0;
    let base = ModelParams::tuned(o, 15.0);
    let grid = linspace(15.0, 25.0, 101);
    let s = sweep(hybrid::<f64>, "j", &grid, &base).unwrap();
    let real_count = |g: usize| s.column(g).iter().filter(|z| z.im.abs() < 1e-6 * o).count();
    let j_ep = o / 2f64.sqrt();
    for (g, &j) in grid.iter().enumerate() {
        if j < j_ep - 0.05 {
            assert_eq!(real_count(g), 9, "J={j}");
        } else if j > j_ep + 0.05 {
            assert_eq!(real_count(g), 3, "J={j}");
        }
    }
}

#[test]
fn jumps_lift_the_ninefold_degeneracy() {
    let tp = triple_point(30.0);
    let base = ModelParams::tuned(30.0, 10.0)
        .with_delta_rf(tp.delta)
        .with_q(1.0);
    let grid = linspace(10.0, 40.0, 61);
    let s = sweep(hybrid::<f64>, "j", &grid, &base).unwrap();
    for g in 0..grid.len() {
        let col = s.column(g);
        assert!(max_cluster(&col, default_tol_cluster(&col)) < 9);
    }
}

#[test]
fn no_operator_degeneracy_beyond_the_critical_detuning() {
    let base = ModelParams::tuned(30.0, 0.0).with_delta_rf(14.0);
    let grid = linspace(0.0, 60.0, 241);
    let s = sweep(operator::<f64>, "j", &grid, &base).unwrap();
    assert!(s.ep_candidates.is_empty());
    assert!(s.broken.is_empty());
}

#[test]
fn sweep_rejects_bad_grids() {
    let base = ModelParams::tuned(30.0, 10.0);
    assert!(matches!(
        sweep(operator::<f64>, "j", &[1.0], &base),
        Err(SpectraError::InvalidGrid(_))
    ));
    assert!(matches!(
        sweep(operator::<f64>, "j", &[2.0, 1.0], &base),
        Err(SpectraError::InvalidGrid(_))
    ));
    assert!(sweep(operator::<f64>, "bogus", &[1.0, 2.0], &base).is_err());
}

#[test]
fn sweep_records_broken_points() {
    let base = ModelParams::tuned(30.0, 10.0);
    let builder = |p: &ModelParams<f64>| {
        if p.j > 1.5 && p.j < 2.5 {
            Err("refused")
        } else {
            operator(p).map_err(|_| "model")
        }
    };
    let s = sweep(builder, "j", &[1.0, 2.0, 3.0], &base).unwrap();
    assert_eq!(s.broken.len(), 1);
    assert_eq!(s.broken[0].0, 1);
    assert!(s.branches.iter().all(|b| b[1].re.is_nan()));
    assert!(s.branches.iter().all(|b| b[2].re.is_finite()));
}

#[test]
fn find_ep_locates_the_operator_ep2() {
    let base = ModelParams::tuned(30.0, 20.0);
    let found = find_ep(
        operator::<f64>,
        &base,
        &[SearchAxis::new("j", 15.0, 30.0)],
        &FindEpOptions::target(2),
    )
    .unwrap();
    assert_eq!(found.reports.len(), 1);
    let r = &found.reports[0];
    assert!((r.params.unwrap().j - 30.0 / 2f64.sqrt()).abs() < 1e-4);
    assert_eq!(r.kind, DegeneracyKind::Exceptional);
}

#[test]
fn find_ep_rejects_bad_boxes() {
    let base = ModelParams::tuned(30.0, 20.0);
    let opts = FindEpOptions::target(2);
    assert!(matches!(
        find_ep(operator::<f64>, &base, &[], &opts),
        Err(SpectraError::InvalidBox(_))
    ));
    let inverted = [SearchAxis::new("j", 30.0, 15.0)];
    assert!(matches!(
        find_ep(operator::<f64>, &base, &inverted, &opts),
        Err(SpectraError::InvalidBox(_))
    ));
}

#[test]
fn find_ep_returns_nothing_without_degeneracy() {
    let base = ModelParams::tuned(30.0, 20.0).with_delta_rf(14.0);
    let found = find_ep(
        operator::<f64>,
        &base,
        &[SearchAxis::new("j", 0.0, 60.0)],
        &FindEpOptions::target(2),
    )
    .unwrap();
    assert!(found.reports.is_empty());
    assert!(!found.seeds.is_empty());
}

#[test]
fn census_below_and_above_the_critical_detuning() {
    let line = SearchAxis::new("j", 0.0, 60.0);
    let low = census(
        operator::<f64>,
        &ModelParams::tuned(30.0, 1.0).with_delta_rf(4.62),
        &line,
        "delta_rf",
        5e-4,
    )
    .unwrap();
    assert!(low.ep3.is_empty());
    assert_eq!(low.ep2.len(), 2);
    let oracle = degenerate_couplings(30.0, 4.62);
    for (r, j) in low.ep2.iter().zip(&oracle) {
        assert!(
            (r.params.unwrap().j - j).abs() < 1e-4,
            "{:?} vs {j}",
            r.params.unwrap().j
        );
    }
    let high = census(
        operator::<f64>,
        &ModelParams::tuned(30.0, 1.0).with_delta_rf(14.0),
        &line,
        "delta_rf",
        5e-4,
    )
    .unwrap();
    assert!(high.ep2.is_empty() && high.ep3.is_empty());
}

#[test]
fn triplet_tracking_matches_the_analytic_triplet() {
    let (o, q) = (30.0, 0.001);
    let grid: Vec<f64> = (0..=60)
        .map(|k| 5.0 * 10f64.powf(k as f64 / 20.0))
        .collect();
    let t = track_hybrid_triplet(o, q, &grid).unwrap();
    for (g, &j) in grid.iter().enumerate() {
        let tracked = [t.lambda7[g], t.lambda8[g], t.lambda9[g]];
        assert!(
            multiset_distance(&tracked, &hybrid_triplet(o, j, q)) < 1e-7 * o,
            "J={j}"
        );
    }
    let last = grid.len() - 1;
    let limit = jump_splitting_limit(o, q);
    assert!((t.real_splitting(7, 8)[last] - limit).abs() < 1e-3);
    assert!((t.real_splitting(7, 9)[last] - limit).abs() < 1e-3);
    assert!(t.real_splitting(8, 9)[last].abs() < 1e-3);
    assert!((t.lambda7[last] - hybrid_triplet(o, grid[last], q)[0]).norm() < 1e-6 * o);
}

#[test]
fn asymptotic_limits() {
    let p = ModelParams::tuned(30.0, 0.0).with_delta_rf(4.62);
    let small = asymptote_check(AsymptoteKind::SmallJ, &p, &[0.0]).unwrap();
    assert!(small.max_deviation < 1e-12 && small.in_regime);
    let near = asymptote_check(AsymptoteKind::SmallJ, &p, &[0.01, 0.1]).unwrap();
    assert!(near.deviations[0] < near.deviations[1]);

    let far = asymptote_check(AsymptoteKind::LargeJ, &p, &[300.0, 3000.0, 30000.0]).unwrap();
    assert!(far.in_regime);
    assert!(far.deviations.windows(2).all(|w| w[1] < w[0]));
    // the leading correction falls off like 1/J
    assert!(far.deviations[2] * 10.0 < 1.5 * far.deviations[1]);

    let resonant = asymptote_check(
        AsymptoteKind::LargeJ,
        &ModelParams::tuned(30.0, 0.0),
        &[3000.0],
    )
    .unwrap();
    assert!(resonant.max_deviation < 1.0);
    let off = asymptote_check(AsymptoteKind::SmallJ, &p, &[5.0]).unwrap();
    assert!(!off.in_regime);
}

fn full_at(o: f64, j: f64) -> lioup::superop::SuperOperator<f64> {
    full_liouvillian(
        &build_eff3(&ModelParams::tuned(o, j)).unwrap(),
        BasisTag::gell_mann(3),
    )
    .unwrap()
}

#[test]
fn evolution_paths_agree_and_preserve_trace() {
    let (o, j) = (30.0, 10.0);
    let l = full_at(o, j);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rho0 = random_density(&mut rng, 3);
    let zero = evolve_check(&l, &rho0, 0.0).unwrap();
    assert!(zero.rho_expm.max_diff(&rho0) < 1e-14);
    for t in linspace(0.0, 5.0 / o, 11) {
        let r = evolve_check(&l, &rho0, t).unwrap();
        assert!(r.trace_drift < 1e-9);
        assert!(r.difference.unwrap() < 1e-8);
    }
}

#[test]
fn long_time_state_is_stationary() {
    let l = full_at(30.0, 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rho0 = random_density(&mut rng, 3);
    let stationary = stationary_state(&l).unwrap();
    let values = eigvals(&l.matrix).unwrap();
    let slowest = values
        .iter()
        .map(|z| -z.re)
        .filter(|&r| r > 1e-6)
        .fold(f64::INFINITY, f64::min);
    let start = rho0.max_diff(&stationary);
    for t in [50.0 / 30.0, 10.0] {
        let rho = evolve_check(&l, &rho0, t).unwrap().rho_expm;
        let bound = 10.0 * start * (-slowest * t).exp() + 1e-12;
        assert!(rho.max_diff(&stationary) < bound, "t={t}");
    }
    assert!((stationary.trace() - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn evolve_rejects_hybrid_generators_and_bad_states() {
    let sys = build_eff3(&ModelParams::tuned(30.0, 10.0)).unwrap();
    let hybrid = hybrid_liouvillian(&sys, 0.5, BasisTag::gell_mann(3)).unwrap();
    let rho = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(matches!(
        evolve_check(&hybrid, &rho, 1.0),
        Err(SpectraError::NotTracePreserving)
    ));
    let l = full_liouvillian(&sys, BasisTag::gell_mann(3)).unwrap();
    let bad = ComplexMatrix::from_diag(&[c(1.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]);
    assert!(matches!(
        evolve_check(&l, &bad, 1.0),
        Err(SpectraError::InvalidState(_))
    ));
    let half = ComplexMatrix::from_diag(&[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(matches!(
        evolve_check(&l, &half, 1.0),
        Err(SpectraError::InvalidState(_))
    ));
}

#[test]
fn grouping_by_real_part() {
    let values = [
        c(0.0, 0.0),
        c(-1.0, 3.0),
        c(-100.0, 0.0),
        c(-1.2, -3.0),
        c(-101.0, 1.0),
    ];
    let groups = group_by_real_part(&values, 10.0);
    assert_eq!(groups, vec![vec![0, 1, 3], vec![2, 4]]);
}

/// `S · B · S⁻¹` for a block-diagonal `B` holding Jordan blocks of the
/// given sizes at `value`, followed by `distinct` simple eigenvalues.
fn planted(
    value: C,
    sizes: &[usize],
    distinct: &[C],
    s: &ComplexMatrix<f64>,
) -> ComplexMatrix<f64> {
    let n = sizes.iter().sum::<usize>() + distinct.len();
    let mut b = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for &size in sizes {
        for i in 0..size {
            b[(k + i, k + i)] = value;
            if i + 1 < size {
                b[(k + i, k + i + 1)] = c(1.0, 0.0);
            }
        }
        k += size;
    }
    for (i, &d) in distinct.iter().enumerate() {
        b[(k + i, k + i)] = d;
    }
    let inv = lioup::linalg::inverse(s).unwrap();
    &(s * &b) * &inv
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certification_is_sound(
        shape in prop::sample::select(vec![vec![2], vec![1, 1], vec![2, 1], vec![2, 2], vec![1, 1, 1]]),
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        seed in 0u64..1000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = shape.iter().sum::<usize>() + 2;
        let s = &ComplexMatrix::identity(n) + &common::random_matrix(&mut rng, n, 0.15);
        let value = c(re, im);
        let distinct = [value + c(3.0, 1.0), value + c(-2.5, 2.0)];
        let a = planted(value, &shape, &distinct, &s);
        let reports = detect_degeneracy_default(&a).unwrap();
        prop_assert_eq!(reports.len(), 1);
        let r = &reports[0];
        prop_assert_eq!(&r.partition, &shape);
        prop_assert!(r.geometric_mult <= r.algebraic_mult);
        prop_assert_eq!(r.kind == DegeneracyKind::Diabolical, r.geometric_mult == r.algebraic_mult);
        prop_assert_eq!(r.kind == DegeneracyKind::Exceptional, r.geometric_mult == 1);
        match r.kind {
            DegeneracyKind::Exceptional => prop_assert!(r.vector_overlap > 1.0 - 1e-4),
            DegeneracyKind::Diabolical => prop_assert!(r.vector_overlap < 1e-4),
            DegeneracyKind::Hybrid => {}
        }
    }

    #[test]
    fn field_reversal_keeps_the_operator_spectrum(j in 0.0f64..60.0, d in 0.0f64..20.0) {
        let p = ModelParams::tuned(30.0, j);
        let plus = eigvals(&operator(&p.with_delta_rf(d)).unwrap()).unwrap();
        let minus = eigvals(&operator(&p.with_delta_rf(-d)).unwrap()).unwrap();
        prop_assert!(multiset_distance(&plus, &minus) < 1e-9 * 60.0);
    }

    #[test]
    fn tracked_branches_permute_each_column(shift in 0.0f64..1.0) {
        let base = ModelParams::tuned(30.0, 5.0).with_q(0.5).with_delta_rf(shift * 8.0);
        let grid = linspace(5.0, 30.0, 9);
        let s = sweep(hybrid::<f64>, "j", &grid, &base).unwrap();
        for (g, &j) in grid.iter().enumerate() {
            let raw = eigvals(&hybrid(&base.with_param("j", j).unwrap()).unwrap()).unwrap();
            prop_assert!(multiset_distance(&s.column(g), &raw) < 1e-9);
        }
    }
}
