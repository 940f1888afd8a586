//! The acceptance suite. Each check returns measured and expected values
//! alongside its verdict; numerical failures inside a check count as a fail.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    hybrid_triplet, jump_splitting_limit, nhh_superop_spectrum, q_independent_spectrum,
    triple_point, triple_point_vector,
};
use crate::linalg::{dot, eig, eigvals, ComplexMatrix};
use crate::model::{build_eff3, LindbladSystem, ModelParams, DEFAULT_GAMMA_SP};
use crate::scalar::{cabs, QuadDouble, Real};
use crate::spectra::{
    bottleneck_matching, census, cluster_values, correspondence_check, default_tol_cluster,
    detect_degeneracy, detect_degeneracy_default, eff3_hybrid, eff3_operator, evolve_check,
    find_ep, full4_hybrid, group_by_real_part, multiset_distance, spectral_scale,
    track_hybrid_triplet, FindEpOptions, SearchAxis, SpectraError,
};
use crate::superop::{
    fock_liouville, full_liouvillian, gamma_superop, h_superop, hybrid_liouvillian,
    isotropic_extension, nhh_liouvillian, BasisKind, BasisTag, GellMannBasis,
};

type Q = QuadDouble;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    /// Criterion number, or `None` for supplementary checks.
    pub id: Option<usize>,
    pub title: &'static str,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
}

impl CheckResult {
    /// One line: verdict, label, measured and expected values.
    pub fn line(&self) -> String {
        let label = match self.id {
            Some(i) => format!("{i:>2}"),
            None => " +".to_string(),
        };
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "{verdict} {label} {}: measured {}; expected {}",
            self.title, self.measured, self.expected
        )
    }
}

pub const TITLES: [&str; 12] = [
    "operator EP2",
    "NHH superoperator spectrum and EP3",
    "hybrid analytic spectrum",
    "jump-induced lifting",
    "triple point",
    "detuned-regime census",
    "triple-point superoperator collapse",
    "four-level validation",
    "structural properties",
    "isotropic relaxation",
    "trace and positivity dynamics",
    "basis independence",
];

const ROBUSTNESS_TITLE: &str = "triple point at tol_cluster x 1e-3";

struct Outcome {
    passed: bool,
    measured: String,
    expected: String,
}

fn outcome(passed: bool, measured: String, expected: &str) -> Outcome {
    Outcome {
        passed,
        measured,
        expected: expected.to_string(),
    }
}

/// Runs criterion `id` (1 to 12).
pub fn run_criterion(id: usize) -> Option<CheckResult> {
    let title = *TITLES.get(id.checked_sub(1)?)?;
    let result = match id {
        1 => operator_ep2(),
        2 => nhh_superoperator(),
        3 => hybrid_analytic(),
        4 => jump_lifting(),
        5 => triple_point_search(),
        6 => detuned_census(),
        7 => triple_point_collapse(),
        8 => four_level(),
        9 => structural(),
        10 => isotropic_relaxation(),
        11 => dynamics(),
        _ => basis_independence(),
    };
    Some(finish(Some(id), title, result))
}

/// Re-certifies the triple-point collapse with the clustering radius cut
/// by a factor of 1000.
pub fn robustness() -> CheckResult {
    finish(None, ROBUSTNESS_TITLE, tight_collapse())
}

/// Every criterion in order, then the supplementary checks.
pub fn run_all() -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (1..=TITLES.len()).filter_map(run_criterion).collect();
    out.push(robustness());
    out
}

fn finish(id: Option<usize>, title: &'static str, r: Result<Outcome, SpectraError>) -> CheckResult {
    match r {
        Ok(o) => CheckResult {
            id,
            title,
            passed: o.passed,
            measured: o.measured,
            expected: o.expected,
        },
        Err(e) => CheckResult {
            id,
            title,
            passed: false,
            measured: format!("error: {e}"),
            expected: "completion without numerical failure".into(),
        },
    }
}

fn fmt_c<T: Real>(z: Complex<T>) -> String {
    format!("{:.8}{:+.8}i", z.re.to_f64(), z.im.to_f64())
}

fn gm<T: Real>(p: &ModelParams<T>) -> Result<ComplexMatrix<T>, SpectraError> {
    eff3_hybrid(p, BasisKind::GellMann)
}

fn operator_ep2() -> Result<Outcome, SpectraError> {
    let o = 30.0;
    let j_ep = o / 2f64.sqrt();
    let at = ModelParams::tuned(o, j_ep);
    let reports = detect_degeneracy_default(&eff3_operator(&at)?)?;
    let target = Complex::new(0.0, -30.0);
    let ep_ok = reports.len() == 1 && {
        let r = &reports[0];
        r.algebraic_mult == 2
            && r.geometric_mult == 1
            && (r.cluster_value - target).norm() <= 1e-6 * o
    };
    let mut off_ok = true;
    for f in [0.99, 1.01] {
        let m = eff3_operator(&at.with_param("j", j_ep * f)?)?;
        off_ok &= detect_degeneracy_default(&m)?.is_empty();
    }
    let found = find_ep(
        eff3_operator::<f64>,
        &at,
        &[SearchAxis::new("j", 15.0, 30.0)],
        &FindEpOptions::target(2),
    )?;
    let js: Vec<f64> = found
        .reports
        .iter()
        .filter_map(|r| r.params.map(|p| p.j))
        .collect();
    let search_ok = js.len() == 1 && (js[0] - 21.2132).abs() <= 1e-4;
    let value = reports.first().map_or("none".into(), |r| {
        format!(
            "{} (alg {}, geo {})",
            fmt_c(r.cluster_value),
            r.algebraic_mult,
            r.geometric_mult
        )
    });
    Ok(outcome(
        ep_ok && off_ok && search_ok,
        format!(
            "EP at 2J^2 = Omega^2: {value}; none at J x (1 -/+ 0.01): {off_ok}; find_ep J = {js:?}"
        ),
        "-30i with alg 2, geo 1 only at 2J^2 = Omega^2; J = 21.2132 +/- 1e-4",
    ))
}

fn nhh_superoperator() -> Result<Outcome, SpectraError> {
    let mut worst = 0.0f64;
    for o in [20.0, 30.0, 40.0] {
        for j in [10.0, 21.2132, 35.0] {
            let p = ModelParams::tuned(Q::of(o), Q::of(j));
            let values = eigvals(&gm(&p)?)?;
            let analytic = nhh_superop_spectrum(Q::of(o), Q::of(j));
            let rel = multiset_distance(&values, &analytic) / spectral_scale(&analytic);
            worst = worst.max(rel.to_f64());
        }
    }
    let o = Q::of(30.0);
    let p = ModelParams::tuned(o, o / Q::of(2.0).sqrt());
    let reports = detect_degeneracy_default(&gm(&p)?)?;
    let minus_two_omega = Complex::new(Q::of(-60.0), Q::of(0.0));
    let cluster = reports
        .iter()
        .find(|r| cabs(r.cluster_value - minus_two_omega) < Q::of(1e-6) * o);
    let ep3_ok = cluster.is_some_and(|r| r.partition == [3, 1]);
    let structure = cluster.map_or("no cluster at -2 Omega".into(), |r| {
        format!(
            "cluster at -2 Omega: alg {}, geo {}, Jordan blocks {:?}",
            r.algebraic_mult, r.geometric_mult, r.partition
        )
    });
    Ok(outcome(
        worst <= 1e-8 && ep3_ok,
        format!("max relative spectrum error {worst:.2e} over 9 points; {structure}"),
        "<= 1e-8; one Jordan block of size 3 (alg 3, geo 1) beside the q-independent -2 Omega",
    ))
}

fn hybrid_analytic() -> Result<Outcome, SpectraError> {
    let mut worst = 0.0f64;
    let mut points = 0;
    for o in [20.0, 30.0, 40.0] {
        for j in [5.0, 12.0, 25.0, 35.0, 60.0] {
            for q in [0.0, 0.001, 0.25, 0.5, 1.0] {
                let p = ModelParams::tuned(o, j).with_q(q);
                let values = eigvals(&gm(&p)?)?;
                let analytic = crate::analytic::hybrid_spectrum(o, j, q);
                worst =
                    worst.max(multiset_distance(&values, &analytic) / spectral_scale(&analytic));
                points += 1;
            }
        }
    }
    let mut drift = 0.0f64;
    for o in [20.0, 30.0, 40.0] {
        for j in [5.0, 10.0, 35.0] {
            let fixed = q_independent_spectrum(o, j);
            let mut reference: Option<Vec<Complex<f64>>> = None;
            for q in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let values = eigvals(&gm(&ModelParams::tuned(o, j).with_q(q))?)?;
                let six = matched_subset(&values, &fixed);
                match &reference {
                    None => reference = Some(six),
                    Some(r) => {
                        for (a, b) in r.iter().zip(&six) {
                            drift = drift.max((a - b).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(outcome(
        worst <= 1e-7 && drift <= 1e-8 && points >= 45,
        format!(
            "max relative error {worst:.2e} over {points} points; q-independent drift {drift:.2e}"
        ),
        "<= 1e-7 over >= 45 points; drift <= 1e-8",
    ))
}

/// The values of `values` matched to `targets`, in target order.
fn matched_subset(values: &[Complex<f64>], targets: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let cost: Vec<Vec<f64>> = (0..values.len())
        .map(|r| {
            values
                .iter()
                .map(|&v| targets.get(r).map_or(0.0, |&t| (v - t).norm()))
                .collect()
        })
        .collect();
    let (perm, _) = bottleneck_matching(&cost);
    perm[..targets.len()].iter().map(|&k| values[k]).collect()
}

fn jump_lifting() -> Result<Outcome, SpectraError> {
    let (o, q) = (30.0, 0.001);
    let grid: Vec<f64> = (0..=100)
        .map(|k| 5.0 * 10f64.powf(k as f64 / 25.0))
        .collect();
    let t = track_hybrid_triplet(o, q, &grid)?;
    let limit = jump_splitting_limit(o, q);
    let (s78, s79, s89) = (
        t.real_splitting(7, 8),
        t.real_splitting(7, 9),
        t.real_splitting(8, 9),
    );
    let mut worst = [0.0f64; 3];
    let mut analytic_gap = 0.0f64;
    for (g, &j) in grid.iter().enumerate() {
        let tracked = [t.lambda7[g], t.lambda8[g], t.lambda9[g]];
        analytic_gap = analytic_gap.max(multiset_distance(&tracked, &hybrid_triplet(o, j, q)));
        if j >= 1e3 {
            worst[0] = worst[0].max((s78[g] - limit).abs());
            worst[1] = worst[1].max((s79[g] - limit).abs());
            worst[2] = worst[2].max(s89[g].abs());
        }
    }
    let last = grid.len() - 1;
    Ok(outcome(
        worst.iter().all(|&w| w <= 1e-3) && analytic_gap <= 1e-7 * o,
        format!(
            "at J = {:.0}: dE78 = {:.6}, dE79 = {:.6}, dE89 = {:.2e}; max deviation for J >= 1e3: {:.2e}, {:.2e}, {:.2e}",
            grid[last], s78[last], s79[last], s89[last], worst[0], worst[1], worst[2]
        ),
        "dE78, dE79 -> 4 Omega q / 3 = 0.04 +/- 1e-3 and dE89 -> 0 +/- 1e-3 for J >= 1e3",
    ))
}

fn triple_point_search() -> Result<Outcome, SpectraError> {
    let base = ModelParams::tuned(Q::of(30.0), Q::of(23.0)).with_delta_rf(Q::of(11.5));
    let axes = [
        SearchAxis::new("j", Q::of(20.0), Q::of(26.0)),
        SearchAxis::new("delta_rf", Q::of(9.0), Q::of(14.0)),
    ];
    let found = find_ep(eff3_operator::<Q>, &base, &axes, &FindEpOptions::target(3))?;
    let Some(r) = found.reports.first() else {
        return Ok(outcome(false, "no EP3 in the box".into(), "one EP3"));
    };
    let p = r.params.unwrap_or(base);
    let e = eig(&eff3_operator(&p)?, false)?;
    let fidelity = r
        .members
        .iter()
        .map(|&k| cabs(dot(&triple_point_vector::<Q>(), &e.right_vectors.column(k))).to_f64())
        .fold(0.0, f64::max);
    let value = r.cluster_value;
    let (j, d) = (p.j.to_f64(), p.delta_rf.to_f64());
    let value_err = cabs(value - Complex::new(Q::of(0.0), Q::of(-20.0))).to_f64();
    let passed = found.reports.len() == 1
        && (j - 23.0940).abs() <= 1e-3
        && (d - 11.5470).abs() <= 1e-3
        && value_err <= 1e-6
        && fidelity >= 1.0 - 1e-6;
    Ok(outcome(
        passed,
        format!(
            "(J, delta) = ({j:.6}, {d:.6}), eigenvalue {}, fidelity 1 - {:.1e}, {} report(s)",
            fmt_c(value),
            1.0 - fidelity,
            found.reports.len()
        ),
        "(23.0940, 11.5470) +/- 1e-3, -20i +/- 1e-6, fidelity >= 1 - 1e-6",
    ))
}

fn detuned_census() -> Result<Outcome, SpectraError> {
    let line = SearchAxis::new("j", Q::of(0.0), Q::of(60.0));
    let cases = [(4.62, 2, 0), (14.0, 0, 0), (11.547, 0, 1)];
    let runs: Vec<(f64, usize, usize)> = cases
        .iter()
        .flat_map(|&(delta, want2, want3)| [(delta, want2, want3), (-delta, want2, want3)])
        .collect();
    let counts = runs
        .par_iter()
        .map(|&(d, _, _)| {
            let base = ModelParams::tuned(Q::of(30.0), Q::of(1.0)).with_delta_rf(Q::of(d));
            let c = census(eff3_operator::<Q>, &base, &line, "delta_rf", Q::of(5e-4))?;
            Ok((c.ep2.len(), c.ep3.len()))
        })
        .collect::<Result<Vec<_>, SpectraError>>()?;
    let passed = runs
        .iter()
        .zip(&counts)
        .all(|(&(_, want2, want3), &found)| found == (want2, want3));
    let parts: Vec<String> = runs
        .iter()
        .zip(&counts)
        .map(|(&(d, _, _), &(n2, n3))| format!("delta {d}: {n2} EP2, {n3} EP3"))
        .collect();
    Ok(outcome(
        passed,
        parts.join("; "),
        "|delta| 4.62: 2 EP2; 14: none; 11.547: 1 EP3",
    ))
}

fn triple_point_params() -> ModelParams<Q> {
    let tp = triple_point(Q::of(30.0));
    ModelParams::tuned(Q::of(30.0), tp.j).with_delta_rf(tp.delta)
}

fn triple_point_collapse() -> Result<Outcome, SpectraError> {
    let p = triple_point_params();
    let m = gm(&p)?;
    let values = eigvals(&m)?;
    let mean = values
        .iter()
        .fold(Complex::new(Q::of(0.0), Q::of(0.0)), |a, &v| a + v)
        * (Q::of(1.0) / Q::from_usize(values.len()));
    let spread = values
        .iter()
        .map(|&v| cabs(v - mean).to_f64())
        .fold(0.0, f64::max);
    let reports = detect_degeneracy_default(&m)?;
    let collapse = reports
        .iter()
        .find(|r| r.algebraic_mult == 9)
        .map(|r| (r.geometric_mult, r.partition.clone()));

    let jumps = gm(&p.with_q(Q::of(1.0)))?;
    let lifted = eigvals(&jumps)?;
    let largest = cluster_values(&lifted, default_tol_cluster(&lifted))
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0);
    let passed = spread <= 1e-6 && collapse.as_ref().is_some_and(|c| c.0 == 3) && largest < 9;
    Ok(outcome(
        passed,
        format!(
            "q = 0: spread {spread:.1e} around {}, eigenvectors/blocks {collapse:?}; q = 1: largest cluster {largest}",
            fmt_c(mean)
        ),
        "all nine within 1e-6, 3 eigenvectors; q = 1 largest cluster < 9",
    ))
}

fn tight_collapse() -> Result<Outcome, SpectraError> {
    let m = gm(&triple_point_params())?;
    let values = eigvals(&m)?;
    let tol = default_tol_cluster(&values) * Q::of(1e-3);
    let reports = detect_degeneracy(&m, tol, Q::of(1e-7))?;
    let r = reports.iter().find(|r| r.algebraic_mult == 9);
    Ok(outcome(
        r.is_some_and(|r| r.geometric_mult == 3),
        format!(
            "{} report(s), nine-fold cluster: {:?}",
            reports.len(),
            r.map(|r| (r.geometric_mult, r.partition.clone()))
        ),
        "nine-fold cluster with 3 eigenvectors",
    ))
}

fn four_level() -> Result<Outcome, SpectraError> {
    let o = 30.0;
    let gamma = DEFAULT_GAMMA_SP;
    let mut passed = true;
    let mut parts = Vec::new();
    for j in [5.0, 21.0, 35.0] {
        let p = ModelParams::tuned(o, j).with_q(1.0);
        let values = eigvals(&full4_hybrid(&p, BasisKind::FockLiouville)?)?;
        let groups = group_by_real_part(&values, 0.1 * gamma);
        let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        let centres = [0.0, -gamma / 2.0, -gamma];
        let near = groups.len() == 3
            && groups
                .iter()
                .zip(centres)
                .all(|(g, c)| g.iter().all(|&k| (values[k].re - c).abs() <= 1e-3 * gamma));
        let ground: Vec<Complex<f64>> = groups
            .first()
            .map_or(Vec::new(), |g| g.iter().map(|&k| values[k]).collect());
        let effective = eigvals(&gm(&p)?)?;
        let err = if ground.len() == effective.len() {
            multiset_distance(&ground, &effective)
        } else {
            f64::INFINITY
        };
        passed &= sizes == [9, 6, 1] && near && err <= 0.01 * o;
        parts.push(format!(
            "J {j}: groups {sizes:?}, centred {near}, ground vs effective {err:.2e}"
        ));
    }
    Ok(outcome(
        passed,
        parts.join("; "),
        "groups [9, 6, 1] near 0, -Gamma/2, -Gamma; ground error <= 0.01 Omega = 0.3",
    ))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    })
}

fn random_system(
    rng: &mut ChaCha8Rng,
    d: usize,
    n_jumps: usize,
) -> Result<LindbladSystem<f64>, SpectraError> {
    let a = random_matrix(rng, d, 1.0);
    let h = (&a + &a.adjoint()).scale_real(0.5);
    let jumps = (0..n_jumps)
        .map(|k| (format!("L{k}"), random_matrix(rng, d, 1.0)))
        .collect();
    Ok(LindbladSystem::new(h, jumps, true)?)
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix<f64> {
    let b = random_matrix(rng, d, 1.0);
    let r = &b * &b.adjoint();
    let t = r.trace().re;
    r.scale_real(1.0 / t)
}

fn structural() -> Result<Outcome, SpectraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut h_dev, mut g_dev, mut corr) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..50 {
        let d = 3 + k % 2;
        let sys = random_system(&mut rng, d, 1 + k % 4)?;
        let basis = GellMannBasis::new(d)?;
        let hs = h_superop(sys.hamiltonian(), &basis)?;
        let jumps: Vec<ComplexMatrix<f64>> = sys.jump_ops().cloned().collect();
        let gs = gamma_superop(&jumps, &basis)?;
        h_dev = h_dev.max(hs.max_diff(&hs.transpose().scale_real(-1.0)));
        h_dev = h_dev.max(hs.data().iter().map(|z| z.re.abs()).fold(0.0, f64::max));
        g_dev = g_dev.max(gs.max_diff(&gs.transpose()));
        g_dev = g_dev.max(gs.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max));
        let generator = nhh_liouvillian(&sys, BasisTag::gell_mann(d))?;
        let values = eigvals(&generator.matrix)?;
        corr = corr.max(correspondence_check(
            &sys.non_hermitian_hamiltonian(),
            &values,
        )?);
    }
    Ok(outcome(
        h_dev <= 1e-12 && g_dev <= 1e-12 && corr <= 1e-8,
        format!("h_superop deviation {h_dev:.1e}, gamma_superop deviation {g_dev:.1e}, correspondence {corr:.1e} over 50 draws"),
        "structure <= 1e-12; correspondence <= 1e-8",
    ))
}

fn isotropic_relaxation() -> Result<Outcome, SpectraError> {
    let mut worst = 0.0f64;
    for (o, j, d, g) in [
        (30.0, 10.0, 0.0, 2.5),
        (30.0, 17.0, 4.0, 0.7),
        (20.0, 35.0, -6.0, 11.0),
    ] {
        let sys = build_eff3::<f64>(&ModelParams::tuned(o, j).with_delta_rf(d))?;
        for q in [0.0, 1.0] {
            let base = hybrid_liouvillian(&sys, q, BasisTag::gell_mann(3))?;
            let before = eigvals(&base.matrix)?;
            let after = eigvals(&isotropic_extension(&base, g, q)?.matrix)?;
            let stationary = before
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .map(|(k, _)| k);
            let expected: Vec<Complex<f64>> = before
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    if q == 1.0 && Some(k) == stationary {
                        v
                    } else {
                        v - g
                    }
                })
                .collect();
            worst = worst.max(multiset_distance(&after, &expected));
        }
    }
    Ok(outcome(
        worst <= 1e-9,
        format!("max deviation from the shifted spectrum {worst:.1e}"),
        "shift by -gamma (q = 0) or -gamma except 0 (q = 1) within 1e-9",
    ))
}

fn dynamics() -> Result<Outcome, SpectraError> {
    let o = 30.0;
    let sys = build_eff3(&ModelParams::tuned(o, 10.0))?;
    let l = full_liouvillian(&sys, BasisTag::gell_mann(3))?;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (mut drift, mut diff, mut lowest) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut defective = false;
    for _ in 0..10 {
        let rho0 = random_density(&mut rng, 3);
        for k in 0..=20 {
            let t = 5.0 / o * k as f64 / 20.0;
            let r = evolve_check(&l, &rho0, t)?;
            drift = drift.max(r.trace_drift);
            let populations = eigvals(&r.rho_expm)?;
            lowest = populations.iter().map(|z| z.re).fold(lowest, f64::min);
            match r.difference {
                Some(x) => diff = diff.max(x),
                None => defective = true,
            }
        }
    }
    Ok(outcome(
        drift <= 1e-9 && diff <= 1e-8 && lowest >= -1e-9 && !defective,
        format!(
            "trace drift {drift:.1e}, expm vs eigen-expansion {diff:.1e}, lowest eigenvalue of rho {lowest:.1e} over 10 states x 21 times"
        ),
        "drift <= 1e-9; difference <= 1e-8; rho stays positive",
    ))
}

fn basis_independence() -> Result<Outcome, SpectraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d = rng.gen_range(2..=4);
        let n_jumps = rng.gen_range(1..=4);
        let q = [0.0, 0.3, 1.0][rng.gen_range(0..3)];
        let sys = random_system(&mut rng, d, n_jumps)?;
        let a = eigvals(&hybrid_liouvillian(&sys, q, BasisTag::gell_mann(d))?.matrix)?;
        let b = eigvals(&fock_liouville(&sys, q)?.matrix)?;
        worst = worst.max(multiset_distance(&a, &b) / spectral_scale(&b));
    }
    Ok(outcome(
        worst <= 1e-8,
        format!("max relative spectrum distance {worst:.1e} over 20 draws"),
        "<= 1e-8",
    ))
}
