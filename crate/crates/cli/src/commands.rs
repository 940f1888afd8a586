//! The subcommands. Each returns the document or table it emits.

use lioup::linalg::{eigvals, ComplexMatrix};
use lioup::model::{build_eff3, build_full4_rwa, LindbladSystem, ModelParams};
use lioup::spectra::{
    classify, default_tol_class, detect_degeneracy, eff3_hybrid, eff3_operator, evolve_check,
    find_ep, full4_hybrid, group_by_real_part, linspace, spectral_scale, splittings,
    stationary_state, sweep, track_hybrid_triplet, EPReport, FindEpOptions, SearchAxis,
    SpectraError,
};
use lioup::superop::{full_liouvillian, BasisTag};
use lioup::validate::{robustness, run_criterion, CheckResult, TITLES};
use lioup::{QuadDouble, Real};
use num_complex::Complex;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Branches, Generator, ModelKind, Precision, Rho0Spec, RunConfig, Spacing};
use crate::output::{metadata, sci, Table};
use crate::CliError;

fn builder<T: Real>(
    cfg: &RunConfig,
) -> impl Fn(&ModelParams<T>) -> Result<ComplexMatrix<T>, SpectraError> + Sync {
    let (model, generator, basis) = (cfg.model, cfg.generator, cfg.basis);
    move |p| match (model, generator) {
        (ModelKind::Eff3, Generator::Liouvillian) => eff3_hybrid(p, basis),
        (ModelKind::Full4, Generator::Liouvillian) => full4_hybrid(p, basis),
        (ModelKind::Eff3, Generator::Nhh) => eff3_operator(p),
        (ModelKind::Full4, Generator::Nhh) => Ok(build_full4_rwa(p).non_hermitian_hamiltonian()),
    }
}

fn complex<T: Real>(z: Complex<T>) -> Value {
    json!([sci(z.re.to_f64()), sci(z.im.to_f64())])
}

fn params_json<T: Real>(p: &ModelParams<T>) -> Value {
    let p = p.cast::<f64>();
    json!({
        "omega_r": sci(p.omega_r),
        "omega": sci(p.omega),
        "j": sci(p.j),
        "delta_rf": sci(p.delta_rf),
        "delta_opt": sci(p.delta_opt),
        "gamma_sp": sci(p.gamma_sp),
        "gamma_g": sci(p.gamma_g),
        "q": sci(p.q),
    })
}

fn report_json<T: Real>(r: &EPReport<T>) -> Value {
    json!({
        "params": r.params.as_ref().map(params_json),
        "cluster_value": complex(r.cluster_value),
        "members": r.members,
        "algebraic_mult": r.algebraic_mult,
        "geometric_mult": r.geometric_mult,
        "order": r.order,
        "partition": r.partition,
        "kind": r.kind,
        "gap_residual": sci(r.gap_residual.to_f64()),
        "vector_overlap": sci(r.vector_overlap.to_f64()),
        "ambiguous": r.ambiguous,
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<Value, CliError> {
    let p = cfg.model_params()?;
    let body = match cfg.precision {
        Precision::Double => spectrum_at(cfg, &p)?,
        Precision::Quad => spectrum_at(cfg, &p.cast::<QuadDouble>())?,
    };
    let gap = cfg.group_gap(&p);
    let mut doc = body;
    doc["metadata"] = metadata("spectrum", cfg, json!({ "group_gap": sci(gap) }));
    Ok(doc)
}

fn spectrum_at<T: Real>(cfg: &RunConfig, p: &ModelParams<T>) -> Result<Value, CliError> {
    let m = builder(cfg)(p)?;
    let values = eigvals(&m).map_err(SpectraError::from)?;
    let scale = spectral_scale(&values);
    let classes = classify(&values, default_tol_class(&values));
    let tol_cluster = T::of(cfg.tolerances.tol_cluster_rel) * scale;
    let mut reports = detect_degeneracy(&m, tol_cluster, T::of(cfg.tolerances.tol_rank))?;
    for r in &mut reports {
        r.params = Some(*p);
    }
    let table = splittings(&values);
    let gap = T::of(cfg.group_gap(&p.cast::<f64>()));
    let groups = group_by_real_part(&values, gap);
    Ok(json!({
        "eigenvalues": values.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "classes": classes.iter().map(|c| c.class).collect::<Vec<_>>(),
        "splittings": table.pairs.iter().map(|s| json!({
            "i": s.i,
            "j": s.j,
            "re": sci(s.re),
            "im": sci(s.im),
        })).collect::<Vec<_>>(),
        "degeneracies": reports.iter().map(report_json).collect::<Vec<_>>(),
        "groups": {
            "sizes": groups.iter().map(Vec::len).collect::<Vec<_>>(),
            "members": groups,
        },
        "spectral_scale": sci(scale.to_f64()),
    }))
}

fn grid(start: f64, stop: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    match spacing {
        Spacing::Linear => linspace(start, stop, points),
        Spacing::Log => {
            let ratio = (stop / start).ln();
            let mut g: Vec<f64> = (0..points)
                .map(|k| start * (ratio * k as f64 / (points - 1) as f64).exp())
                .collect();
            g[points - 1] = stop;
            g
        }
    }
}

pub fn sweep_cmd(cfg: &RunConfig) -> Result<(Table, Value), CliError> {
    let s = cfg.require_sweep()?;
    let p = cfg.model_params()?;
    let xs = grid(s.start, s.stop, s.points, s.spacing);
    if s.branches == Branches::Triplet {
        let t = track_hybrid_triplet(p.omega, p.q, &xs)?;
        let (d78, d79, d89) = (
            t.real_splitting(7, 8),
            t.real_splitting(7, 9),
            t.real_splitting(8, 9),
        );
        let headers = [
            "j", "re_7", "re_8", "re_9", "im_7", "im_8", "im_9", "dre_78", "dre_79", "dre_89",
        ]
        .map(String::from)
        .to_vec();
        let rows = (0..xs.len())
            .map(|g| {
                let l = [t.lambda7[g], t.lambda8[g], t.lambda9[g]];
                vec![
                    xs[g], l[0].re, l[1].re, l[2].re, l[0].im, l[1].im, l[2].im, d78[g], d79[g],
                    d89[g],
                ]
            })
            .collect();
        let meta = metadata(
            "sweep",
            cfg,
            json!({
                "precision": "double",
                "branch_order": "7: smallest |Im| at the last grid point; 8, 9: remaining pair by Im descending there; continuity tracked",
            }),
        );
        return Ok((Table { headers, rows }, meta));
    }
    let (headers, rows, broken, candidates) = match cfg.precision {
        Precision::Double => sweep_rows(cfg, &s.parameter, &xs, &p)?,
        Precision::Quad => {
            let qs: Vec<QuadDouble> = xs.iter().map(|&x| QuadDouble::of(x)).collect();
            sweep_rows(cfg, &s.parameter, &qs, &p.cast())?
        }
    };
    let meta = metadata(
        "sweep",
        cfg,
        json!({
            "branch_order": "branch k starts as eigenvalue k in (re, im) order at the first grid point and is continued by nearest-neighbour matching",
            "broken": broken,
            "ep_candidates": candidates,
        }),
    );
    Ok((Table { headers, rows }, meta))
}

type SweepRows = (Vec<String>, Vec<Vec<f64>>, Vec<Value>, Vec<String>);

fn sweep_rows<T: Real>(
    cfg: &RunConfig,
    parameter: &str,
    xs: &[T],
    base: &ModelParams<T>,
) -> Result<SweepRows, CliError> {
    let r = sweep(builder(cfg), parameter, xs, base)?;
    let n = r.n_branches();
    let mut headers = vec![parameter.to_string()];
    headers.extend((1..=n).map(|k| format!("re_{k}")));
    headers.extend((1..=n).map(|k| format!("im_{k}")));
    let rows = (0..xs.len())
        .map(|g| {
            let col = r.column(g);
            let mut row = vec![xs[g].to_f64()];
            row.extend(col.iter().map(|z| z.re.to_f64()));
            row.extend(col.iter().map(|z| z.im.to_f64()));
            row
        })
        .collect();
    let broken = r
        .broken
        .iter()
        .map(|(g, msg)| json!({ "value": sci(xs[*g].to_f64()), "error": msg }))
        .collect();
    let candidates = r
        .ep_candidates
        .iter()
        .map(|&g| sci(xs[g].to_f64()))
        .collect();
    Ok((headers, rows, broken, candidates))
}

pub fn find_ep_cmd(cfg: &RunConfig) -> Result<Value, CliError> {
    let f = cfg.require_findep()?;
    let p = cfg.model_params()?;
    let mut options = FindEpOptions::target(f.target_mult);
    if let Some(g) = f.grid_points {
        options.grid_points = g;
    }
    if let Some(s) = f.max_seeds {
        options.max_seeds = s;
    }
    options.tol_cluster_rel = cfg.tolerances.tol_cluster_rel;
    options.tol_rank = cfg.tolerances.tol_rank;
    let (reports, seeds, certified) = match cfg.precision {
        Precision::Double => search(cfg, &p, &options)?,
        Precision::Quad => search(cfg, &p.cast::<QuadDouble>(), &options)?,
    };
    Ok(json!({
        "reports": reports,
        "seeds_refined": seeds,
        "seeds_certified": certified,
        "metadata": metadata("find-ep", cfg, json!({
            "cert_rel": sci(options.cert_rel),
            "merge_radius": sci(options.merge_radius),
            "max_evals": options.max_evals,
        })),
    }))
}

fn search<T: Real>(
    cfg: &RunConfig,
    p: &ModelParams<T>,
    options: &FindEpOptions,
) -> Result<(Vec<Value>, usize, usize), CliError> {
    let f = cfg.require_findep()?;
    let axes: Vec<SearchAxis<T>> = f
        .bounds
        .iter()
        .map(|a| SearchAxis::new(&a.parameter, T::of(a.lower), T::of(a.upper)))
        .collect();
    let found = find_ep(builder(cfg), p, &axes, options)?;
    let certified = found.seeds.iter().filter(|s| s.certified).count();
    Ok((
        found.reports.iter().map(report_json).collect(),
        found.seeds.len(),
        certified,
    ))
}

fn system(cfg: &RunConfig, p: &ModelParams<f64>) -> Result<LindbladSystem<f64>, CliError> {
    Ok(match cfg.model {
        ModelKind::Eff3 => build_eff3(p).map_err(SpectraError::from)?,
        ModelKind::Full4 => build_full4_rwa(p),
    })
}

fn initial_state(spec: &Rho0Spec, d: usize) -> Result<ComplexMatrix<f64>, CliError> {
    let bad = |msg: String| CliError::Schema(format!("evolve.rho0: {msg}"));
    match spec {
        Rho0Spec::BasisState(k) if *k < d => Ok(ComplexMatrix::unit(d, *k, *k)),
        Rho0Spec::BasisState(k) => Err(bad(format!("level {k} out of range for {d} levels"))),
        Rho0Spec::Diagonal(pops) => {
            if pops.len() != d {
                return Err(bad(format!("{} populations for {d} levels", pops.len())));
            }
            let total: f64 = pops.iter().sum();
            if pops.iter().any(|&x| !(x >= 0.0)) || !(total > 0.0) {
                return Err(bad(
                    "populations must be non-negative and not all zero".into()
                ));
            }
            let diag: Vec<Complex<f64>> =
                pops.iter().map(|&x| Complex::new(x / total, 0.0)).collect();
            Ok(ComplexMatrix::from_diag(&diag))
        }
        Rho0Spec::Matrix { re, im } => {
            let square = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
            if !square(re) || im.as_ref().is_some_and(|m| !square(m)) {
                return Err(bad(format!("matrix must be {d} x {d}")));
            }
            Ok(ComplexMatrix::from_fn(d, d, |i, j| {
                Complex::new(re[i][j], im.as_ref().map_or(0.0, |m| m[i][j]))
            }))
        }
    }
}

pub fn evolve_cmd(cfg: &RunConfig) -> Result<(Table, Value), CliError> {
    let e = cfg.require_evolve()?;
    let p = cfg.model_params()?;
    let d = cfg.dim();
    let rho0 = initial_state(&e.rho0, d)?;
    let sys = system(cfg, &p)?;
    let l = full_liouvillian(
        &sys,
        BasisTag {
            kind: cfg.basis,
            dim: d,
        },
    )
    .map_err(SpectraError::from)?;
    let times = linspace(0.0, e.t_max, e.steps + 1);
    let rows = times
        .par_iter()
        .map(|&t| {
            let r = evolve_check(&l, &rho0, t).map_err(|err| match err {
                SpectraError::InvalidState(msg) => CliError::Schema(format!("evolve.rho0: {msg}")),
                other => other.into(),
            })?;
            let mut row = vec![t, r.rho_expm.trace().re];
            row.extend(r.rho_expm.diag().iter().map(|z| z.re));
            row.push(r.difference.unwrap_or(f64::NAN));
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut headers = vec!["t".to_string(), "trace".to_string()];
    headers.extend((1..=d).map(|k| format!("pop_{k}")));
    headers.push("max_diff".into());
    let stationary = stationary_state(&l)?;
    let meta = metadata(
        "evolve",
        cfg,
        json!({
            "stationary_populations": stationary.diag().iter().map(|z| sci(z.re)).collect::<Vec<_>>(),
            "max_diff": "largest elementwise |rho_expm - rho_eig|; nan where the generator has no complete eigenbasis",
        }),
    );
    Ok((Table { headers, rows }, meta))
}

/// Runs every criterion in parallel and the robustness rerun.
pub fn validate_all() -> Vec<CheckResult> {
    let mut results: Vec<CheckResult> = (1..=TITLES.len())
        .into_par_iter()
        .filter_map(run_criterion)
        .collect();
    results.push(robustness());
    results
}
