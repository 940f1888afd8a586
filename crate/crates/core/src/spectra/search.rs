//! Exceptional-point search by gap minimisation.

use std::fmt::Display;

use num_complex::Complex;
use rayon::prelude::*;

use super::classify::spectral_scale;
use super::degeneracy::{detect_degeneracy, EPReport};
use super::SpectraError;
use crate::linalg::{eigvals, ComplexMatrix};
use crate::model::ModelParams;
use crate::scalar::{cabs, Real};

/// One searched parameter and its closed range.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchAxis<T> {
    pub name: String,
    pub lower: T,
    pub upper: T,
}

impl<T: Real> SearchAxis<T> {
    pub fn new(name: &str, lower: T, upper: T) -> Self {
        Self {
            name: name.to_string(),
            lower,
            upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FindEpOptions {
    /// Number of eigenvalues that should coalesce.
    pub target_mult: usize,
    /// Coarse grid points per axis.
    pub grid_points: usize,
    /// Grid minima refined, best first.
    pub max_seeds: usize,
    /// Objective evaluations allowed per seed.
    pub max_evals: usize,
    /// Certification threshold on the gap objective, relative to spectral scale.
    pub cert_rel: f64,
    /// Clustering radius for certification, relative to spectral scale.
    pub tol_cluster_rel: f64,
    pub tol_rank: f64,
    /// Minima closer than this (in box-normalised coordinates) are one EP.
    pub merge_radius: f64,
}

impl Default for FindEpOptions {
    fn default() -> Self {
        Self {
            target_mult: 2,
            grid_points: 17,
            max_seeds: 8,
            max_evals: 3000,
            cert_rel: 1e-6,
            tol_cluster_rel: 1e-6,
            tol_rank: 1e-7,
            merge_radius: 1e-6,
        }
    }
}

impl FindEpOptions {
    pub fn target(target_mult: usize) -> Self {
        Self {
            target_mult,
            ..Self::default()
        }
    }
}

/// Where one refinement started and ended.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedOutcome<T> {
    pub start: Vec<T>,
    pub end: Vec<T>,
    pub gap: T,
    pub scale: T,
    pub evals: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpSearch<T> {
    /// One certified report per distinct minimum, ordered along the first axis.
    pub reports: Vec<EPReport<T>>,
    pub seeds: Vec<SeedOutcome<T>>,
}

/// Sum of the `C(m, 2)` smallest pairwise distances (the smallest one for `m = 2`).
pub fn gap_objective<T: Real>(values: &[Complex<T>], target_mult: usize) -> T {
    let mut gaps: Vec<T> = Vec::with_capacity(values.len() * values.len() / 2);
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            gaps.push(cabs(a - b));
        }
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let k = (target_mult * target_mult.saturating_sub(1) / 2).max(1);
    gaps.iter().take(k).fold(T::zero(), |acc, &g| acc + g)
}

struct Problem<'a, T, F> {
    builder: &'a F,
    base: &'a ModelParams<T>,
    axes: &'a [SearchAxis<T>],
    target: usize,
}

impl<T, F, E> Problem<'_, T, F>
where
    T: Real,
    F: Fn(&ModelParams<T>) -> Result<ComplexMatrix<T>, E> + Sync,
    E: Display,
{
    fn point(&self, u: &[T]) -> Vec<T> {
        self.axes
            .iter()
            .zip(u)
            .map(|(a, &x)| {
                let x = x.max(T::zero()).min(T::one());
                a.lower + (a.upper - a.lower) * x
            })
            .collect()
    }

    fn params(&self, x: &[T]) -> Result<ModelParams<T>, SpectraError> {
        let mut p = *self.base;
        for (a, &v) in self.axes.iter().zip(x) {
            p = p.with_param(&a.name, v)?;
        }
        Ok(p)
    }

    fn matrix(&self, x: &[T]) -> Result<ComplexMatrix<T>, SpectraError> {
        let p = self.params(x)?;
        (self.builder)(&p).map_err(|e| SpectraError::Builder(e.to_string()))
    }

    /// Gap objective and spectral scale; infinite where the builder fails.
    fn eval(&self, u: &[T]) -> (T, T) {
        let x = self.point(u);
        match self.matrix(&x).and_then(|m| Ok(eigvals(&m)?)) {
            Ok(v) => (gap_objective(&v, self.target), spectral_scale(&v)),
            Err(_) => (T::of(f64::INFINITY), T::one()),
        }
    }
}

/// Grid indices of a `points^dim` lattice in row-major order.
fn lattice(dim: usize, points: usize) -> Vec<Vec<usize>> {
    let total = points.pow(dim as u32);
    (0..total)
        .map(|mut k| {
            let mut idx = vec![0; dim];
            for d in (0..dim).rev() {
                idx[d] = k % points;
                k /= points;
            }
            idx
        })
        .collect()
}

fn flat_index(idx: &[usize], points: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * points + i)
}

/// Lattice points no worse than any neighbour (including diagonals).
fn local_minima<T: Real>(values: &[T], dim: usize, points: usize) -> Vec<usize> {
    let cells = lattice(dim, points);
    let mut out = Vec::new();
    for (k, idx) in cells.iter().enumerate() {
        let mut is_min = values[k].is_finite();
        for offset in lattice(dim, 3) {
            if !is_min {
                break;
            }
            let mut nb = Vec::with_capacity(dim);
            let mut inside = true;
            for d in 0..dim {
                let v = idx[d] as isize + offset[d] as isize - 1;
                if v < 0 || v >= points as isize {
                    inside = false;
                    break;
                }
                nb.push(v as usize);
            }
            if !inside || nb == *idx {
                continue;
            }
            if values[flat_index(&nb, points)] < values[k] {
                is_min = false;
            }
        }
        if is_min {
            out.push(k);
        }
    }
    out
}

/// [`nelder_mead`] restarted from its best point with a fresh simplex while
/// that keeps lowering the objective. Near an EP3 the gap objective has a
/// curved valley in which a single simplex tends to collapse early.
fn refine<T: Real>(
    f: impl Fn(&[T]) -> T,
    start: &[T],
    step: T,
    stop_below: T,
    max_evals: usize,
) -> (Vec<T>, T, usize) {
    let (mut best, mut value, mut evals) = nelder_mead(&f, start, step, stop_below, max_evals);
    for _ in 0..MAX_RESTARTS {
        if value <= stop_below || evals >= max_evals {
            break;
        }
        let (u, fu, used) = nelder_mead(&f, &best, step, stop_below, max_evals - evals);
        evals += used;
        if !(fu < value) {
            break;
        }
        best = u;
        value = fu;
    }
    (best, value, evals)
}

const MAX_RESTARTS: usize = 12;

/// Nelder–Mead on the unit box. Stops when the objective drops below
/// `stop_below`, the simplex collapses, or `max_evals` is reached.
fn nelder_mead<T: Real>(
    f: impl Fn(&[T]) -> T,
    start: &[T],
    step: T,
    stop_below: T,
    max_evals: usize,
) -> (Vec<T>, T, usize) {
    let n = start.len();
    let clamp = |v: Vec<T>| -> Vec<T> {
        v.into_iter()
            .map(|x| x.max(T::zero()).min(T::one()))
            .collect()
    };
    let mut simplex: Vec<Vec<T>> = vec![start.to_vec()];
    for d in 0..n {
        let mut v = start.to_vec();
        v[d] = if v[d] + step <= T::one() {
            v[d] + step
        } else {
            v[d] - step
        };
        simplex.push(v);
    }
    let mut fv: Vec<T> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let xtol = T::epsilon() * T::of(4.0);
    let (alpha, gamma, rho, sigma) = (T::one(), T::of(2.0), T::of(0.5), T::of(0.5));
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| {
            fv[a]
                .partial_cmp(&fv[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        fv = order.iter().map(|&i| fv[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
            })
            .fold(T::zero(), |m, d| m.max(d));
        if fv[0] <= stop_below || diameter <= xtol || evals >= max_evals {
            return (simplex[0].clone(), fv[0], evals);
        }

        let inv_n = T::one() / T::from_usize(n);
        let centroid: Vec<T> = (0..n)
            .map(|d| simplex[..n].iter().fold(T::zero(), |acc, v| acc + v[d]) * inv_n)
            .collect();
        let towards = |coef: T| -> Vec<T> {
            clamp(
                (0..n)
                    .map(|d| centroid[d] + (simplex[n][d] - centroid[d]) * coef)
                    .collect(),
            )
        };
        let reflected = towards(-alpha);
        let fr = f(&reflected);
        evals += 1;
        if fr < fv[0] {
            let expanded = towards(-gamma);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                fv[n] = fe;
            } else {
                simplex[n] = reflected;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            simplex[n] = reflected;
            fv[n] = fr;
        } else {
            let contracted = if fr < fv[n] {
                towards(-rho)
            } else {
                towards(rho)
            };
            let fc = f(&contracted);
            evals += 1;
            if fc < fv[n].min(fr) {
                simplex[n] = contracted;
                fv[n] = fc;
            } else {
                for i in 1..=n {
                    let shrunk: Vec<T> = (0..n)
                        .map(|d| simplex[0][d] + (simplex[i][d] - simplex[0][d]) * sigma)
                        .collect();
                    fv[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
                evals += n;
            }
        }
    }
}

/// Start, end, gap, scale and evaluation count of one refined seed.
type Refined<T> = (Vec<T>, Vec<T>, T, T, usize);

/// Searches a 1- or 2-parameter box around `base` for points where
/// `opts.target_mult` eigenvalues of `builder` coalesce.
///
/// The gap objective is sampled on a coarse lattice; its local minima seed
/// Nelder–Mead refinements. A refined minimum counts when the objective is
/// below `cert_rel × spectral scale` and [`detect_degeneracy`] finds a
/// cluster of at least `target_mult` eigenvalues there. Seeds that do not
/// get that far are returned uncertified rather than as errors.
pub fn find_ep<T, F, E>(
    builder: F,
    base: &ModelParams<T>,
    axes: &[SearchAxis<T>],
    opts: &FindEpOptions,
) -> Result<EpSearch<T>, SpectraError>
where
    T: Real,
    F: Fn(&ModelParams<T>) -> Result<ComplexMatrix<T>, E> + Sync,
    E: Display,
{
    if axes.is_empty() || axes.len() > 2 {
        return Err(SpectraError::InvalidBox(format!(
            "expected 1 or 2 axes, got {}",
            axes.len()
        )));
    }
    for a in axes {
        base.get(&a.name)?;
        if !(a.lower < a.upper) {
            return Err(SpectraError::InvalidBox(format!(
                "axis `{}` has an empty range",
                a.name
            )));
        }
    }
    if opts.target_mult < 2 {
        return Err(SpectraError::InvalidBox(
            "target multiplicity must be at least 2".into(),
        ));
    }
    let points = opts.grid_points.max(3);
    let problem = Problem {
        builder: &builder,
        base,
        axes,
        target: opts.target_mult,
    };
    let dim = axes.len();
    let cells = lattice(dim, points);
    let h = T::one() / T::from_usize(points - 1);
    let unit = |idx: &[usize]| -> Vec<T> { idx.iter().map(|&i| h * T::from_usize(i)).collect() };
    let coarse: Vec<T> = cells
        .par_iter()
        .map(|idx| problem.eval(&unit(idx)).0)
        .collect();

    let mut minima = local_minima(&coarse, dim, points);
    minima.sort_by(|&a, &b| {
        coarse[a]
            .partial_cmp(&coarse[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    minima.truncate(opts.max_seeds);

    let cert = T::of(opts.cert_rel);
    let refined: Vec<Refined<T>> = minima
        .par_iter()
        .map(|&k| {
            let start = unit(&cells[k]);
            let scale0 = problem.eval(&start).1;
            let stop = cert * scale0 * T::of(1e-3);
            let (u, gap, evals) = refine(|u| problem.eval(u).0, &start, h, stop, opts.max_evals);
            let scale = problem.eval(&u).1;
            (start, u, gap, scale, evals)
        })
        .collect();

    let mut seeds = Vec::new();
    let mut accepted: Vec<(Vec<T>, EPReport<T>)> = Vec::new();
    for (start, u, gap, scale, evals) in refined {
        let x = problem.point(&u);
        let mut certified = false;
        if gap < cert * scale {
            let duplicate = accepted.iter().any(|(v, _)| {
                v.iter()
                    .zip(&u)
                    .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
                    <= T::of(opts.merge_radius)
            });
            if duplicate {
                certified = true;
            } else if let Some(report) = certify(&problem, &x, scale, opts)? {
                accepted.push((u.clone(), report));
                certified = true;
            }
        }
        if !certified {
            log::debug!(
                "seed at {:?} stopped with gap {gap:e}",
                x.iter().map(|v| v.to_f64()).collect::<Vec<_>>()
            );
        }
        seeds.push(SeedOutcome {
            start: problem.point(&start),
            end: x,
            gap,
            scale,
            evals,
            certified,
        });
    }
    accepted.sort_by(|a, b| {
        a.0[0]
            .partial_cmp(&b.0[0])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(EpSearch {
        reports: accepted.into_iter().map(|(_, r)| r).collect(),
        seeds,
    })
}

fn certify<T, F, E>(
    problem: &Problem<'_, T, F>,
    x: &[T],
    scale: T,
    opts: &FindEpOptions,
) -> Result<Option<EPReport<T>>, SpectraError>
where
    T: Real,
    F: Fn(&ModelParams<T>) -> Result<ComplexMatrix<T>, E> + Sync,
    E: Display,
{
    let m = problem.matrix(x)?;
    let reports = detect_degeneracy(
        &m,
        T::of(opts.tol_cluster_rel) * scale,
        T::of(opts.tol_rank),
    )?;
    let best = reports
        .into_iter()
        .filter(|r| r.algebraic_mult >= opts.target_mult)
        .min_by(|a, b| {
            a.gap_residual
                .partial_cmp(&b.gap_residual)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
    Ok(best.map(|mut r| {
        r.params = problem.params(x).ok();
        r
    }))
}

/// Evaluation budget per seed in the census's wide EP3 box, which only
/// has to bring seeds close enough for the local retry.
const WIDE_EVALS: usize = 800;

/// Relative gap below which a stalled census seed is worth a second search.
const RETRY_BELOW: f64 = 1e-2;

/// Degeneracy count along one parameter line, with coalescences of three
/// or more located to within `resolution` on a second parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Census<T> {
    /// Certified second-order points not absorbed into a higher one.
    pub ep2: Vec<EPReport<T>>,
    /// Certified third-order points within the resolution window.
    pub ep3: Vec<EPReport<T>>,
}

/// Lattice size for the census's 1-D EP2 search. Near an EP2 the gap grows
/// like the square root of the distance, so neighbouring basins are narrow
/// and the default lattice can step over one of them.
pub const CENSUS_LINE_POINTS: usize = 241;

/// Counts EP2 and EP3 of `builder` along `line` at fixed `base`.
///
/// EP3 are searched on the 2-D box `line × [c − resolution, c + resolution]`
/// where `c` is `base`'s value of `window_param`, since a triple coalescence
/// is a point in the plane and a stated coordinate is only known to its
/// rounding. Seeds that stall in that long thin box within `10⁻²` of the
/// spectral scale, and every EP2 found on the line, are followed up on a box
/// `±4 × resolution` along the line. An EP2 within `10⁻³` of the line's span
/// from an EP3 location is part of it.
pub fn census<T, F, E>(
    builder: F,
    base: &ModelParams<T>,
    line: &SearchAxis<T>,
    window_param: &str,
    resolution: T,
) -> Result<Census<T>, SpectraError>
where
    T: Real,
    F: Fn(&ModelParams<T>) -> Result<ComplexMatrix<T>, E> + Sync,
    E: Display,
{
    let centre = base.get(window_param)?;
    let window = SearchAxis::new(window_param, centre - resolution, centre + resolution);
    let span = line.upper - line.lower;
    let absorb = T::of(1e-3) * span;
    let near = |found: &[EPReport<T>], at: T| {
        found.iter().any(|e| {
            e.params
                .and_then(|q| q.get(&line.name).ok())
                .is_some_and(|v| (v - at).abs() <= absorb)
        })
    };

    let line_opts = FindEpOptions {
        grid_points: CENSUS_LINE_POINTS,
        max_seeds: 16,
        ..FindEpOptions::target(2)
    };
    let two = find_ep(&builder, base, std::slice::from_ref(line), &line_opts)?;
    let wide = find_ep(
        &builder,
        base,
        &[line.clone(), window.clone()],
        &FindEpOptions {
            max_evals: WIDE_EVALS,
            ..FindEpOptions::target(3)
        },
    )?;

    // The wide box is far longer along the line than across it, so seeds
    // tend to stall there. Retry on boxes of comparable sides around
    // stalled seeds and around every EP2, since EP2 merge into an EP3.
    let mut retry: Vec<T> = wide
        .seeds
        .iter()
        .filter(|s| !s.certified && s.gap < T::of(RETRY_BELOW) * s.scale)
        .map(|s| s.end[0])
        .collect();
    retry.extend(
        two.reports
            .iter()
            .filter_map(|r| r.params.and_then(|p| p.get(&line.name).ok())),
    );
    let mut ep3 = wide.reports;
    let half = resolution * T::of(4.0);
    let local_opts = FindEpOptions {
        max_seeds: 2,
        ..FindEpOptions::target(3)
    };
    for at in retry {
        if near(&ep3, at) {
            continue;
        }
        let local = SearchAxis::new(
            &line.name,
            (at - half).max(line.lower),
            (at + half).min(line.upper),
        );
        let found = find_ep(&builder, base, &[local, window.clone()], &local_opts)?;
        for r in found.reports {
            let at = r.params.and_then(|p| p.get(&line.name).ok());
            if at.is_some_and(|v| !near(&ep3, v)) {
                ep3.push(r);
            }
        }
    }
    let ep2 = two
        .reports
        .into_iter()
        .filter(|r| {
            let Some(p) = r.params else { return true };
            !near(&ep3, p.get(&line.name).unwrap_or(T::zero()))
        })
        .collect();
    Ok(Census { ep2, ep3 })
}
