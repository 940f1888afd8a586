//! Parameter sweeps with continuity-tracked eigenvalue branches.

use std::fmt::Display;

use num_complex::Complex;
use rayon::prelude::*;

use super::classify::spectral_scale;
use super::SpectraError;
use crate::linalg::{eigvals, ComplexMatrix};
use crate::model::ModelParams;
use crate::scalar::{cabs, Real};

/// Eigenvalue branches along a one-parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<T> {
    pub parameter: String,
    pub grid: Vec<T>,
    /// `branches[b][g]` is branch `b` at grid point `g`; NaN at broken points.
    pub branches: Vec<Vec<Complex<T>>>,
    /// Grid indices whose builder or eigensolver failed, with the message.
    pub broken: Vec<(usize, String)>,
    /// Grid indices whose smallest pairwise gap is below `10 × tol_cluster`.
    pub ep_candidates: Vec<usize>,
    /// Smallest pairwise gap at each grid point (NaN when broken).
    pub min_gaps: Vec<T>,
}

impl<T: Real> SweepResult<T> {
    pub fn n_branches(&self) -> usize {
        self.branches.len()
    }

    /// The eigenvalues at one grid point in branch order.
    pub fn column(&self, g: usize) -> Vec<Complex<T>> {
        self.branches.iter().map(|b| b[g]).collect()
    }
}

/// Assignment `prev[i] ↔ cur[perm[i]]` with small total distance: greedy
/// closest pairs first, then pairwise swaps while they lower the total.
pub fn match_consecutive<T: Real>(prev: &[Complex<T>], cur: &[Complex<T>]) -> Vec<usize> {
    let n = prev.len();
    let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &p) in prev.iter().enumerate() {
        for (j, &c) in cur.iter().enumerate() {
            pairs.push((cabs(p - c), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (_, i, j) in pairs {
        if perm[i] == usize::MAX && !taken[j] {
            perm[i] = j;
            taken[j] = true;
        }
    }
    let mut improved = true;
    let mut rounds = 0;
    while improved && rounds < 4 * n {
        improved = false;
        rounds += 1;
        for a in 0..n {
            for b in a + 1..n {
                let now = cabs(prev[a] - cur[perm[a]]) + cabs(prev[b] - cur[perm[b]]);
                let swapped = cabs(prev[a] - cur[perm[b]]) + cabs(prev[b] - cur[perm[a]]);
                if swapped < now {
                    perm.swap(a, b);
                    improved = true;
                }
            }
        }
    }
    perm
}

/// Orders each column to continue the branches of the last good column.
/// `None` columns are left as NaN and skipped over.
pub fn track_branches<T: Real>(columns: &[Option<Vec<Complex<T>>>]) -> Vec<Vec<Complex<T>>> {
    let n = columns.iter().flatten().map(|c| c.len()).max().unwrap_or(0);
    let nan = Complex::new(T::of(f64::NAN), T::of(f64::NAN));
    let mut branches = vec![vec![nan; columns.len()]; n];
    let mut last: Option<Vec<Complex<T>>> = None;
    for (g, col) in columns.iter().enumerate() {
        let Some(cur) = col else { continue };
        if cur.len() != n {
            continue;
        }
        let ordered: Vec<Complex<T>> = match &last {
            None => cur.clone(),
            Some(prev) => match_consecutive(prev, cur)
                .iter()
                .map(|&j| cur[j])
                .collect(),
        };
        for (b, &v) in ordered.iter().enumerate() {
            branches[b][g] = v;
        }
        last = Some(ordered);
    }
    branches
}

pub fn min_pairwise_gap<T: Real>(values: &[Complex<T>]) -> T {
    let mut best = T::of(f64::INFINITY);
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            best = best.min(cabs(a - b));
        }
    }
    best
}

/// Evaluates `builder` at `base` with `parameter` set to each grid value,
/// in parallel, and tracks the eigenvalue branches.
pub fn sweep<T, F, E>(
    builder: F,
    parameter: &str,
    grid: &[T],
    base: &ModelParams<T>,
) -> Result<SweepResult<T>, SpectraError>
where
    T: Real,
    F: Fn(&ModelParams<T>) -> Result<ComplexMatrix<T>, E> + Sync,
    E: Display,
{
    if grid.len() < 2 {
        return Err(SpectraError::InvalidGrid(
            "a sweep needs at least two points".into(),
        ));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SpectraError::InvalidGrid(
            "grid must be strictly ascending".into(),
        ));
    }
    base.get(parameter)?;

    let evaluated: Vec<Result<Vec<Complex<T>>, String>> = grid
        .par_iter()
        .map(|&x| {
            let p = base.with_param(parameter, x).map_err(|e| e.to_string())?;
            let m = builder(&p).map_err(|e| e.to_string())?;
            eigvals(&m).map_err(|e| e.to_string())
        })
        .collect();

    let mut broken = Vec::new();
    let mut columns = Vec::with_capacity(grid.len());
    for (g, r) in evaluated.into_iter().enumerate() {
        match r {
            Ok(v) => columns.push(Some(v)),
            Err(msg) => {
                log::warn!("{parameter} = {}: {msg}", grid[g]);
                broken.push((g, msg));
                columns.push(None);
            }
        }
    }
    let min_gaps: Vec<T> = columns
        .iter()
        .map(|c| c.as_ref().map_or(T::of(f64::NAN), |v| min_pairwise_gap(v)))
        .collect();
    let ep_candidates = columns
        .iter()
        .enumerate()
        .filter_map(|(g, c)| {
            let v = c.as_ref()?;
            let threshold = T::of(10.0) * T::of(1e-6) * spectral_scale(v);
            (min_gaps[g] < threshold).then_some(g)
        })
        .collect();
    let branches = track_branches(&columns);
    Ok(SweepResult {
        parameter: parameter.to_string(),
        grid: grid.to_vec(),
        branches,
        broken,
        ep_candidates,
        min_gaps,
    })
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace<T: Real>(start: T, stop: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![start];
    }
    let step = (stop - start) / T::from_usize(n - 1);
    (0..n).map(|k| start + step * T::from_usize(k)).collect()
}
