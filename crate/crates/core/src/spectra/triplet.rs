//! The `q`-dependent eigenvalue triplet of the resonant hybrid Liouvillian.

use num_complex::Complex;

use super::matching::bottleneck_matching;
use super::sweep::{sweep, track_branches, SweepResult};
use super::SpectraError;
use crate::analytic::q_independent_spectrum;
use crate::model::{build_eff3, ModelParams};
use crate::superop::{hybrid_liouvillian, BasisTag};

/// `λ₇, λ₈, λ₉` along a `J` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TripletTrack {
    pub grid: Vec<f64>,
    pub lambda7: Vec<Complex<f64>>,
    pub lambda8: Vec<Complex<f64>>,
    pub lambda9: Vec<Complex<f64>>,
    /// Branch indices of `λ₇, λ₈, λ₉` in `sweep`.
    /// All nine eigenvalues along the grid.
    pub sweep: SweepResult<f64>,
}

impl TripletTrack {
    /// `Re(λ_a − λ_b)` at every grid point for labels `a, b ∈ {7, 8, 9}`.
    pub fn real_splitting(&self, a: usize, b: usize) -> Vec<f64> {
        let pick = |k: usize| match k {
            7 => &self.lambda7,
            8 => &self.lambda8,
            _ => &self.lambda9,
        };
        pick(a)
            .iter()
            .zip(pick(b))
            .map(|(x, y)| x.re - y.re)
            .collect()
    }
}

/// The three values of `column` left after matching away the six
/// `q`-independent eigenvalues at coupling `j`.
fn triplet_at(column: &[Complex<f64>], omega: f64, j: f64) -> Vec<Complex<f64>> {
    let fixed = q_independent_spectrum(omega, j);
    // rows past the six fixed values are free slots for the triplet
    let cost: Vec<Vec<f64>> = (0..column.len())
        .map(|r| {
            column
                .iter()
                .map(|&v| {
                    if r < fixed.len() {
                        (v - fixed[r]).norm()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let (perm, _) = bottleneck_matching(&cost);
    perm[fixed.len()..].iter().map(|&k| column[k]).collect()
}

/// Tracks the three eigenvalues that depend on `q`. At every grid point the
/// six `q`-independent values are matched away and the remaining three are
/// continued from the previous point.
///
/// Labels are fixed at the last grid point: `λ₇` is the member closest to
/// the real axis, `λ₈` and `λ₉` the others by decreasing imaginary part.
pub fn track_hybrid_triplet(
    omega: f64,
    q: f64,
    grid: &[f64],
) -> Result<TripletTrack, SpectraError> {
    let builder = |p: &ModelParams<f64>| -> Result<_, SpectraError> {
        let sys = build_eff3(p)?;
        Ok(hybrid_liouvillian(&sys, q, BasisTag::gell_mann(3))?.matrix)
    };
    let base = ModelParams::tuned(omega, grid.first().copied().unwrap_or(0.0));
    let result = sweep(builder, "j", grid, &base)?;
    if !result.broken.is_empty() {
        return Err(SpectraError::Builder(format!(
            "{} grid points failed",
            result.broken.len()
        )));
    }
    let columns: Vec<Option<Vec<Complex<f64>>>> = grid
        .iter()
        .enumerate()
        .map(|(g, &j)| Some(triplet_at(&result.column(g), omega, j)))
        .collect();
    let mut branches = track_branches(&columns);

    let last = grid.len() - 1;
    branches.sort_by(|a, b| a[last].im.abs().total_cmp(&b[last].im.abs()));
    if branches[1][last].im < branches[2][last].im {
        branches.swap(1, 2);
    }
    let mut it = branches.into_iter();
    let (lambda7, lambda8, lambda9) = (
        it.next().unwrap_or_default(),
        it.next().unwrap_or_default(),
        it.next().unwrap_or_default(),
    );
    Ok(TripletTrack {
        grid: grid.to_vec(),
        lambda7,
        lambda8,
        lambda9,
        sweep: result,
    })
}
