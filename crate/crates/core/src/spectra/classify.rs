//! Eigenvalue classes and pairwise splittings.

use num_complex::Complex;
use serde::Serialize;

use crate::scalar::{cabs, Real};

/// Dynamical character of a generator eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigKind {
    Stationary,
    PureOscillation,
    PureDecay,
    DampedOscillation,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigClass<T> {
    pub value: Complex<T>,
    pub class: EigKind,
}

/// Largest pairwise distance, or the largest modulus for a single value.
/// Falls back to one for an all-zero spectrum.
pub fn spectral_scale<T: Real>(values: &[Complex<T>]) -> T {
    let mut s = T::zero();
    for (i, &a) in values.iter().enumerate() {
        s = s.max(cabs(a));
        for &b in &values[i + 1..] {
            s = s.max(cabs(a - b));
        }
    }
    if s == T::zero() {
        T::one()
    } else {
        s
    }
}

/// Default classification threshold, `1e-8 × spectral_scale`.
pub fn default_tol_class<T: Real>(values: &[Complex<T>]) -> T {
    T::of(1e-8) * spectral_scale(values)
}

/// Default clustering radius, `1e-6 × spectral_scale`.
pub fn default_tol_cluster<T: Real>(values: &[Complex<T>]) -> T {
    T::of(1e-6) * spectral_scale(values)
}

pub fn classify_value<T: Real>(value: Complex<T>, tol_class: T) -> EigKind {
    let flat_re = value.re.abs() <= tol_class;
    let flat_im = value.im.abs() <= tol_class;
    if value.re > tol_class {
        EigKind::Unstable
    } else if flat_re && flat_im {
        EigKind::Stationary
    } else if flat_re {
        EigKind::PureOscillation
    } else if flat_im {
        EigKind::PureDecay
    } else {
        EigKind::DampedOscillation
    }
}

pub fn classify<T: Real>(values: &[Complex<T>], tol_class: T) -> Vec<EigClass<T>> {
    values
        .iter()
        .map(|&value| EigClass {
            value,
            class: classify_value(value, tol_class),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Splitting {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
}

/// `Re` and `Im` of `λ_i − λ_j` for all `i < j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingTable {
    pub n: usize,
    pub pairs: Vec<Splitting>,
}

impl SplittingTable {
    /// `(ΔE^R, ΔE^I)` for any ordered pair, antisymmetric in its arguments.
    pub fn get(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        if i >= self.n || j >= self.n {
            return None;
        }
        if i == j {
            return Some((0.0, 0.0));
        }
        let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        // pairs are stored row-major over the upper triangle
        let idx = a * self.n - a * (a + 1) / 2 + (b - a - 1);
        let s = &self.pairs[idx];
        Some((sign * s.re, sign * s.im))
    }
}

pub fn splittings<T: Real>(values: &[Complex<T>]) -> SplittingTable {
    let n = values.len();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = values[i] - values[j];
            pairs.push(Splitting {
                i,
                j,
                re: d.re.to_f64(),
                im: d.im.to_f64(),
            });
        }
    }
    SplittingTable { n, pairs }
}
