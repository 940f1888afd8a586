//! Eigenvalue clustering and Jordan-structure analysis.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use super::classify::spectral_scale;
use super::SpectraError;
use crate::linalg::{dot, eig, svd, ComplexMatrix};
use crate::model::ModelParams;
use crate::scalar::{cabs, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyKind {
    /// One eigenvector for the whole cluster.
    Exceptional,
    /// A full set of independent eigenvectors.
    Diabolical,
    /// Several Jordan chains, at least one of length above one.
    Hybrid,
}

/// One cluster of (numerically) coincident eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct EPReport<T> {
    /// Parameters at which the matrix was built, when known.
    pub params: Option<ModelParams<T>>,
    pub cluster_value: Complex<T>,
    /// Positions in the sorted eigenvalue list.
    pub members: Vec<usize>,
    pub algebraic_mult: usize,
    pub geometric_mult: usize,
    /// Longest Jordan chain.
    pub order: usize,
    /// Jordan block sizes, descending.
    pub partition: Vec<usize>,
    pub kind: DegeneracyKind,
    /// Largest distance between two cluster members.
    pub gap_residual: T,
    /// Largest `|v_iᴴ v_j|` over distinct members' unit eigenvectors.
    pub vector_overlap: T,
    /// Another eigenvalue lies within twice the clustering radius, or the
    /// rank sequence does not account for the whole cluster.
    pub ambiguous: bool,
}

impl<T: Real> EPReport<T> {
    /// Whether the partition contains a Jordan block of exactly `size`.
    pub fn has_block(&self, size: usize) -> bool {
        self.partition.contains(&size)
    }

    pub fn to_json(&self) -> Value {
        let params = self
            .params
            .map(|p| serde_json::to_value(p.cast::<f64>()).unwrap_or(Value::Null));
        json!({
            "params": params,
            "cluster_value": [self.cluster_value.re.to_f64(), self.cluster_value.im.to_f64()],
            "members": self.members,
            "algebraic_mult": self.algebraic_mult,
            "geometric_mult": self.geometric_mult,
            "order": self.order,
            "partition": self.partition,
            "kind": self.kind,
            "gap_residual": self.gap_residual.to_f64(),
            "vector_overlap": self.vector_overlap.to_f64(),
            "ambiguous": self.ambiguous,
        })
    }
}

/// Single-linkage groups of indices whose values chain together within `radius`.
pub fn cluster_values<T: Real>(values: &[Complex<T>], radius: T) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if cabs(values[i] - values[j]) <= radius {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Dimensions of `null(Bᵏ)` for `k = 1, 2, …` until they stop growing or
/// reach `cap`. Each step solves for `x` with `Bx ∈ null(Bᵏ⁻¹)` through the
/// projected operator `(1 − PPᴴ)B`, so only `B` itself is ever factored.
fn nullity_sequence<T: Real>(b: &ComplexMatrix<T>, tol_rank: T, cap: usize) -> Vec<usize> {
    let n = b.rows();
    let sref = svd(b).singular_values.first().copied().unwrap_or(T::zero());
    let threshold = tol_rank * sref;
    let mut seq = Vec::new();
    let mut basis = ComplexMatrix::zeros(n, 0);
    let mut last = 0;
    loop {
        let projected = if basis.cols() == 0 {
            b.clone()
        } else {
            let p = &basis * &basis.adjoint();
            &(&ComplexMatrix::identity(n) - &p) * b
        };
        let s = svd(&projected);
        let rank = s.singular_values.iter().filter(|&&x| x > threshold).count();
        let nullity = (n - rank).min(cap);
        seq.push(nullity);
        if nullity <= last || nullity == cap {
            break;
        }
        last = nullity;
        basis = s.v.sub_matrix(0, n - nullity, n, nullity);
    }
    // a stalled step repeats the previous value; drop it
    if seq.len() > 1 && seq[seq.len() - 1] <= seq[seq.len() - 2] {
        seq.pop();
    }
    seq
}

/// Jordan block sizes from null-space dimensions `n₁ ≤ n₂ ≤ …`.
pub fn partition_from_nullities(nullities: &[usize]) -> Vec<usize> {
    let mut at_least = Vec::with_capacity(nullities.len());
    let mut prev = 0;
    for &nk in nullities {
        at_least.push(nk.saturating_sub(prev));
        prev = nk.max(prev);
    }
    // blocks of length ≥ k can only shrink with k
    for k in 1..at_least.len() {
        at_least[k] = at_least[k].min(at_least[k - 1]);
    }
    let mut sizes = Vec::new();
    for k in (0..at_least.len()).rev() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..at_least[k] - next {
            sizes.push(k + 1);
        }
    }
    sizes
}

/// Clusters the spectrum of `a` with radius `tol_cluster` and analyses
/// every cluster of two or more eigenvalues.
///
/// Geometric multiplicity and chain lengths come from the null spaces of
/// powers of `a − λ̄I`, with singular values below `tol_rank × σ_max` treated
/// as zero. Exceptional clusters report overlaps of the computed
/// eigenvectors; clusters with several chains report them for an
/// orthonormal eigenspace basis, eigenvectors being defined only up to
/// mixing there.
pub fn detect_degeneracy<T: Real>(
    a: &ComplexMatrix<T>,
    tol_cluster: T,
    tol_rank: T,
) -> Result<Vec<EPReport<T>>, SpectraError> {
    let n = a.rows();
    let decomposition = eig(a, false)?;
    let values = &decomposition.values;
    let clusters = cluster_values(values, tol_cluster);
    let mut reports = Vec::new();
    for members in clusters.into_iter().filter(|c| c.len() >= 2) {
        let m = members.len();
        let inv_m = T::one() / T::from_usize(m);
        let mean = members
            .iter()
            .fold(Complex::zero(), |acc: Complex<T>, &i| acc + values[i])
            * inv_m;

        let mut spread = T::zero();
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                spread = spread.max(cabs(values[i] - values[j]));
            }
        }
        let isolation = (0..n)
            .filter(|i| !members.contains(i))
            .map(|i| {
                members
                    .iter()
                    .map(|&j| cabs(values[i] - values[j]))
                    .fold(T::of(f64::INFINITY), |x, y| x.min(y))
            })
            .fold(T::of(f64::INFINITY), |x, y| x.min(y));

        let shifted = a - &ComplexMatrix::identity(n).scale(mean);
        let nullities = nullity_sequence(&shifted, tol_rank, m);
        let partition = partition_from_nullities(&nullities);
        let geometric = nullities.first().copied().unwrap_or(0).max(1);
        let order = partition.first().copied().unwrap_or(1);
        let accounted: usize = partition.iter().sum();

        let kind = if geometric >= m {
            DegeneracyKind::Diabolical
        } else if geometric == 1 {
            DegeneracyKind::Exceptional
        } else {
            DegeneracyKind::Hybrid
        };
        let vectors: Vec<Vec<Complex<T>>> = if kind == DegeneracyKind::Exceptional {
            members
                .iter()
                .map(|&i| decomposition.right_vectors.column(i))
                .collect()
        } else {
            let s = svd(&shifted);
            let v = &s.v;
            (n - geometric.min(n)..n).map(|c| v.column(c)).collect()
        };
        let mut overlap = T::zero();
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                overlap = overlap.max(cabs(dot(&vectors[i], &vectors[j])));
            }
        }

        reports.push(EPReport {
            params: None,
            cluster_value: mean,
            members,
            algebraic_mult: m,
            geometric_mult: geometric.min(m),
            order,
            partition,
            kind,
            gap_residual: spread,
            vector_overlap: overlap,
            ambiguous: isolation <= tol_cluster * T::of(2.0) || accounted != m,
        });
    }
    Ok(reports)
}

/// [`detect_degeneracy`] with radius `1e-6 × spectral scale` and rank
/// threshold `1e-7`.
pub fn detect_degeneracy_default<T: Real>(
    a: &ComplexMatrix<T>,
) -> Result<Vec<EPReport<T>>, SpectraError> {
    let values = crate::linalg::eigvals(a)?;
    detect_degeneracy(a, T::of(1e-6) * spectral_scale(&values), T::of(1e-7))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_from_nullities() {
        assert_eq!(partition_from_nullities(&[1, 2, 3]), vec![3]);
        assert_eq!(partition_from_nullities(&[3, 6, 8, 9]), vec![4, 3, 2]);
        assert_eq!(partition_from_nullities(&[3, 5, 7, 8, 9]), vec![5, 3, 1]);
        assert_eq!(partition_from_nullities(&[2]), vec![1, 1]);
        assert_eq!(partition_from_nullities(&[2, 3]), vec![2, 1]);
    }
}
