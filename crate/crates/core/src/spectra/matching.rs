//! Optimal pairing of two eigenvalue multisets.

use num_complex::Complex;

use crate::scalar::{cabs, Real};

/// Assignment `a[i] ↔ b[perm[i]]` minimising the largest pair distance,
/// together with that distance.
pub fn bottleneck_matching(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    levels.dedup();
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut best = perfect_matching(cost, levels[hi])
        .expect("complete bipartite graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(cost, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    (best, levels[hi])
}

/// Kuhn's augmenting-path matching restricted to edges with cost ≤ `limit`.
fn perfect_matching(cost: &[Vec<f64>], limit: f64) -> Option<Vec<usize>> {
    let n = cost.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, cost, limit, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, o) in owner.iter().enumerate() {
        perm[o.expect("matching is perfect")] = j;
    }
    Some(perm)
}

fn augment(
    i: usize,
    cost: &[Vec<f64>],
    limit: f64,
    seen: &mut [bool],
    owner: &mut [Option<usize>],
) -> bool {
    for j in 0..cost.len() {
        if cost[i][j] <= limit && !seen[j] {
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, cost, limit, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
    }
    false
}

/// Largest pair distance under the optimal pairing of two equal-size
/// multisets. Unequal sizes give infinity.
pub fn multiset_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    if a.len() != b.len() {
        return T::of(f64::INFINITY);
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|&x| b.iter().map(|&y| cabs(x - y).to_f64()).collect())
        .collect();
    let (perm, _) = bottleneck_matching(&cost);
    perm.iter()
        .enumerate()
        .map(|(i, &j)| cabs(a[i] - b[j]))
        .fold(T::zero(), |m, d| m.max(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_small_maximum() {
        let cost = vec![vec![1.0, 2.0], vec![0.5, 10.0]];
        let (perm, d) = bottleneck_matching(&cost);
        assert_eq!(perm, vec![1, 0]);
        assert_eq!(d, 2.0);
    }

    #[test]
    fn multiset_distance_ignores_order() {
        let a = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)];
        let b = [Complex::new(0.0, 1.0), Complex::new(1.0, 1e-9)];
        assert!(multiset_distance(&a, &b) <= 1e-9);
    }
}
