use num_complex::Complex;

use crate::linalg::ComplexMatrix;
use crate::scalar::{cabs, Real};

/// Index map `i ↦ perm[i]` with signs, acting as `B = P A Pᵀ`
/// where `P[perm[i]][i] = signs[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn apply<T: Real>(&self, a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let n = a.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let s = T::of(f64::from(self.signs[i] * self.signs[j]));
                out[(self.perm[i], self.perm[j])] = a[(i, j)] * s;
            }
        }
        out
    }
}

/// Searches for a signed permutation with `P A Pᵀ = B` entrywise within
/// `tol`. With `pin_last`, the last index maps to itself (its sign is free).
/// Depth-first with consistency pruning; fine for n up to a dozen or so.
pub fn signed_permutation_equivalence<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    pin_last: bool,
    tol: T,
) -> Option<SignedPermutation> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n || b.cols() != n {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut signs = vec![0i8; n];
    let mut used = vec![false; n];
    if search(a, b, 0, pin_last, tol, &mut perm, &mut signs, &mut used) {
        Some(SignedPermutation { perm, signs })
    } else {
        None
    }
}

fn close<T: Real>(x: Complex<T>, y: Complex<T>, tol: T) -> bool {
    cabs(x - y) <= tol
}

#[allow(clippy::too_many_arguments)]
fn search<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    i: usize,
    pin_last: bool,
    tol: T,
    perm: &mut [usize],
    signs: &mut [i8],
    used: &mut [bool],
) -> bool {
    let n = a.rows();
    if i == n {
        return true;
    }
    let targets: Vec<usize> = if pin_last && i + 1 == n {
        vec![n - 1]
    } else {
        (0..n).filter(|&t| !(pin_last && t == n - 1)).collect()
    };
    // the overall sign is a gauge freedom; fix it on the first index
    let sign_choices: &[i8] = if i == 0 { &[1] } else { &[1, -1] };
    for &t in &targets {
        if used[t] || !close(a[(i, i)], b[(t, t)], tol) {
            continue;
        }
        for &s in sign_choices {
            let consistent = (0..i).all(|k| {
                let sk = T::of(f64::from(s * signs[k]));
                close(a[(i, k)] * sk, b[(t, perm[k])], tol)
                    && close(a[(k, i)] * sk, b[(perm[k], t)], tol)
            });
            if !consistent {
                continue;
            }
            perm[i] = t;
            signs[i] = s;
            used[t] = true;
            if search(a, b, i + 1, pin_last, tol, perm, signs, used) {
                return true;
            }
            used[t] = false;
        }
    }
    perm[i] = usize::MAX;
    false
}
