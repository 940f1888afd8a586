//! One-sided Jacobi SVD: rank, singular values and null spaces.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::scalar::{cabs, Real};

/// Singular values (descending) and the right singular vectors as columns
/// of `v`, in the same order.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

/// Hestenes iteration: rotate column pairs of `A V` until mutually
/// orthogonal, accumulating `V`.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Svd<T> {
    let m = a.rows();
    let n = a.cols();
    // columns stored contiguously
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex::zero(); n];
            e[j] = Complex::one();
            e
        })
        .collect();
    let tol = T::epsilon() * T::from_usize(m.max(1));
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = cols[p]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .fold(T::zero(), |s, x| s + x);
                let beta: T = cols[q]
                    .iter()
                    .map(|z| z.norm_sqr())
                    .fold(T::zero(), |s, x| s + x);
                let gamma = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(Complex::<T>::zero(), |s, (&x, &y)| s + x.conj() * y);
                let g = cabs(gamma);
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = {
                    // ζ² can overflow once a column has all but vanished
                    let r = if zeta.abs() > T::of(1e150) {
                        T::one() / (zeta.abs() + zeta.abs())
                    } else {
                        T::one() / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                    };
                    if zeta < T::zero() {
                        -r
                    } else {
                        r
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (cp, cq) = pair_mut(&mut cols, p, q);
                rotate(cp, cq, c, s, phase);
                let (vp, vq) = pair_mut(&mut v, p, q);
                rotate(vp, vq, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = cols.iter().map(|c| super::matrix::norm2(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut vm = ComplexMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        vm.set_column(k, &v[j]);
    }
    Svd {
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        v: vm,
    }
}

fn pair_mut<X>(v: &mut [X], p: usize, q: usize) -> (&mut X, &mut X) {
    let (lo, hi) = v.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

/// `x_q ← e^{−iφ} x_q`, then a real plane rotation on `(x_p, x_q)`.
fn rotate<T: Real>(xp: &mut [Complex<T>], xq: &mut [Complex<T>], c: T, s: T, phase: Complex<T>) {
    let ph = phase.conj();
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * ph;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

/// Number of singular values above `tol_rank × σ_max`; zero for the zero matrix.
pub fn svd_rank<T: Real>(a: &ComplexMatrix<T>, tol_rank: T) -> usize {
    let s = svd(a).singular_values;
    let smax = s.first().copied().unwrap_or(T::zero());
    if smax == T::zero() {
        return 0;
    }
    s.iter().filter(|&&x| x > tol_rank * smax).count()
}

/// Orthonormal basis (columns) of the numerical null space.
pub fn null_space<T: Real>(a: &ComplexMatrix<T>, tol_rank: T) -> ComplexMatrix<T> {
    let Svd { singular_values, v } = svd(a);
    let n = a.cols();
    let smax = singular_values.first().copied().unwrap_or(T::zero());
    let rank = if smax == T::zero() {
        0
    } else {
        singular_values
            .iter()
            .filter(|&&x| x > tol_rank * smax)
            .count()
    };
    if rank == n {
        return ComplexMatrix::zeros(n, 0);
    }
    v.sub_matrix(0, rank, n, n - rank)
}
