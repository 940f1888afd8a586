//! Nonsymmetric complex eigenproblem.
//!
//! Balancing, Householder reduction to Hessenberg form, single-shift complex
//! QR to Schur form `A = Z T Zᴴ`, then eigenvectors of the triangular factor
//! by substitution.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::{normalize, ComplexMatrix};
use super::LinalgError;
use crate::scalar::{cabs, csqrt, Real};

/// Eigenvalues sorted by `(re, im)`, unit right eigenvectors as columns and
/// (optionally) unit left eigenvectors as rows `u_iᴴ`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<Complex<T>>,
    pub right_vectors: ComplexMatrix<T>,
    pub left_vectors: Option<ComplexMatrix<T>>,
    /// `‖A v_i − λ_i v_i‖₂`.
    pub residuals: Vec<T>,
}

/// Full decomposition. Left vectors are computed only when `want_left`.
pub fn eig<T: Real>(
    a: &ComplexMatrix<T>,
    want_left: bool,
) -> Result<EigenDecomposition<T>, LinalgError> {
    let n = check_square(a)?;
    let (mut h, scale) = balance(a);
    let mut z = hessenberg(&mut h, true);
    schur(&mut h, Some(&mut z), a.frobenius_norm())?;

    let values: Vec<Complex<T>> = h.diag();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| cmp_complex(values[i], values[j]));

    let tnorm = h.max_abs();
    let mut right = ComplexMatrix::zeros(n, n);
    let mut left = want_left.then(|| ComplexMatrix::zeros(n, n));
    let mut residuals = Vec::with_capacity(n);
    let mut sorted_values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        let lambda = values[k];
        let x = upper_triangular_vector(&h, k, tnorm);
        let mut v = z.mul_vec(&x);
        for (vi, &s) in v.iter_mut().zip(&scale) {
            *vi *= s;
        }
        normalize(&mut v);
        let av = a.mul_vec(&v);
        let res: Vec<Complex<T>> = av.iter().zip(&v).map(|(&p, &q)| p - lambda * q).collect();
        residuals.push(super::matrix::norm2(&res));
        right.set_column(col, &v);
        if let Some(l) = left.as_mut() {
            let y = lower_triangular_left_vector(&h, k, tnorm);
            let mut u = z.mul_vec(&y);
            for (ui, &s) in u.iter_mut().zip(&scale) {
                *ui /= s;
            }
            normalize(&mut u);
            for (j, ui) in u.iter().enumerate() {
                l[(col, j)] = ui.conj();
            }
        }
        sorted_values.push(lambda);
    }
    Ok(EigenDecomposition {
        values: sorted_values,
        right_vectors: right,
        left_vectors: left,
        residuals,
    })
}

/// Eigenvalues only, sorted by `(re, im)`.
pub fn eigvals<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>, LinalgError> {
    check_square(a)?;
    let (mut h, _) = balance(a);
    hessenberg(&mut h, false);
    schur(&mut h, None, a.frobenius_norm())?;
    let mut v = h.diag();
    v.sort_by(|&x, &y| cmp_complex(x, y));
    Ok(v)
}

/// Lexicographic order on `(re, im)`.
pub fn cmp_complex<T: Real>(a: Complex<T>, b: Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

fn check_square<T: Real>(a: &ComplexMatrix<T>) -> Result<usize, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.data()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(LinalgError::NonFinite);
    }
    Ok(a.rows())
}

#[inline]
fn abs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity `D⁻¹ A D` with powers of two equalising row and
/// column norms. Returns the balanced matrix and `diag(D)`.
fn balance<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, Vec<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut d = vec![T::one(); n];
    let two = T::of(2.0);
    let half = T::of(0.5);
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c += abs1(h[(j, i)]);
                    r += abs1(h[(i, j)]);
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut f = T::one();
            let mut cc = c;
            let g = r * half;
            while cc < g {
                f *= two;
                cc *= two * two;
            }
            let g = r * two;
            while cc > g {
                f *= half;
                cc *= half * half;
            }
            if (cc + r) / f < T::of(0.95) * s {
                converged = false;
                d[i] *= f;
                let finv = T::one() / f;
                for j in 0..n {
                    h[(i, j)] *= finv;
                    h[(j, i)] *= f;
                }
            }
        }
    }
    (h, d)
}

/// In-place Householder reduction to upper Hessenberg form. Returns the
/// accumulated unitary `Q` (identity when `want_q` is false).
fn hessenberg<T: Real>(h: &mut ComplexMatrix<T>, want_q: bool) -> ComplexMatrix<T> {
    let n = h.rows();
    let mut q = ComplexMatrix::identity(if want_q { n } else { 1 });
    if n < 3 {
        return q;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let tail = x[1..]
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        if tail == T::zero() {
            continue;
        }
        let alpha = x[0];
        let xnorm = (alpha.norm_sqr() + tail).sqrt();
        let amag = cabs(alpha);
        let phase = if amag == T::zero() {
            Complex::one()
        } else {
            alpha / amag
        };
        // v = x + phase·‖x‖ e1 reflects x onto −phase·‖x‖ e1
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        let tau = T::of(2.0) / vnorm2;
        // left: H ← (I − τ v vᴴ) H on rows k+1..n
        for j in 0..n {
            let mut s: Complex<T> = Complex::zero();
            for (t, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + t, j)];
            }
            s *= tau;
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= *vi * s;
            }
        }
        // right: H ← H (I − τ v vᴴ) on columns k+1..n
        for i in 0..n {
            let mut s: Complex<T> = Complex::zero();
            for (t, vi) in v.iter().enumerate() {
                s += h[(i, k + 1 + t)] * *vi;
            }
            s *= tau;
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= s * vi.conj();
            }
        }
        if want_q {
            for i in 0..n {
                let mut s: Complex<T> = Complex::zero();
                for (t, vi) in v.iter().enumerate() {
                    s += q[(i, k + 1 + t)] * *vi;
                }
                s *= tau;
                for (t, vi) in v.iter().enumerate() {
                    q[(i, k + 1 + t)] -= s * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    q
}

/// Givens pair `(c, s)` with real `c` such that
/// `[[c, s], [−s̄, c]]·[x, y]ᵀ = [r, 0]ᵀ`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ax = cabs(x);
    let ay = cabs(y);
    if ay == T::zero() {
        return (T::one(), Complex::zero());
    }
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// Single-shift QR iteration driving the Hessenberg matrix `h` to upper
/// triangular Schur form. With `z` present the full triangle is maintained
/// and the transformations are accumulated into `z`.
fn schur<T: Real>(
    h: &mut ComplexMatrix<T>,
    mut z: Option<&mut ComplexMatrix<T>>,
    a_norm: T,
) -> Result<(), LinalgError> {
    let n = h.rows();
    if n == 1 {
        return Ok(());
    }
    let full = z.is_some();
    let eps = T::epsilon();
    let cap = 100 * n * n;
    let mut total = 0usize;
    let mut its = 0usize;
    let mut ihi = n - 1;
    let hnorm = h.max_abs();
    loop {
        // find the lowest negligible subdiagonal in 1..=ihi
        let mut l = ihi;
        while l > 0 {
            let sub = abs1(h[(l, l - 1)]);
            let mut diag = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if diag == T::zero() {
                diag = hnorm;
            }
            if sub <= eps * diag {
                h[(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == ihi {
            if ihi == 0 {
                break;
            }
            ihi -= 1;
            its = 0;
            if ihi == 0 {
                break;
            }
            continue;
        }
        total += 1;
        its += 1;
        if total > cap {
            return Err(LinalgError::NoConvergence {
                norm: a_norm.to_f64(),
                cap,
            });
        }

        let mu = if its.is_multiple_of(10) {
            // exceptional shift
            h[(ihi, ihi)] + Complex::new(T::of(0.75) * abs1(h[(ihi, ihi - 1)]), T::zero())
        } else {
            let a = h[(ihi - 1, ihi - 1)];
            let b = h[(ihi - 1, ihi)];
            let c = h[(ihi, ihi - 1)];
            let d = h[(ihi, ihi)];
            let half = T::of(0.5);
            let m = (a - d) * half;
            let disc = csqrt(m * m + b * c);
            let e1 = d + m + disc;
            let e2 = d + m - disc;
            if cabs(e1 - d) < cabs(e2 - d) {
                e1
            } else {
                e2
            }
        };

        let col_hi = if full { n } else { ihi + 1 };
        let row_lo = if full { 0 } else { l };
        for k in l..ihi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let cc = Complex::new(c, T::zero());
            let start = if k == l { l } else { k - 1 };
            for j in start..col_hi {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = cc * p + s * q;
                h[(k + 1, j)] = cc * q - s.conj() * p;
            }
            let stop = (k + 2).min(ihi);
            for i in row_lo..=stop {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p * cc + q * s.conj();
                h[(i, k + 1)] = q * cc - p * s;
            }
            if let Some(zm) = z.as_deref_mut() {
                for i in 0..n {
                    let p = zm[(i, k)];
                    let q = zm[(i, k + 1)];
                    zm[(i, k)] = p * cc + q * s.conj();
                    zm[(i, k + 1)] = q * cc - p * s;
                }
            }
            if k > l {
                h[(k + 1, k - 1)] = Complex::zero();
            }
        }
    }
    Ok(())
}

const RESCALE: f64 = 1e100;

/// Solves `(T − λ_k I) x = 0` with `x_k = 1` by back substitution,
/// perturbing tiny pivots so that defective blocks still yield a vector.
fn upper_triangular_vector<T: Real>(t: &ComplexMatrix<T>, k: usize, tnorm: T) -> Vec<Complex<T>> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let smin = (T::epsilon() * cabs(lambda).max(tnorm)).max(T::of(f64::MIN_POSITIVE));
    let mut x = vec![Complex::zero(); n];
    x[k] = Complex::one();
    let big = T::of(RESCALE);
    for i in (0..k).rev() {
        let mut s: Complex<T> = Complex::zero();
        for j in i + 1..=k {
            s += t[(i, j)] * x[j];
        }
        let mut d = t[(i, i)] - lambda;
        if cabs(d) < smin {
            d = Complex::new(smin, T::zero());
        }
        x[i] = -s / d;
        let m = cabs(x[i]);
        if m > big {
            for xj in x[i..=k].iter_mut() {
                *xj /= m;
            }
        }
    }
    x
}

/// Solves `(Tᴴ − λ̄_k I) y = 0` with `y_k = 1` by forward substitution.
fn lower_triangular_left_vector<T: Real>(
    t: &ComplexMatrix<T>,
    k: usize,
    tnorm: T,
) -> Vec<Complex<T>> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let smin = (T::epsilon() * cabs(lambda).max(tnorm)).max(T::of(f64::MIN_POSITIVE));
    let mut y = vec![Complex::zero(); n];
    y[k] = Complex::one();
    let big = T::of(RESCALE);
    for i in k + 1..n {
        let mut s: Complex<T> = Complex::zero();
        for j in k..i {
            s += t[(j, i)].conj() * y[j];
        }
        let mut d = (t[(i, i)] - lambda).conj();
        if cabs(d) < smin {
            d = Complex::new(smin, T::zero());
        }
        y[i] = -s / d;
        let m = cabs(y[i]);
        if m > big {
            for yj in y[k..=i].iter_mut() {
                *yj /= m;
            }
        }
    }
    y
}
