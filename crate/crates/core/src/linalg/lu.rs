//! LU factorisation with partial pivoting.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use super::LinalgError;
use crate::scalar::{cabs, Real};

/// `P A = L U` packed into one matrix.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, cabs(lu[(i, k)])))
                    .fold(
                        (k, T::zero()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax == T::zero() || pmax <= T::epsilon() * T::epsilon() * scale {
                return Err(LinalgError::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.lu.rows();
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.column(j));
            out.set_column(j, &x);
        }
        out
    }
}

pub fn solve<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>, LinalgError> {
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}
