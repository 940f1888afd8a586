use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{LinalgError, MAX_DIM};
use crate::scalar::{cabs, Real};

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(d: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Real matrix from `f64` rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| Complex::new(T::of(rows[i][j]), T::zero()))
    }

    /// Outer product `u vᴴ`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Single-entry matrix `|i⟩⟨j|`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Complex::one();
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Complex<T>> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<T>]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn diag(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        self.diag().into_iter().fold(Complex::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn map<U: Real>(&self, f: impl Fn(Complex<T>) -> Complex<U>) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Converts through `f64`; extra precision of the source is dropped.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        self.map(|z| Complex::new(U::of(z.re.to_f64()), U::of(z.im.to_f64())))
    }

    pub fn frobenius_norm(&self) -> T {
        let scale = self.max_abs();
        if scale == T::zero() {
            return scale;
        }
        let s: T = self
            .data
            .iter()
            .map(|z| {
                let w = *z / Complex::new(scale, T::zero());
                w.norm_sqr()
            })
            .fold(T::zero(), |a, b| a + b);
        scale * s.sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|&z| cabs(z))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| cabs(self[(i, j)]))
                    .fold(T::zero(), |a, b| a + b)
            })
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length does not match column count"
        );
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Result<Self, LinalgError> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(LinalgError::TooLarge {
                rows,
                cols,
                cap: MAX_DIM,
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        }))
    }

    fn max_entry_gap(&self, f: impl Fn(usize, usize) -> Complex<T>) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max(cabs(f(i, j)));
            }
        }
        worst
    }

    /// `|a_ij − conj(a_ji)| ≤ tol` for every entry.
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.max_entry_gap(|i, j| self[(i, j)] - self[(j, i)].conj()) <= tol
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.is_square() && self.max_entry_gap(|i, j| self[(i, j)] - self[(j, i)]) <= tol
    }

    pub fn is_antisymmetric(&self, tol: T) -> bool {
        self.is_square() && self.max_entry_gap(|i, j| self[(i, j)] + self[(j, i)]) <= tol
    }

    pub fn is_real(&self, tol: T) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn is_imaginary(&self, tol: T) -> bool {
        self.data.iter().all(|z| z.re.abs() <= tol)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| cabs(a - b))
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn sub_matrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    /// Panics on a shape mismatch; use [`ComplexMatrix::try_mul`] to get an error instead.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.scale_real(-T::one())
    }
}

impl<T: Real> AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<T: Real> SubAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn sub_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// Conjugated inner product `uᴴ v`.
pub fn dot<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Euclidean norm of a vector.
pub fn norm2<T: Real>(v: &[Complex<T>]) -> T {
    let scale = v.iter().map(|&z| cabs(z)).fold(T::zero(), |a, b| a.max(b));
    if scale == T::zero() {
        return scale;
    }
    let s = v
        .iter()
        .map(|&z| (z / Complex::new(scale, T::zero())).norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    scale * s.sqrt()
}

/// Scales `v` to unit 2-norm; the zero vector is left unchanged.
pub fn normalize<T: Real>(v: &mut [Complex<T>]) {
    let n = norm2(v);
    if n > T::zero() {
        for z in v.iter_mut() {
            *z /= Complex::new(n, T::zero());
        }
    }
}
