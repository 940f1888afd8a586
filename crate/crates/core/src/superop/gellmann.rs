use num_complex::Complex;
use num_traits::Zero;

use super::{BasisKind, BasisTag, SuperopError};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Generalized Gell-Mann matrices normalised to `Tr(σᵢσⱼ) = 2δᵢⱼ`.
///
/// Order: symmetric `|j⟩⟨k| + |k⟩⟨j|` for j < k lexicographically, then the
/// antisymmetric `−i|j⟩⟨k| + i|k⟩⟨j|` in the same order, then the diagonal
/// matrices by increasing size, and `√(2/d)·I` last.
#[derive(Clone, Debug, PartialEq)]
pub struct GellMannBasis<T> {
    dim: usize,
    matrices: Vec<ComplexMatrix<T>>,
}

impl<T: Real> GellMannBasis<T> {
    pub fn new(dim: usize) -> Result<Self, SuperopError> {
        if !(2..=16).contains(&dim) {
            return Err(SuperopError::UnsupportedDim(dim));
        }
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|j| (j + 1..dim).map(move |k| (j, k)))
            .collect();
        let mut matrices = Vec::with_capacity(dim * dim);
        for &(j, k) in &pairs {
            let mut m = ComplexMatrix::zeros(dim, dim);
            m[(j, k)] = one;
            m[(k, j)] = one;
            matrices.push(m);
        }
        for &(j, k) in &pairs {
            let mut m = ComplexMatrix::zeros(dim, dim);
            m[(j, k)] = -i;
            m[(k, j)] = i;
            matrices.push(m);
        }
        for l in 1..dim {
            let norm = (T::of(2.0) / T::from_usize(l * (l + 1))).sqrt();
            let mut m = ComplexMatrix::zeros(dim, dim);
            for k in 0..l {
                m[(k, k)] = Complex::new(norm, T::zero());
            }
            m[(l, l)] = Complex::new(-norm * T::from_usize(l), T::zero());
            matrices.push(m);
        }
        matrices.push(
            ComplexMatrix::identity(dim).scale_real((T::of(2.0) / T::from_usize(dim)).sqrt()),
        );
        Ok(Self { dim, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[ComplexMatrix<T>] {
        &self.matrices
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag::gell_mann(self.dim)
    }

    /// Coefficients `Tr(ρσᵢ)/2`.
    pub fn vectorize(&self, rho: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>, SuperopError> {
        check_dim(rho, self.dim)?;
        Ok(self
            .matrices
            .iter()
            .map(|s| trace_product(rho, s) * T::of(0.5))
            .collect())
    }

    /// `Σ vᵢ σᵢ`.
    pub fn devectorize(&self, v: &[Complex<T>]) -> Result<ComplexMatrix<T>, SuperopError> {
        if v.len() != self.matrices.len() {
            return Err(SuperopError::DimensionMismatch {
                expected: self.matrices.len(),
                found: v.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (s, &c) in self.matrices.iter().zip(v) {
            if !c.is_zero() {
                out += &s.scale(c);
            }
        }
        Ok(out)
    }

    /// Matrix `Lᵢⱼ = ½ Tr(map(σⱼ) σᵢ)` of a linear map on d×d matrices.
    pub fn superop_of(
        &self,
        map: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>,
    ) -> ComplexMatrix<T> {
        let n = self.matrices.len();
        let half = T::of(0.5);
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, sj) in self.matrices.iter().enumerate() {
            let image = map(sj);
            for (i, si) in self.matrices.iter().enumerate() {
                out[(i, j)] = trace_product(&image, si) * half;
            }
        }
        out
    }
}

/// `Tr(AB)` without forming the product.
pub(crate) fn trace_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Complex<T> {
    let n = a.rows();
    let mut s: Complex<T> = Complex::zero();
    for r in 0..n {
        for k in 0..a.cols() {
            s += a[(r, k)] * b[(k, r)];
        }
    }
    s
}

fn check_dim<T: Real>(rho: &ComplexMatrix<T>, dim: usize) -> Result<(), SuperopError> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(SuperopError::DimensionMismatch {
            expected: dim,
            found: rho.rows().max(rho.cols()),
        });
    }
    Ok(())
}

/// Coefficient vector of `rho` in the tagged basis. Fock-Liouville places
/// `ρᵢⱼ` at index `i·d + j`, the order of `|i⟩ ⊗ |j*⟩`.
pub fn vectorize<T: Real>(
    rho: &ComplexMatrix<T>,
    basis: BasisTag,
) -> Result<Vec<Complex<T>>, SuperopError> {
    match basis.kind {
        BasisKind::GellMann => GellMannBasis::new(basis.dim)?.vectorize(rho),
        BasisKind::FockLiouville => {
            check_dim(rho, basis.dim)?;
            Ok(rho.data().to_vec())
        }
    }
}

pub fn devectorize<T: Real>(
    v: &[Complex<T>],
    basis: BasisTag,
) -> Result<ComplexMatrix<T>, SuperopError> {
    match basis.kind {
        BasisKind::GellMann => GellMannBasis::new(basis.dim)?.devectorize(v),
        BasisKind::FockLiouville => {
            if v.len() != basis.super_dim() {
                return Err(SuperopError::DimensionMismatch {
                    expected: basis.super_dim(),
                    found: v.len(),
                });
            }
            Ok(ComplexMatrix::new(basis.dim, basis.dim, v.to_vec())?)
        }
    }
}
