//! Dense complex linear algebra.

mod eig;
mod expm;
mod lu;
mod matrix;
mod roots;
mod svd;

pub use eig::{cmp_complex, eig, eigvals, EigenDecomposition};
pub use expm::expm;
pub use lu::{inverse, solve, Lu};
pub use matrix::{dot, norm2, normalize, ComplexMatrix};
pub use roots::cubic_roots;
pub use svd::{null_space, svd, svd_rank, Svd};

use thiserror::Error;

/// Largest row or column count accepted for dense products.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix has no entries")]
    Empty,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {expected:?} vs {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("QR iteration exceeded {cap} sweeps (matrix Frobenius norm {norm:e})")]
    NoConvergence { norm: f64, cap: usize },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("result {rows}x{cols} exceeds the dense size cap {cap}")]
    TooLarge {
        rows: usize,
        cols: usize,
        cap: usize,
    },
    #[error("matrix exponential overflows (1-norm {norm:e})")]
    Overflow { norm: f64 },
}
