//! Superoperators on d×d density matrices, in a generalized Gell-Mann basis
//! or in Fock-Liouville (Kronecker) form.

mod equivalence;
mod gellmann;
mod liouvillian;

pub use equivalence::{signed_permutation_equivalence, SignedPermutation};
pub use gellmann::{devectorize, vectorize, GellMannBasis};
pub use liouvillian::{
    fock_liouville, full_liouvillian, gamma_superop, h_superop, hybrid_liouvillian,
    isotropic_extension, lambda_superop, nhh_liouvillian, nhh_superop, Origin, SuperOperator,
    SuperParts,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    GellMann,
    FockLiouville,
}

/// Which vectorization a superoperator acts on, and the Hilbert dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisTag {
    pub kind: BasisKind,
    pub dim: usize,
}

impl BasisTag {
    pub fn gell_mann(dim: usize) -> Self {
        Self {
            kind: BasisKind::GellMann,
            dim,
        }
    }

    pub fn fock_liouville(dim: usize) -> Self {
        Self {
            kind: BasisKind::FockLiouville,
            dim,
        }
    }

    pub fn super_dim(&self) -> usize {
        self.dim * self.dim
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuperopError {
    #[error("Gell-Mann basis supports 2 <= d <= 16, got {0}")]
    UnsupportedDim(usize),
    #[error("expected dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Hamiltonian is not Hermitian (deviation {0:e}); use the non-Hermitian superoperator")]
    NotHermitian(f64),
    #[error("operation needs a {expected:?} superoperator, got {found:?}")]
    BasisMismatch {
        expected: BasisKind,
        found: BasisKind,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
