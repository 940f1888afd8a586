//! Parameter-to-matrix builders for sweeps and EP searches.

use super::SpectraError;
use crate::linalg::ComplexMatrix;
use crate::model::{build_eff3, build_full4_rwa, ModelParams};
use crate::scalar::Real;
use crate::superop::{hybrid_liouvillian, BasisKind, BasisTag};

fn tag(kind: BasisKind, dim: usize) -> BasisTag {
    BasisTag { kind, dim }
}

/// `Ĥ_NH` of the effective 3-level model.
pub fn eff3_operator<T: Real>(p: &ModelParams<T>) -> Result<ComplexMatrix<T>, SpectraError> {
    Ok(build_eff3(p)?.non_hermitian_hamiltonian())
}

/// Hybrid Liouvillian of the effective 3-level model at `q = p.q`.
pub fn eff3_hybrid<T: Real>(
    p: &ModelParams<T>,
    kind: BasisKind,
) -> Result<ComplexMatrix<T>, SpectraError> {
    Ok(hybrid_liouvillian(&build_eff3(p)?, p.q, tag(kind, 3))?.matrix)
}

/// Hybrid Liouvillian of the 4-level rotating-frame model at `q = p.q`.
pub fn full4_hybrid<T: Real>(
    p: &ModelParams<T>,
    kind: BasisKind,
) -> Result<ComplexMatrix<T>, SpectraError> {
    Ok(hybrid_liouvillian(&build_full4_rwa(p), p.q, tag(kind, 4))?.matrix)
}
