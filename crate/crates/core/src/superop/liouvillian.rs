use num_complex::Complex;
use serde_json::{json, Value};

use super::{BasisKind, BasisTag, GellMannBasis, SuperopError};
use crate::linalg::ComplexMatrix;
use crate::model::LindbladSystem;
use crate::scalar::Real;

/// What a superoperator was assembled from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Origin {
    /// `−i Ĥ_NH` built directly from the non-Hermitian Hamiltonian.
    NhhSuper,
    /// `−i Ĥ_NH + q Λ̂`.
    Hybrid(f64),
    /// The Lindblad generator, jumps at full weight.
    FullLiouvillian,
}

/// The three pieces of `L = −i·h_part + gamma_part + q·lambda_part`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperParts<T> {
    pub h_part: ComplexMatrix<T>,
    pub gamma_part: ComplexMatrix<T>,
    pub lambda_part: ComplexMatrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator<T> {
    pub matrix: ComplexMatrix<T>,
    pub basis: BasisTag,
    pub origin: Origin,
    pub parts: Option<SuperParts<T>>,
}

impl<T: Real> SuperOperator<T> {
    /// `{"basis", "origin", "q", "matrix"}` with the matrix as nested
    /// `[re, im]` pairs.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.matrix.rows())
            .map(|r| {
                Value::Array(
                    self.matrix
                        .row(r)
                        .iter()
                        .map(|z| json!([z.re.to_f64(), z.im.to_f64()]))
                        .collect(),
                )
            })
            .collect();
        let (origin, q) = match self.origin {
            Origin::NhhSuper => ("nhh", Value::Null),
            Origin::Hybrid(q) => ("hybrid", json!(q)),
            Origin::FullLiouvillian => ("full", Value::Null),
        };
        json!({ "basis": self.basis, "origin": origin, "q": q, "matrix": rows })
    }
}

fn minus_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), -T::one())
}

/// `Ĥᵢⱼ = ½ Tr([H, σⱼ] σᵢ)`; antisymmetric and imaginary for Hermitian `h`.
pub fn h_superop<T: Real>(
    h: &ComplexMatrix<T>,
    basis: &GellMannBasis<T>,
) -> Result<ComplexMatrix<T>, SuperopError> {
    check_op(h, basis.dim())?;
    let dev = h.max_diff(&h.adjoint());
    if dev > T::of(1e-12) * h.max_abs().max(T::one()) {
        return Err(SuperopError::NotHermitian(dev.to_f64()));
    }
    Ok(basis.superop_of(|s| h.commutator(s)))
}

/// Matrix of `X ↦ H X − X Hᴴ`; reduces to [`h_superop`] for Hermitian `h`.
pub fn nhh_superop<T: Real>(
    h: &ComplexMatrix<T>,
    basis: &GellMannBasis<T>,
) -> Result<ComplexMatrix<T>, SuperopError> {
    check_op(h, basis.dim())?;
    let hd = h.adjoint();
    Ok(basis.superop_of(|s| &(h * s) - &(s * &hd)))
}

/// `Γ̂ᵢⱼ = −¼ Σ Tr({LᴴL, σⱼ} σᵢ)`; symmetric and real.
pub fn gamma_superop<T: Real>(
    jumps: &[ComplexMatrix<T>],
    basis: &GellMannBasis<T>,
) -> Result<ComplexMatrix<T>, SuperopError> {
    let relax = relaxation(jumps, basis.dim())?;
    let half = T::of(0.5);
    Ok(basis.superop_of(|s| relax.anticommutator(s).scale_real(-half)))
}

/// `Λ̂ᵢⱼ = ½ Σ Tr(L σⱼ Lᴴ σᵢ)`, the matrix of `ρ ↦ Σ LρLᴴ`.
pub fn lambda_superop<T: Real>(
    jumps: &[ComplexMatrix<T>],
    basis: &GellMannBasis<T>,
) -> Result<ComplexMatrix<T>, SuperopError> {
    for l in jumps {
        check_op(l, basis.dim())?;
    }
    let adj: Vec<_> = jumps.iter().map(|l| l.adjoint()).collect();
    Ok(basis.superop_of(|s| {
        let mut out = ComplexMatrix::zeros(s.rows(), s.cols());
        for (l, ld) in jumps.iter().zip(&adj) {
            out += &(&(l * s) * ld);
        }
        out
    }))
}

fn check_op<T: Real>(m: &ComplexMatrix<T>, dim: usize) -> Result<(), SuperopError> {
    if m.rows() != dim || m.cols() != dim {
        return Err(SuperopError::DimensionMismatch {
            expected: dim,
            found: m.rows().max(m.cols()),
        });
    }
    Ok(())
}

fn relaxation<T: Real>(
    jumps: &[ComplexMatrix<T>],
    dim: usize,
) -> Result<ComplexMatrix<T>, SuperopError> {
    let mut g = ComplexMatrix::zeros(dim, dim);
    for l in jumps {
        check_op(l, dim)?;
        g += &(&l.adjoint() * l);
    }
    Ok(g)
}

fn parts<T: Real>(sys: &LindbladSystem<T>, basis: BasisTag) -> Result<SuperParts<T>, SuperopError> {
    let d = sys.dim();
    if basis.dim != d {
        return Err(SuperopError::DimensionMismatch {
            expected: basis.dim,
            found: d,
        });
    }
    let jumps: Vec<ComplexMatrix<T>> = sys.jump_ops().cloned().collect();
    match basis.kind {
        BasisKind::GellMann => {
            let gm = GellMannBasis::new(d)?;
            let h_part = if sys.is_hermitian() {
                h_superop(sys.hamiltonian(), &gm)?
            } else {
                nhh_superop(sys.hamiltonian(), &gm)?
            };
            Ok(SuperParts {
                h_part,
                gamma_part: gamma_superop(&jumps, &gm)?,
                lambda_part: lambda_superop(&jumps, &gm)?,
            })
        }
        BasisKind::FockLiouville => {
            let id = ComplexMatrix::identity(d);
            let h = sys.hamiltonian();
            // X ↦ HX − XHᴴ in row-major order is H ⊗ 1 − 1 ⊗ H*
            let h_part = &h.kron(&id)? - &id.kron(&h.conj())?;
            let relax = relaxation(&jumps, d)?;
            let gamma_part =
                (&relax.kron(&id)? + &id.kron(&relax.transpose())?).scale_real(-T::of(0.5));
            let mut lambda_part = ComplexMatrix::zeros(d * d, d * d);
            for l in &jumps {
                lambda_part += &l.kron(&l.conj())?;
            }
            Ok(SuperParts {
                h_part,
                gamma_part,
                lambda_part,
            })
        }
    }
}

/// `L(q) = −i Ĥ_NH + q Λ̂`: the relaxation part always enters in full, the
/// repopulation part is weighted by `q`.
pub fn hybrid_liouvillian<T: Real>(
    sys: &LindbladSystem<T>,
    q: T,
    basis: BasisTag,
) -> Result<SuperOperator<T>, SuperopError> {
    let p = parts(sys, basis)?;
    let matrix = &(&p.h_part.scale(minus_i()) + &p.gamma_part) + &p.lambda_part.scale_real(q);
    Ok(SuperOperator {
        matrix,
        basis,
        origin: Origin::Hybrid(q.to_f64()),
        parts: Some(p),
    })
}

/// Kronecker assembly `−i(H⊗1 − 1⊗Hᵀ) + Σ [q L⊗L* − ½(LᴴL⊗1 + 1⊗LᵀL*)]`.
pub fn fock_liouville<T: Real>(
    sys: &LindbladSystem<T>,
    q: T,
) -> Result<SuperOperator<T>, SuperopError> {
    hybrid_liouvillian(sys, q, BasisTag::fock_liouville(sys.dim()))
}

/// Lindblad generator, all jumps at full weight.
pub fn full_liouvillian<T: Real>(
    sys: &LindbladSystem<T>,
    basis: BasisTag,
) -> Result<SuperOperator<T>, SuperopError> {
    let mut s = hybrid_liouvillian(sys, T::one(), basis)?;
    s.origin = Origin::FullLiouvillian;
    Ok(s)
}

/// `−i Ĥ_NH` assembled straight from `H − (i/2)ΣLᴴL` rather than from parts.
pub fn nhh_liouvillian<T: Real>(
    sys: &LindbladSystem<T>,
    basis: BasisTag,
) -> Result<SuperOperator<T>, SuperopError> {
    let h_nh = sys.non_hermitian_hamiltonian();
    let d = sys.dim();
    let generator = match basis.kind {
        BasisKind::GellMann => nhh_superop(&h_nh, &GellMannBasis::new(d)?)?,
        BasisKind::FockLiouville => {
            let id = ComplexMatrix::identity(d);
            &h_nh.kron(&id)? - &id.kron(&h_nh.conj())?
        }
    };
    Ok(SuperOperator {
        matrix: generator.scale(minus_i()),
        basis,
        origin: Origin::NhhSuper,
        parts: None,
    })
}

/// Adds isotropic ground relaxation at rate `gamma_g` to a Gell-Mann-basis
/// superoperator: `−γ·diag(1, …, 1, 1 − q)`, the identity component last.
pub fn isotropic_extension<T: Real>(
    base: &SuperOperator<T>,
    gamma_g: T,
    q: T,
) -> Result<SuperOperator<T>, SuperopError> {
    if base.basis.kind != BasisKind::GellMann {
        return Err(SuperopError::BasisMismatch {
            expected: BasisKind::GellMann,
            found: base.basis.kind,
        });
    }
    let n = base.basis.super_dim();
    let mut matrix = base.matrix.clone();
    for k in 0..n {
        let w = if k + 1 == n { T::one() - q } else { T::one() };
        matrix[(k, k)] -= Complex::new(gamma_g * w, T::zero());
    }
    Ok(SuperOperator {
        matrix,
        basis: base.basis,
        origin: base.origin,
        parts: None,
    })
}
