use num_complex::Complex;
use num_traits::Zero;

use super::ModelError;
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// A Hamiltonian and a labelled list of jump operators on a `dim`-level space.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladSystem<T> {
    dim: usize,
    hamiltonian: ComplexMatrix<T>,
    jumps: Vec<(String, ComplexMatrix<T>)>,
    hermitian: bool,
}

impl<T: Real> LindbladSystem<T> {
    /// Checks shapes and, unless `hermitian` is false, that `hamiltonian`
    /// is Hermitian to 10⁻¹² relative.
    pub fn new(
        hamiltonian: ComplexMatrix<T>,
        jumps: Vec<(String, ComplexMatrix<T>)>,
        hermitian: bool,
    ) -> Result<Self, ModelError> {
        let dim = hamiltonian.rows();
        let shape_ok = |m: &ComplexMatrix<T>| m.rows() == dim && m.cols() == dim;
        if !shape_ok(&hamiltonian) {
            return Err(ModelError::OperatorShape {
                label: "hamiltonian".into(),
                dim,
                found: (hamiltonian.rows(), hamiltonian.cols()),
            });
        }
        for (label, op) in &jumps {
            if !shape_ok(op) {
                return Err(ModelError::OperatorShape {
                    label: label.clone(),
                    dim,
                    found: (op.rows(), op.cols()),
                });
            }
        }
        if hermitian {
            let dev = (&hamiltonian - &hamiltonian.adjoint()).frobenius_norm();
            if dev > T::of(1e-12) * hamiltonian.frobenius_norm() {
                return Err(ModelError::NotHermitian {
                    deviation: dev.to_f64(),
                });
            }
        }
        Ok(Self {
            dim,
            hamiltonian,
            jumps,
            hermitian,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix<T> {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(String, ComplexMatrix<T>)] {
        &self.jumps
    }

    pub fn jump_ops(&self) -> impl Iterator<Item = &ComplexMatrix<T>> {
        self.jumps.iter().map(|(_, op)| op)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Same Hamiltonian with extra jumps appended.
    pub fn with_jumps(
        mut self,
        extra: Vec<(String, ComplexMatrix<T>)>,
    ) -> Result<Self, ModelError> {
        self.jumps.extend(extra);
        Self::new(self.hamiltonian, self.jumps, self.hermitian)
    }

    /// Relaxation operator `Σ Lᴴ L`.
    pub fn relaxation(&self) -> ComplexMatrix<T> {
        let mut g = ComplexMatrix::zeros(self.dim, self.dim);
        for l in self.jump_ops() {
            g += &(&l.adjoint() * l);
        }
        g
    }

    /// Repopulation `Σ L ρ Lᴴ`.
    pub fn repopulation(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for l in self.jump_ops() {
            out += &(&(l * rho) * &l.adjoint());
        }
        out
    }

    /// `H − (i/2) Σ Lᴴ L`.
    pub fn non_hermitian_hamiltonian(&self) -> ComplexMatrix<T> {
        let half_i = Complex::new(T::zero(), T::of(0.5));
        &self.hamiltonian - &self.relaxation().scale(half_i)
    }

    /// Right side of the master equation with the jump term weighted by `q`:
    /// `−i(Hρ − ρHᴴ) + Σ (q LρLᴴ − ½{LᴴL, ρ})`, evaluated term by term.
    /// For a Hermitian `H` the first term is the usual commutator.
    pub fn master_rhs(&self, rho: &ComplexMatrix<T>, q: T) -> ComplexMatrix<T> {
        let minus_i = Complex::new(T::zero(), -T::one());
        let mut out =
            (&(&self.hamiltonian * rho) - &(rho * &self.hamiltonian.adjoint())).scale(minus_i);
        let half = T::of(0.5);
        for l in self.jump_ops() {
            let ldl = &l.adjoint() * l;
            out += &(&(l * rho) * &l.adjoint()).scale_real(q);
            out -= &ldl.anticommutator(rho).scale_real(half);
        }
        out
    }
}

/// Relaxation operator `Γ̂ = Σ LᴴL` and repopulation map `ρ ↦ Σ LρLᴴ`, so
/// that `ρ̇ = −i(H_NH ρ − ρ H_NHᴴ) + Λ̂(ρ)` with `H_NH = H − (i/2)Γ̂`.
pub fn gamma_lambda_forms<T: Real>(
    sys: &LindbladSystem<T>,
) -> (
    ComplexMatrix<T>,
    impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T> + '_,
) {
    (sys.relaxation(), move |rho| sys.repopulation(rho))
}

pub(crate) fn is_zero_block<T: Real>(m: &ComplexMatrix<T>) -> bool {
    m.data().iter().all(|z| z.is_zero())
}
