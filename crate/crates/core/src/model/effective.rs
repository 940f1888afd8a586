use num_complex::Complex;

use super::system::is_zero_block;
use super::{build_full4_rwa, LindbladSystem, ModelError, ModelParams};
use crate::linalg::{inverse, ComplexMatrix, LinalgError};
use crate::scalar::Real;

const GROUND_DIM: usize = 3;

/// Ground-state model left after eliminating the excited manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveReduction<T> {
    /// Hermitian effective Hamiltonian.
    pub h_eff: ComplexMatrix<T>,
    /// Effective spontaneous-emission jumps, one per emission channel of the
    /// source system and in the same order.
    pub l_eff: Vec<(String, ComplexMatrix<T>)>,
    /// `h_eff − (i/2) Σ l_effᴴ l_eff`.
    pub h_nh: ComplexMatrix<T>,
    /// Jumps acting only inside the ground manifold, carried over unchanged.
    pub ground_jumps: Vec<(String, ComplexMatrix<T>)>,
}

impl<T: Real> EffectiveReduction<T> {
    pub fn system(&self) -> LindbladSystem<T> {
        let jumps = self
            .l_eff
            .iter()
            .chain(&self.ground_jumps)
            .cloned()
            .collect();
        LindbladSystem::new(self.h_eff.clone(), jumps, true)
            .expect("effective Hamiltonian is Hermitian")
    }
}

/// Effective operator reduction of a 3-level ground + excited system:
/// `H_eff = H_g − ½ V₋ (K + Kᴴ) V₊`, `L_eff = L K V₊` with
/// `K = (H_e − (i/2) Σ LᴴL)⁻¹`.
///
/// Jumps whose only entries map excited to ground states are treated as
/// spontaneous emission; jumps inside the ground block are passed through.
pub fn reduce_effective<T: Real>(
    sys4: &LindbladSystem<T>,
    p: &ModelParams<T>,
) -> Result<EffectiveReduction<T>, ModelError> {
    let n = sys4.dim();
    if n <= GROUND_DIM {
        return Err(ModelError::Layout(n));
    }
    let ne = n - GROUND_DIM;
    let slow = [p.j, p.delta_rf.abs(), p.omega_r, p.delta_opt.abs()]
        .into_iter()
        .fold(T::zero(), |a, b| a.max(b));
    if p.gamma_sp < T::of(10.0) * slow {
        log::warn!(
            "spontaneous rate {:e} does not dominate the ground-state scales ({:e}); the reduction is unreliable",
            p.gamma_sp.to_f64(),
            slow.to_f64()
        );
    }

    let h = sys4.hamiltonian();
    let h_g = h.sub_matrix(0, 0, GROUND_DIM, GROUND_DIM);
    let h_e = h.sub_matrix(GROUND_DIM, GROUND_DIM, ne, ne);
    let v_plus = h.sub_matrix(GROUND_DIM, 0, ne, GROUND_DIM);
    let v_minus = h.sub_matrix(0, GROUND_DIM, GROUND_DIM, ne);

    let mut spont = Vec::new();
    let mut ground_jumps = Vec::new();
    for (label, l) in sys4.jumps() {
        let gg = l.sub_matrix(0, 0, GROUND_DIM, GROUND_DIM);
        let ge = l.sub_matrix(0, GROUND_DIM, GROUND_DIM, ne);
        let eg = l.sub_matrix(GROUND_DIM, 0, ne, GROUND_DIM);
        let ee = l.sub_matrix(GROUND_DIM, GROUND_DIM, ne, ne);
        if !is_zero_block(&eg)
            || !is_zero_block(&ee)
            || (!is_zero_block(&gg) && !is_zero_block(&ge))
        {
            return Err(ModelError::Layout(n));
        }
        if is_zero_block(&gg) {
            spont.push((label.clone(), ge));
        } else {
            ground_jumps.push((label.clone(), gg));
        }
    }

    let half_i = Complex::new(T::zero(), T::of(0.5));
    let mut decay = ComplexMatrix::zeros(ne, ne);
    for (_, l) in &spont {
        decay += &(&l.adjoint() * l);
    }
    let h_enh = &h_e - &decay.scale(half_i);
    let k = inverse(&h_enh).map_err(|e| match e {
        LinalgError::Singular => ModelError::SingularExcited,
        other => ModelError::Linalg(other),
    })?;

    let k_sym = &k + &k.adjoint();
    let h_eff = &h_g - &(&(&v_minus * &k_sym) * &v_plus).scale_real(T::of(0.5));

    let k_v = &k * &v_plus;
    let l_eff: Vec<(String, ComplexMatrix<T>)> = spont
        .iter()
        .map(|(label, l)| (format!("{label}_eff"), l * &k_v))
        .collect();

    let mut relax = ComplexMatrix::zeros(GROUND_DIM, GROUND_DIM);
    for (_, l) in &l_eff {
        relax += &(&l.adjoint() * l);
    }
    let h_nh = &h_eff - &relax.scale(half_i);
    Ok(EffectiveReduction {
        h_eff,
        l_eff,
        h_nh,
        ground_jumps,
    })
}

/// Effective 3-level system of [`build_full4_rwa`] at `p`.
pub fn build_eff3<T: Real>(p: &ModelParams<T>) -> Result<LindbladSystem<T>, ModelError> {
    Ok(reduce_effective(&build_full4_rwa(p), p)?.system())
}
