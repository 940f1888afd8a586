//! Builders for the driven, dissipative f=1 → F=0 atom: the 4-level
//! Hamiltonian in the lab and rotating frames, spontaneous-emission and
//! ground-relaxation jumps, and the effective 3-level ground-state model.

mod builders;
mod effective;
mod params;
mod system;

pub use builders::{
    build_full4_rwa, build_full4_rwa_with, build_full4_time_dep, build_ground_relaxation,
    build_grwa_generator, build_spont_jumps, JumpPhase,
};
pub use effective::{build_eff3, reduce_effective, EffectiveReduction};
pub use params::{ModelParams, DEFAULT_GAMMA_SP, PARAM_NAMES};
pub use system::{gamma_lambda_forms, LindbladSystem};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("dipole transition f={f} -> F={big_f} is forbidden")]
    TransitionForbidden { f: String, big_f: String },
    #[error("operator {label} is {found:?}, expected {dim}x{dim}")]
    OperatorShape {
        label: String,
        dim: usize,
        found: (usize, usize),
    },
    #[error("Hamiltonian tagged Hermitian deviates from its adjoint by {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("excited-state non-Hermitian Hamiltonian is singular")]
    SingularExcited,
    #[error("system does not have the 3+1 ground/excited layout (dim {0})")]
    Layout(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
