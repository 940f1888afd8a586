//! Spectral analysis: classification, degeneracy detection, sweeps and EP search.

mod builders;
mod checks;
mod classify;
mod correspondence;
mod degeneracy;
mod matching;
mod search;
mod sweep;
mod triplet;

pub use builders::{eff3_hybrid, eff3_operator, full4_hybrid};
pub use checks::{
    asymptote_check, evolve_check, group_by_real_part, stationary_state, AsymptoteCheck,
    AsymptoteKind, EvolveCheck,
};
pub use classify::{
    classify, classify_value, default_tol_class, default_tol_cluster, spectral_scale, splittings,
    EigClass, EigKind, Splitting, SplittingTable,
};
pub use correspondence::{correspondence_check, pairwise_spectrum};
pub use degeneracy::{
    cluster_values, detect_degeneracy, detect_degeneracy_default, partition_from_nullities,
    DegeneracyKind, EPReport,
};
pub use matching::{bottleneck_matching, multiset_distance};
pub use search::{
    census, find_ep, gap_objective, Census, EpSearch, FindEpOptions, SearchAxis, SeedOutcome,
    CENSUS_LINE_POINTS,
};
pub use sweep::{
    linspace, match_consecutive, min_pairwise_gap, sweep, track_branches, SweepResult,
};
pub use triplet::{track_hybrid_triplet, TripletTrack};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::model::ModelError;
use crate::superop::SuperopError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Superop(#[from] SuperopError),
    #[error("expected {expected} values, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid search box: {0}")]
    InvalidBox(String),
    #[error("model builder failed: {0}")]
    Builder(String),
    #[error("generator is not trace preserving; time evolution needs q = 1")]
    NotTracePreserving,
    #[error("initial state rejected: {0}")]
    InvalidState(String),
}
