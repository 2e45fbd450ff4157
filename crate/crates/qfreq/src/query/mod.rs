//! Query-model algorithms: F₀ via d-smallest distinct hash values, F_k via
//! k-wise collision counting with k-distinctness, and F∞ via binary search
//! over gapped k-distinctness.

pub mod f0;
pub mod finfty;
pub mod fk;

pub use f0::{approx_f0_query, f0_sample_budget};
pub use finfty::{approx_f_infty_query, gapped_k_distinctness, GappedOutcome};
pub use fk::{
    approx_fk_query, estimator_round, fk_cost_exponent, reconstruct_consistent_sequence,
    FkQueryConfig, RoundOutcome, Witness,
};

use thiserror::Error;

use crate::hashfam::HashFamilyError;

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("epsilon {epsilon} outside (0, 1]")]
    EpsilonOutOfRange { epsilon: f64 },
    #[error("k = {k} is not supported here; need k >= {min}")]
    UnsupportedMomentIndex { k: u32, min: u32 },
    #[error("stream is empty")]
    EmptyStream,
    #[error("round count {rounds} exceeds the configured cap {cap}")]
    RoundsCapExceeded { rounds: u64, cap: u64 },
    #[error("witness conflict: position {position} claimed as both {first} and {second}")]
    InconsistentWitnesses {
        position: usize,
        first: u64,
        second: u64,
    },
    #[error("witness position {position} out of range for sample length {ell}")]
    WitnessOutOfRange { position: usize, ell: usize },
    #[error(transparent)]
    Family(#[from] HashFamilyError),
}
