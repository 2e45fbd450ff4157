//! The quantum-subroutine layer: an exact statevector tier for tiny instances,
//! cost-charged emulators for every subroutine the algorithms invoke, and the
//! resource ledger that makes complexity claims measurable.

pub mod amplitude;
pub mod dsmallest;
pub mod grover;
pub mod kdistinct;
pub mod ledger;
pub mod meanest;
pub mod minfind;
pub mod statevector;

pub use amplitude::{
    ae_estimate_for_outcome, ae_outcome_distribution, ae_outcome_distribution_statevector,
    amplitude_estimate, AeSampler, AeTier,
};
pub use dsmallest::d_smallest_distinct;
pub use grover::{grover_search_statevector, grover_success_probability};
pub use kdistinct::{k_distinctness, KDistinctnessOutcome};
pub use ledger::{
    charged_d_smallest_queries, charged_k_distinctness_queries, charged_mean_estimator_uses,
    k_distinctness_exponent, ChargeUnit, CostModel, ResourceLedger,
};
pub use meanest::mean_estimate_rel_var;
pub use minfind::{durr_hoyer_min, durr_hoyer_min_statevector};
pub use statevector::{oracle_query, Statevector};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QsimError {
    #[error("{qubits} qubits exceed the statevector tier limit")]
    TooManyQubits { qubits: u32 },
    #[error("basis index {basis} out of range for a vector of length {len}")]
    BasisOutOfRange { basis: usize, len: usize },
    #[error("length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("statevector norm {norm} is not 1")]
    NotNormalized { norm: f64 },
    #[error("oracle index {i} out of range for a stream of length {n}")]
    OracleIndexOutOfRange { i: usize, n: usize },
    #[error("register widths do not match: expected {expected}, got {actual}")]
    RegisterMismatch { expected: u32, actual: u32 },
    #[error("universe {universe} does not fit a value register modulo {modulus}")]
    ValueRegisterTooSmall { universe: u64, modulus: u64 },
    #[error("iteration count {m} must be a positive power of two in the statevector tier")]
    IterationsNotPowerOfTwo { m: u32 },
    #[error("relative-variance bound B = {b} violates B >= 1")]
    RelativeVarianceBoundTooSmall { b: f64 },
    #[error("epsilon {epsilon} outside (0, 1)")]
    EpsilonOutOfRange { epsilon: f64 },
}

/// CSV header of the per-trial ledger schema.
pub const LEDGER_CSV_HEADER: &str =
    "trial,seed,algorithm,n,m,k,epsilon,oracle_queries,stream_passes,space_qubits,classical_samples,estimate,true_value";
