//! The multiple-pass streaming runtime and algorithms: F₀ by amplitude
//! estimation over hash families, F₂ and F_k by bounded-relative-variance
//! mean estimation, F∞ by streaming Dürr–Høyer, plus the classical AMS
//! baseline.

pub mod f0;
pub mod f2;
pub mod finfty;
pub mod fk;
pub mod pass;

pub use f0::{
    ae_iterations_for, algorithm3_pass_count, approx_f0_stream, rough_f0, wise_independence_for,
    StreamF0Outcome,
};
pub use f2::{ams_f2_classical, approx_f2_stream, exact_sign_estimator_moments};
pub use finfty::f_infty_stream;
pub use fk::{approx_fk_stream, nk_enumeration_mean, tail_occurrences};
pub use pass::{boolean_any_hash_one, family_one_probability_enumerated, PassRunner, RegisterBank};

use thiserror::Error;

use crate::hashfam::HashFamilyError;
use crate::qsim::QsimError;

#[derive(Debug, Error)]
pub enum StreamAlgoError {
    #[error("stream is empty")]
    EmptyStream,
    #[error("epsilon {epsilon} outside the supported range")]
    EpsilonOutOfRange { epsilon: f64 },
    #[error("k = {k} is not supported here; need k >= {min}")]
    UnsupportedMomentIndex { k: u32, min: u32 },
    #[error(transparent)]
    Family(#[from] HashFamilyError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}
