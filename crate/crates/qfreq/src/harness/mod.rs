//! The experiment harness: configuration, instance generators, theory-curve
//! tables, the trial runner with its CSV ledger output, and the verification
//! suites behind `qfreq verify`.

pub mod config;
pub mod generate;
pub mod runner;
pub mod theory;
pub mod verify;

pub use config::{AlgorithmId, ConfigError, ExperimentConfig, StreamSource, ALL_ALGORITHMS};
pub use generate::{EqualityVariant, GeneratedInstance, GeneratorError, GeneratorSpec};
pub use runner::{
    rows_to_csv, run_and_write, run_experiment, RunError, TrialRow, RESULT_CSV_HEADER,
};
pub use theory::{theory_table, CurveId, CurveRole, TheoryError, ALL_CURVES};
pub use verify::{run_suite, CheckResult, VerifyError};
