//! Experiment execution: per-trial seeds derived from the master seed, trials
//! fanned out to the worker pool, one CSV row per trial in the ledger schema
//! plus success indicator and generator label. Identical config and seed give
//! byte-identical output.

use std::fmt::Write as _;
use std::fs;
use std::io;

use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::config::{AlgorithmId, ExperimentConfig, StreamSource};
use super::generate::GeneratorError;
use crate::moments::{exact_f_infty, exact_moment};
use crate::qsim::{AeTier, ResourceLedger};
use crate::query::{
    approx_f0_query, approx_f_infty_query, approx_fk_query, FkQueryConfig, QueryError,
};
use crate::stream::{MomentEstimate, MomentIndex, Stream, StreamFileError};
use crate::streaming::{
    ams_f2_classical, approx_f0_stream, approx_f2_stream, approx_fk_stream, f_infty_stream,
    StreamAlgoError,
};
use crate::{rng, trials};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("stream file: {0}")]
    StreamFile(#[from] StreamFileError),
    #[error("trial {trial}: {message}")]
    Trial { trial: u64, message: String },
    #[error("writing {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// One CSV row; fields mirror the ledger schema exactly.
#[derive(Debug, Clone)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub algorithm: &'static str,
    pub n: usize,
    pub m: u64,
    pub k: MomentIndex,
    pub epsilon: f64,
    pub ledger: ResourceLedger,
    pub estimate: f64,
    pub true_value: f64,
    pub success: bool,
    pub generator: String,
}

pub const RESULT_CSV_HEADER: &str = concat!(
    "trial,seed,algorithm,n,m,k,epsilon,oracle_queries,stream_passes,space_qubits,",
    "classical_samples,estimate,true_value,success,generator"
);

impl TrialRow {
    pub fn to_csv_line(&self) -> String {
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.seed,
            self.algorithm,
            self.n,
            self.m,
            self.k,
            self.epsilon,
            self.ledger.oracle_queries(),
            self.ledger.stream_passes(),
            self.ledger.space_qubits(),
            self.ledger.classical_samples(),
            self.estimate,
            self.true_value,
            self.success as u8,
            self.generator
        )
        .expect("writing to a String cannot fail");
        s
    }
}

/// The moment index an algorithm estimates.
fn target_moment(algorithm: AlgorithmId, k: u32) -> MomentIndex {
    match algorithm {
        AlgorithmId::F0Query | AlgorithmId::F0Stream => MomentIndex::Finite(0),
        AlgorithmId::F2Stream | AlgorithmId::AmsF2Classical => MomentIndex::Finite(2),
        AlgorithmId::FkQuery | AlgorithmId::FkStream => MomentIndex::Finite(k),
        AlgorithmId::FInftyQuery | AlgorithmId::FInftyStream => MomentIndex::Infinity,
    }
}

fn true_value(stream: &Stream, k: MomentIndex) -> f64 {
    match k {
        MomentIndex::Finite(k) => exact_moment(stream, k).to_f64().unwrap_or(f64::INFINITY),
        MomentIndex::Infinity => exact_f_infty(stream).map(|v| v as f64).unwrap_or(f64::NAN),
    }
}

fn dispatch(
    config: &ExperimentConfig,
    stream: &Stream,
    rng: &mut ChaCha8Rng,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, String> {
    let cost = &config.cost;
    match config.algorithm {
        AlgorithmId::F0Query => {
            approx_f0_query(stream, config.epsilon, cost, rng, ledger).map_err(|e| e.to_string())
        }
        AlgorithmId::FkQuery => {
            let fk_config = match config.rounds_constant {
                Some(k_const) => {
                    FkQueryConfig::with_rounds_constant(config.k, config.epsilon, k_const)
                }
                None => FkQueryConfig::analysis_constants(config.k, config.epsilon),
            };
            approx_fk_query(stream, &fk_config, cost, rng, ledger).map_err(|e| e.to_string())
        }
        AlgorithmId::FInftyQuery => approx_f_infty_query(stream, config.epsilon, cost, rng, ledger)
            .map_err(|e: QueryError| e.to_string()),
        AlgorithmId::F0Stream => approx_f0_stream(
            stream,
            config.epsilon,
            AeTier::ClosedForm,
            cost,
            rng,
            ledger,
        )
        .map(|out| out.estimate)
        .map_err(|e: StreamAlgoError| e.to_string()),
        AlgorithmId::F2Stream => {
            approx_f2_stream(stream, config.epsilon, rng, ledger).map_err(|e| e.to_string())
        }
        AlgorithmId::FkStream => approx_fk_stream(stream, config.k, config.epsilon, rng, ledger)
            .map_err(|e| e.to_string()),
        AlgorithmId::FInftyStream => {
            f_infty_stream(stream, cost, rng, ledger).map_err(|e| e.to_string())
        }
        AlgorithmId::AmsF2Classical => {
            ams_f2_classical(stream, config.epsilon, rng, ledger).map_err(|e| e.to_string())
        }
    }
}

fn run_trial(
    config: &ExperimentConfig,
    base_stream: Option<&Stream>,
    trial: u64,
) -> Result<TrialRow, RunError> {
    let seed = rng::trial_seed(config.seed, trial);
    let mut trial_rng = rng::trial_rng(config.seed, trial);

    let (stream, generator_label) = match (&config.source, base_stream) {
        (StreamSource::File(path), Some(s)) => (s.clone(), format!("file:{}", path.display())),
        (StreamSource::Generator(spec), _) => {
            let inst = spec.generate(&mut trial_rng)?;
            (inst.stream, spec.name().to_string())
        }
        (StreamSource::File(path), None) => (
            crate::stream::load_stream(path)?,
            format!("file:{}", path.display()),
        ),
    };

    let k = target_moment(config.algorithm, config.k);
    let truth = true_value(&stream, k);
    let mut ledger = ResourceLedger::new();
    let estimate = dispatch(config, &stream, &mut trial_rng, &mut ledger)
        .map_err(|message| RunError::Trial { trial, message })?;
    // exact-output algorithms (epsilon 0) succeed only on equality
    let tolerance = estimate.epsilon * truth;
    let success = (estimate.value - truth).abs() <= tolerance;

    Ok(TrialRow {
        trial,
        seed,
        algorithm: config.algorithm.id(),
        n: stream.n(),
        m: stream.universe(),
        k,
        epsilon: config.epsilon,
        ledger,
        estimate: estimate.value,
        true_value: truth,
        success,
        generator: generator_label,
    })
}

/// Runs every trial (in parallel when enabled), ordered by trial index.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRow>, RunError> {
    // file sources load once; generator sources draw per trial
    let base_stream = match &config.source {
        StreamSource::File(path) => Some(crate::stream::load_stream(path)?),
        StreamSource::Generator(_) => None,
    };

    let results: Vec<Result<TrialRow, RunError>> =
        trials::map_trials(config.trials as usize, |t| {
            run_trial(config, base_stream.as_ref(), t as u64)
        });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }
    Ok(rows)
}

/// Renders rows as the result CSV, header included.
pub fn rows_to_csv(rows: &[TrialRow]) -> String {
    let mut out = String::from(RESULT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

/// Runs the experiment and writes its CSV when the config names an output.
pub fn run_and_write(config: &ExperimentConfig) -> Result<Vec<TrialRow>, RunError> {
    let rows = run_experiment(config)?;
    if let Some(path) = &config.output {
        fs::write(path, rows_to_csv(&rows)).map_err(|source| RunError::Output {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(rows)
}
