//! Line-oriented experiment configuration: `key = value` entries under
//! `[section]` headers, `#` comments. Human-diffable and dependency-free.

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

use super::generate::{GeneratorError, GeneratorSpec};
use crate::qsim::CostModel;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing required key `{key}` in [{section}]")]
    MissingKey {
        section: &'static str,
        key: &'static str,
    },
    #[error("invalid value for `{key}`: {value:?}")]
    BadValue { key: &'static str, value: String },
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// The algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmId {
    F0Query,
    FkQuery,
    FInftyQuery,
    F0Stream,
    F2Stream,
    FkStream,
    FInftyStream,
    AmsF2Classical,
}

pub const ALL_ALGORITHMS: [AlgorithmId; 8] = [
    AlgorithmId::F0Query,
    AlgorithmId::FkQuery,
    AlgorithmId::FInftyQuery,
    AlgorithmId::F0Stream,
    AlgorithmId::F2Stream,
    AlgorithmId::FkStream,
    AlgorithmId::FInftyStream,
    AlgorithmId::AmsF2Classical,
];

impl AlgorithmId {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmId::F0Query => "f0_query",
            AlgorithmId::FkQuery => "fk_query",
            AlgorithmId::FInftyQuery => "finf_query",
            AlgorithmId::F0Stream => "f0_stream",
            AlgorithmId::F2Stream => "f2_stream",
            AlgorithmId::FkStream => "fk_stream",
            AlgorithmId::FInftyStream => "finf_stream",
            AlgorithmId::AmsF2Classical => "ams_f2_classical",
        }
    }

    pub fn parse(id: &str) -> Result<Self, ConfigError> {
        ALL_ALGORITHMS
            .iter()
            .copied()
            .find(|a| a.id() == id)
            .ok_or_else(|| ConfigError::UnknownAlgorithm(id.to_string()))
    }
}

/// Where the per-trial stream comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmId,
    pub source: StreamSource,
    pub k: u32,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    pub cost: CostModel,
    /// K override for the F_k query algorithm's round count M = ⌈K/ε²⌉.
    pub rounds_constant: Option<f64>,
    pub output: Option<PathBuf>,
}

/// Raw sections: section name → key → value.
pub type Sections = BTreeMap<String, BTreeMap<String, String>>;

pub fn parse_sections(text: &str) -> Result<Sections, ConfigError> {
    let mut sections: Sections = BTreeMap::new();
    let mut current = String::from("");
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            current = name.trim().to_string();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: i + 1,
                message: format!("expected `key = value`, got {line:?}"),
            });
        };
        sections
            .entry(current.clone())
            .or_default()
            .insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(sections)
}

fn get<'a>(sections: &'a Sections, section: &'static str, key: &'static str) -> Option<&'a String> {
    sections.get(section).and_then(|s| s.get(key))
}

fn require<'a>(
    sections: &'a Sections,
    section: &'static str,
    key: &'static str,
) -> Result<&'a String, ConfigError> {
    get(sections, section, key).ok_or(ConfigError::MissingKey { section, key })
}

fn parse_value<T: std::str::FromStr>(key: &'static str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key,
        value: value.to_string(),
    })
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let sections = parse_sections(text)?;

        let algorithm = AlgorithmId::parse(require(&sections, "experiment", "algorithm")?)?;
        let trials: u64 = parse_value("trials", require(&sections, "experiment", "trials")?)?;
        let seed: u64 = parse_value("seed", require(&sections, "experiment", "seed")?)?;
        let epsilon: f64 = get(&sections, "experiment", "epsilon")
            .map(|v| parse_value("epsilon", v))
            .transpose()?
            .unwrap_or(0.5);
        let k: u32 = get(&sections, "experiment", "k")
            .map(|v| parse_value("k", v))
            .transpose()?
            .unwrap_or(2);
        let output = get(&sections, "experiment", "output").map(PathBuf::from);
        if trials == 0 {
            return Err(ConfigError::BadValue {
                key: "trials",
                value: "0".into(),
            });
        }

        let source = match require(&sections, "stream", "source")?.as_str() {
            "file" => StreamSource::File(PathBuf::from(require(&sections, "stream", "path")?)),
            "generator" => {
                let name = require(&sections, "stream", "generator")?;
                let params: BTreeMap<String, String> = sections
                    .get("stream")
                    .map(|s| {
                        s.iter()
                            .filter(|(k, _)| k.as_str() != "source" && k.as_str() != "generator")
                            .map(|(k, v)| (k.clone(), v.clone()))
                            .collect()
                    })
                    .unwrap_or_default();
                StreamSource::Generator(GeneratorSpec::parse(name, &params)?)
            }
            other => {
                return Err(ConfigError::BadValue {
                    key: "source",
                    value: other.to_string(),
                })
            }
        };

        let mut cost = CostModel::default();
        if let Some(v) = get(&sections, "cost", "c_kdist") {
            cost.c_kdist = parse_value("c_kdist", v)?;
        }
        if let Some(v) = get(&sections, "cost", "c_dsmall") {
            cost.c_dsmall = parse_value("c_dsmall", v)?;
        }
        if let Some(v) = get(&sections, "cost", "min_find_budget") {
            cost.min_find_budget = parse_value("min_find_budget", v)?;
        }
        if let Some(v) = get(&sections, "cost", "failure_injection") {
            cost.failure_injection = parse_value("failure_injection", v)?;
        }
        let rounds_constant = get(&sections, "cost", "rounds_constant")
            .map(|v| parse_value("rounds_constant", v))
            .transpose()?;

        Ok(ExperimentConfig {
            algorithm,
            source,
            k,
            epsilon,
            trials,
            seed,
            cost,
            rounds_constant,
            output,
        })
    }
}
