//! Input data model: streams over a bounded universe, frequency vectors, sample
//! tuples, and the text file format shared with the CLI.
//!
//! Values are 1-based (`1..=m`) to match the file format; positions into a
//! stream are 0-based everywhere in the library.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamError {
    #[error("value {value} at position {position} is outside the universe [1, {m}]")]
    ValueOutOfRange { position: usize, value: u64, m: u64 },
    #[error("universe size must be positive")]
    EmptyUniverse,
}

/// A finite sequence a₁…a_n of values in `{1, …, m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    items: Vec<u64>,
    m: u64,
}

impl Stream {
    pub fn new(items: Vec<u64>, m: u64) -> Result<Self, StreamError> {
        if m == 0 {
            return Err(StreamError::EmptyUniverse);
        }
        for (position, &value) in items.iter().enumerate() {
            if value == 0 || value > m {
                return Err(StreamError::ValueOutOfRange { position, value, m });
            }
        }
        Ok(Stream { items, m })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn universe(&self) -> u64 {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Value at 0-based position `i`.
    pub fn value_at(&self, i: usize) -> u64 {
        self.items[i]
    }
}

/// Multiplicity n_j for every value j that occurs in a stream.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyVector {
    counts: BTreeMap<u64, u64>,
}

impl FrequencyVector {
    pub fn of(stream: &Stream) -> Self {
        let mut counts = BTreeMap::new();
        for &v in stream.items() {
            *counts.entry(v).or_insert(0) += 1;
        }
        FrequencyVector { counts }
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Number of distinct values, i.e. F₀.
    pub fn distinct(&self) -> u64 {
        self.counts.len() as u64
    }

    /// Sum of all multiplicities, i.e. n.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_count(&self) -> Option<u64> {
        self.counts.values().copied().max()
    }
}

/// Computes the frequency vector of a stream.
pub fn frequency_vector(stream: &Stream) -> FrequencyVector {
    FrequencyVector::of(stream)
}

/// Moment index: a finite k or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentIndex {
    Finite(u32),
    Infinity,
}

impl fmt::Display for MomentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentIndex::Finite(k) => write!(f, "{k}"),
            MomentIndex::Infinity => write!(f, "inf"),
        }
    }
}

/// The output of an approximation algorithm, with its claimed guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub value: f64,
    pub k: MomentIndex,
    /// Target relative error, in (0, 1]; 0 denotes an exact-output algorithm.
    pub epsilon: f64,
    /// Claimed success probability of the guarantee.
    pub confidence: f64,
}

/// A tuple s₁…s_ℓ of sampled stream positions (0-based, repetition allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleTuple {
    positions: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("sample position {position} is out of range for a stream of length {n}")]
    PositionOutOfRange { position: usize, n: usize },
}

impl SampleTuple {
    pub fn new(positions: Vec<usize>, n: usize) -> Result<Self, SampleError> {
        for &position in &positions {
            if position >= n {
                return Err(SampleError::PositionOutOfRange { position, n });
            }
        }
        Ok(SampleTuple { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum StreamFileError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: value {value} is outside the universe [1, {m}]")]
    OutOfRange { line: usize, value: u64, m: u64 },
}

/// Reads the stream file format: first line `n m`, then n lines with one value each.
pub fn read_stream<R: BufRead>(reader: R) -> Result<Stream, StreamFileError> {
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| StreamFileError::Malformed {
        line: 1,
        message: "missing `n m` header".into(),
    })??;
    let mut parts = header.split_whitespace();
    let n: usize =
        parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| StreamFileError::Malformed {
                line: 1,
                message: "header must be `n m`".into(),
            })?;
    let m: u64 =
        parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| StreamFileError::Malformed {
                line: 1,
                message: "header must be `n m`".into(),
            })?;
    if parts.next().is_some() {
        return Err(StreamFileError::Malformed {
            line: 1,
            message: "header must contain exactly two fields".into(),
        });
    }
    let mut items = Vec::with_capacity(n);
    for i in 0..n {
        let line_no = i + 2;
        let line = lines.next().ok_or_else(|| StreamFileError::Malformed {
            line: line_no,
            message: format!("expected {n} values, file ended early"),
        })??;
        let value: u64 = line
            .trim()
            .parse()
            .map_err(|_| StreamFileError::Malformed {
                line: line_no,
                message: format!("not a decimal integer: {:?}", line.trim()),
            })?;
        if value == 0 || value > m {
            return Err(StreamFileError::OutOfRange {
                line: line_no,
                value,
                m,
            });
        }
        items.push(value);
    }
    Stream::new(items, m).map_err(|e| StreamFileError::Malformed {
        line: 1,
        message: e.to_string(),
    })
}

/// Writes the stream file format; the exact inverse of [`read_stream`].
pub fn write_stream<W: Write>(mut writer: W, stream: &Stream) -> io::Result<()> {
    writeln!(writer, "{} {}", stream.n(), stream.universe())?;
    for &v in stream.items() {
        writeln!(writer, "{v}")?;
    }
    Ok(())
}

pub fn load_stream<P: AsRef<Path>>(path: P) -> Result<Stream, StreamFileError> {
    read_stream(BufReader::new(File::open(path)?))
}

pub fn save_stream<P: AsRef<Path>>(path: P, stream: &Stream) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stream(&mut w, stream)?;
    w.flush()
}
