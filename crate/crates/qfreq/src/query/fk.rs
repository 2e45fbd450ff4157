//! Query-model F_k for k ≥ 2: find a sample length ℓ at which random
//! subsequences start to contain k-wise collisions (doubling loop over the
//! k-distinctness subroutine), then estimate E[C_k] over M = ⌈K/ε²⌉ rounds.
//! Each round strips one witnessed index at a time until the subroutine says
//! "no", reconstructs a value-consistent sequence B from the witness structure
//! without further queries, and counts collisions on B. The step-4 estimator
//! n^k/(M·binom(ℓ,k))·ΣC^(r) is unbiased for F_k.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::ToPrimitive;
use rand::Rng;

use super::QueryError;
use crate::moments::kwise_collisions;
use crate::qsim::{k_distinctness, CostModel, KDistinctnessOutcome, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

/// Hard cap on the number of estimator rounds a single run may attempt.
pub const ROUNDS_CAP: u64 = 10_000_000;

/// Configuration for the F_k query algorithm. The correctness-analysis
/// constants A = (k/e)·20^{−1/k}, B = 20·k^{2k+1} and
/// K = 5k^{2k+1}B^{4k−2}/A^{2k} are the defaults; they are extremely
/// conservative, so experiment profiles usually override `rounds_constant`
/// downward.
#[derive(Debug, Clone)]
pub struct FkQueryConfig {
    pub k: u32,
    pub epsilon: f64,
    /// K in M = ⌈K/ε²⌉.
    pub rounds_constant: f64,
    /// A: phase-1 lower threshold constant (used by analyses and reports).
    pub lower_threshold: f64,
    /// B: phase-1 upper threshold constant (used by analyses and reports).
    pub upper_threshold: f64,
    /// Fixes ℓ and skips phase 1; used by estimator analyses and tests.
    pub forced_sample_len: Option<usize>,
}

impl FkQueryConfig {
    /// A and B as fixed by the correctness analysis.
    pub fn analysis_thresholds(k: u32) -> (f64, f64) {
        let kf = k as f64;
        let a = kf / std::f64::consts::E * 20f64.powf(-1.0 / kf);
        let b = 20.0 * kf.powi(2 * k as i32 + 1);
        (a, b)
    }

    /// The full conservative constants, including the Chebyshev round count.
    pub fn analysis_constants(k: u32, epsilon: f64) -> Self {
        let (a, b) = Self::analysis_thresholds(k);
        let kf = k as f64;
        let rounds_constant =
            5.0 * kf.powi(2 * k as i32 + 1) * b.powi(4 * k as i32 - 2) / a.powi(2 * k as i32);
        FkQueryConfig {
            k,
            epsilon,
            rounds_constant,
            lower_threshold: a,
            upper_threshold: b,
            forced_sample_len: None,
        }
    }

    /// Analysis thresholds with an explicit (usually much smaller) K.
    pub fn with_rounds_constant(k: u32, epsilon: f64, rounds_constant: f64) -> Self {
        let (a, b) = Self::analysis_thresholds(k);
        FkQueryConfig {
            k,
            epsilon,
            rounds_constant,
            lower_threshold: a,
            upper_threshold: b,
            forced_sample_len: None,
        }
    }

    pub fn rounds(&self) -> u64 {
        (self.rounds_constant / (self.epsilon * self.epsilon)).ceil() as u64
    }
}

/// (1 − 1/k)·(1 − 2^{k−2}/(2^k − 1)): the expected charged-query exponent in n
/// on instances with F_k = Θ(n).
pub fn fk_cost_exponent(k: u32) -> f64 {
    (1.0 - 1.0 / k as f64) * crate::qsim::k_distinctness_exponent(k)
}

/// One verified equal-k-tuple: positions within the sampled sequence plus the
/// shared value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub positions: Vec<usize>,
    pub value: u64,
}

/// Builds a length-ℓ sequence consistent with the witness structure: witnessed
/// positions carry their claimed value, every other position gets a fresh
/// value above `fresh_base`, pairwise distinct. C_k of the result equals C_k
/// of the true sample whenever the witnesses were truthful.
pub fn reconstruct_consistent_sequence(
    ell: usize,
    witnesses: &[Witness],
    fresh_base: u64,
) -> Result<Vec<u64>, QueryError> {
    let mut assigned: HashMap<usize, u64> = HashMap::new();
    for w in witnesses {
        for &p in &w.positions {
            if p >= ell {
                return Err(QueryError::WitnessOutOfRange { position: p, ell });
            }
            match assigned.get(&p) {
                Some(&v) if v != w.value => {
                    return Err(QueryError::InconsistentWitnesses {
                        position: p,
                        first: v,
                        second: w.value,
                    });
                }
                _ => {
                    assigned.insert(p, w.value);
                }
            }
        }
    }
    let mut fresh = fresh_base;
    let out = (0..ell)
        .map(|p| {
            assigned.get(&p).copied().unwrap_or_else(|| {
                fresh += 1;
                fresh
            })
        })
        .collect();
    Ok(out)
}

fn ceil_log2(n: usize) -> u32 {
    (n.max(1) as f64).log2().ceil() as u32
}

/// Phase 1: doubling loop returning the first sample length 2^i at which the
/// k-distinctness subroutine reports a verified collision, or n if none does.
pub fn phase1_sample_length<R: Rng + ?Sized>(
    stream: &Stream,
    k: u32,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> usize {
    let n = stream.n();
    let log_n = ceil_log2(n).max(1);
    let delta = 1.0 / (8.0 * log_n as f64);
    for i in 0..=log_n {
        let len = 1usize << i;
        let values: Vec<u64> = (0..len)
            .map(|_| stream.value_at(rng.random_range(0..n)))
            .collect();
        let outcome = k_distinctness(&values, k, delta, cost, rng, ledger);
        if let KDistinctnessOutcome::Witness { indices, .. } = outcome {
            // accept only a tuple that really is equal in the sample
            let first = values[indices[0]];
            if indices.iter().all(|&j| values[j] == first) {
                return len;
            }
        }
    }
    n
}

/// The result of one estimator round.
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    /// Sampled stream positions s₁…s_ℓ.
    pub positions: Vec<usize>,
    /// C^(r): collisions of the reconstructed sequence.
    pub collisions: u64,
}

/// One estimator round: sample ℓ positions, strip verified witnesses until
/// "no", reconstruct, and count C_k without further queries.
pub fn estimator_round<R: Rng + ?Sized>(
    stream: &Stream,
    ell: usize,
    k: u32,
    delta: f64,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<RoundOutcome, QueryError> {
    let n = stream.n();
    let positions: Vec<usize> = (0..ell).map(|_| rng.random_range(0..n)).collect();
    let sample: Vec<u64> = positions.iter().map(|&p| stream.value_at(p)).collect();

    // alive[i] = original sample position of the i-th remaining element
    let mut alive: Vec<usize> = (0..ell).collect();
    let mut witnesses: Vec<Witness> = Vec::new();
    for _ in 0..ell {
        let sub_values: Vec<u64> = alive.iter().map(|&p| sample[p]).collect();
        match k_distinctness(&sub_values, k, delta, cost, rng, ledger) {
            KDistinctnessOutcome::No => break,
            KDistinctnessOutcome::Witness {
                indices,
                claimed_value,
            } => {
                let positions: Vec<usize> = indices.iter().map(|&j| alive[j]).collect();
                let truthful = positions.iter().all(|&p| sample[p] == claimed_value);
                if truthful {
                    let strip = *positions.last().expect("witness has k >= 2 indices");
                    witnesses.push(Witness {
                        positions,
                        value: claimed_value,
                    });
                    alive.retain(|&p| p != strip);
                }
                // a tuple that fails verification is discarded and the
                // subroutine re-run, bounded by the ℓ-iteration cap
            }
        }
    }

    let reconstructed = reconstruct_consistent_sequence(ell, &witnesses, stream.universe())?;
    let collisions = kwise_collisions(&reconstructed, k)
        .to_u64()
        .expect("collision counts at sample scale fit u64");
    Ok(RoundOutcome {
        positions,
        collisions,
    })
}

pub fn approx_fk_query<R: Rng + ?Sized>(
    stream: &Stream,
    config: &FkQueryConfig,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, QueryError> {
    let k = config.k;
    if k < 2 {
        return Err(QueryError::UnsupportedMomentIndex { k, min: 2 });
    }
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(QueryError::EpsilonOutOfRange {
            epsilon: config.epsilon,
        });
    }
    if stream.is_empty() {
        return Err(QueryError::EmptyStream);
    }
    let rounds = config.rounds();
    if rounds > ROUNDS_CAP {
        return Err(QueryError::RoundsCapExceeded {
            rounds,
            cap: ROUNDS_CAP,
        });
    }

    let ell = match config.forced_sample_len {
        Some(forced) => forced,
        None => phase1_sample_length(stream, k, cost, rng, ledger),
    };

    let delta = config.epsilon * config.epsilon / (8.0 * config.rounds_constant * ell as f64);
    let mut total: u64 = 0;
    for _ in 0..rounds {
        total += estimator_round(stream, ell, k, delta, cost, rng, ledger)?.collisions;
    }

    let n = stream.n();
    let scale = BigUint::from(n as u64)
        .pow(k)
        .to_f64()
        .unwrap_or(f64::INFINITY)
        / (rounds as f64
            * binomial(BigUint::from(ell as u64), BigUint::from(k))
                .to_f64()
                .unwrap_or(f64::INFINITY));
    Ok(MomentEstimate {
        value: scale * total as f64,
        k: MomentIndex::Finite(k),
        epsilon: config.epsilon,
        confidence: 0.75,
    })
}
