//! Streaming F_k for k > 2: the tail-occurrence estimator. For a uniform
//! position i, N(i) = |{j ≥ i : a_j = a_i}| is computable in one pass (and
//! uncomputable in a second), and N_k(i) = n·(N(i)^k − (N(i)−1)^k) has mean
//! exactly F_k and variance ≤ k·m^{1−1/k}·F_k², so the bounded-relative-
//! variance estimator applies with B = 1 + k·m^{1−1/k}.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::pass::{counter_width, RegisterBank};
use super::StreamAlgoError;
use crate::qsim::{mean_estimate_rel_var, ChargeUnit, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

/// N(i) for every position, j ≥ i inclusive (so N(i) ≥ 1), from one backward
/// scan.
pub fn tail_occurrences(stream: &Stream) -> Vec<u64> {
    let mut seen: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    let mut out = vec![0u64; stream.n()];
    for i in (0..stream.n()).rev() {
        let c = seen.entry(stream.value_at(i)).or_insert(0);
        *c += 1;
        out[i] = *c;
    }
    out
}

/// N_k(i) = n·(N(i)^k − (N(i)−1)^k) in exact arithmetic.
pub fn nk_estimator_value(n: usize, tail: u64, k: u32) -> BigUint {
    let big_n = BigUint::from(n as u64);
    big_n * (BigUint::from(tail).pow(k) - BigUint::from(tail - 1).pow(k))
}

/// Exact-enumeration mean of N_k over i: equals F_k as an integer identity
/// (Σ_i N_k(i) telescopes to n·F_k).
pub fn nk_enumeration_mean(stream: &Stream, k: u32) -> Result<BigUint, StreamAlgoError> {
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }
    let n = stream.n();
    let total: BigUint = tail_occurrences(stream)
        .iter()
        .fold(BigUint::zero(), |acc, &t| acc + nk_estimator_value(n, t, k));
    let n_big = BigUint::from(n as u64);
    debug_assert!(
        (&total % &n_big).is_zero(),
        "telescoping sum must divide by n"
    );
    Ok(total / n_big)
}

/// B = 1 + k·m^{1−1/k}, the declared relative second moment bound.
pub fn nk_relative_second_moment_bound(m: u64, k: u32) -> f64 {
    1.0 + k as f64 * (m as f64).powf(1.0 - 1.0 / k as f64)
}

pub fn approx_fk_stream<R: Rng + ?Sized>(
    stream: &Stream,
    k: u32,
    epsilon: f64,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, StreamAlgoError> {
    if k <= 2 {
        return Err(StreamAlgoError::UnsupportedMomentIndex { k, min: 3 });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(StreamAlgoError::EpsilonOutOfRange { epsilon });
    }
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }
    let n = stream.n();
    RegisterBank::new()
        .with("position", counter_width(n as u64))
        .with("tail_counter", counter_width(n as u64 + 1))
        .record(ledger);

    // per-position tails precomputed once; each draw charges one two-pass
    // compute/uncompute cycle
    let tails = tail_occurrences(stream);
    let nk: Vec<f64> = tails
        .iter()
        .map(|&t| {
            let tf = t as f64;
            n as f64 * (tf.powi(k as i32) - (tf - 1.0).powi(k as i32))
        })
        .collect();

    let b = nk_relative_second_moment_bound(stream.universe(), k);
    let value = mean_estimate_rel_var(
        |r: &mut R| nk[r.random_range(0..n)],
        b,
        epsilon,
        ChargeUnit::PASS_PAIR,
        rng,
        ledger,
    )?;

    Ok(MomentEstimate {
        value,
        k: MomentIndex::Finite(k),
        epsilon,
        confidence: 2.0 / 3.0,
    })
}
