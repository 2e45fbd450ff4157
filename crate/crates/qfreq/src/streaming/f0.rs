//! Streaming F₀: a one-pass classical rough estimate R with 2F₀ ≤ R ≤ 50F₀,
//! then amplitude estimation of p = Pr_j[∃i: h_j(a_i) = 1] over a t-wise
//! family [m] → [R] with t = ⌈ln(300/ε)/ln5⌉, inverted through
//! F̃₀ = ln(1−p̃)/ln(1−1/R).
//!
//! Pass accounting is a closed form: 5 rough-estimate passes (median of 5
//! one-pass runs) plus 3 amplitude-estimation runs of 4·M_AE passes each,
//! with M_AE the smallest power of two at which the AE error bound reaches
//! ε/300. At production scale the AE outcome is sampled around the
//! ideal-family probability 1 − (1−1/R)^{F₀}; a t-wise family this sharp
//! deviates from it by at most ε/300, a term the error budget reserves.

use rand::Rng;

use super::pass::{counter_width, PassRunner, RegisterBank};
use super::StreamAlgoError;
use crate::hashfam::{make_family, HashFamily, RangePolicy};
use crate::qsim::{AeSampler, AeTier, ChargeUnit, CostModel, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

use std::f64::consts::PI;

/// Number of independent trailing-zero sketches medianed inside one rough pass.
const ROUGH_HASHES: usize = 9;
/// Scale applied to the medianed sketch so the window [2F₀, 50F₀] is centered.
const ROUGH_SCALE: u64 = 10;
/// Repetitions of the rough estimate (one pass each), medianed.
const ROUGH_REPETITIONS: usize = 5;
/// Amplitude-estimation runs, medianed.
const AE_RUNS: u64 = 3;

/// One classical pass, space O(log m): max trailing zeros of a pairwise hash,
/// medianed over 9 hashes and scaled so that Pr[2F₀ ≤ R ≤ 50F₀] ≥ 3/5.
pub fn rough_f0<R: Rng + ?Sized>(
    stream: &Stream,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<u64, StreamAlgoError> {
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }
    let m = stream.universe();
    let width = 64 - m.leading_zeros() as u64 + 1; // range 2^width >= 2m
    let family = make_family(2, m, 1u128 << width, RangePolicy::default())?;
    let hashes: Vec<_> = (0..ROUGH_HASHES).map(|_| family.sample(rng)).collect();

    let mut max_tz = [0u32; ROUGH_HASHES];
    let runner = PassRunner::new(stream);
    runner.pass(ledger, |v| {
        for (h, tz) in hashes.iter().zip(max_tz.iter_mut()) {
            let bits = (h.eval(v) - 1) as u64; // uniform on [0, 2^width)
            let rho = if bits == 0 {
                width as u32
            } else {
                bits.trailing_zeros()
            };
            *tz = (*tz).max(rho);
        }
    });

    RegisterBank::new()
        .with("rough_sketches", ROUGH_HASHES as u64 * counter_width(width))
        .with(
            "rough_hash_spec",
            ROUGH_HASHES as u64 * 2 * counter_width(family.field_prime() as u64),
        )
        .record(ledger);

    max_tz.sort_unstable();
    let median = max_tz[ROUGH_HASHES / 2];
    Ok((ROUGH_SCALE << median.min(62)).max(2))
}

/// Median of 5 one-pass rough estimates.
pub fn amplified_rough_f0<R: Rng + ?Sized>(
    stream: &Stream,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<u64, StreamAlgoError> {
    let mut estimates = Vec::with_capacity(ROUGH_REPETITIONS);
    for _ in 0..ROUGH_REPETITIONS {
        estimates.push(rough_f0(stream, rng, ledger)?);
    }
    estimates.sort_unstable();
    Ok(estimates[ROUGH_REPETITIONS / 2])
}

/// t = ⌈ln(300/ε)/ln5⌉.
pub fn wise_independence_for(epsilon: f64) -> u32 {
    ((300.0 / epsilon).ln() / 5f64.ln()).ceil() as u32
}

/// Smallest power of two M with π/M + π²/M² ≤ ε/300 (the AE additive bound at
/// worst-case p).
pub fn ae_iterations_for(epsilon: f64) -> u32 {
    let target = epsilon / 300.0;
    let mut m = 2u32;
    while PI / m as f64 + PI * PI / (m as f64 * m as f64) > target {
        m = m
            .checked_mul(2)
            .expect("AE register exceeds u32; epsilon too small for desk scale");
    }
    m
}

/// The recorded closed-form pass count of the streaming F₀ algorithm.
pub fn algorithm3_pass_count(epsilon: f64) -> u64 {
    ROUGH_REPETITIONS as u64 + AE_RUNS * 4 * ae_iterations_for(epsilon) as u64
}

/// Inverts p̃ into the F₀ estimate: ln(1−p̃)/ln(1−1/R).
pub fn invert_one_probability(p_tilde: f64, rough_range: u64) -> f64 {
    (-p_tilde).ln_1p() / (-1.0 / rough_range as f64).ln_1p()
}

#[derive(Debug, Clone)]
pub struct StreamF0Outcome {
    pub estimate: MomentEstimate,
    /// R from the amplified rough pass.
    pub rough_range: u64,
    /// The hash family the run drew from (for the reproducibility record).
    pub family: HashFamily,
    /// Set when p̃ = 1 was clamped to 1 − 1/(2R) before inversion.
    pub clamped: bool,
}

pub fn approx_f0_stream<R: Rng + ?Sized>(
    stream: &Stream,
    epsilon: f64,
    tier: AeTier,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<StreamF0Outcome, StreamAlgoError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(StreamAlgoError::EpsilonOutOfRange { epsilon });
    }
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }

    let rough_range = amplified_rough_f0(stream, rng, ledger)?;
    let t = wise_independence_for(epsilon);
    let family = make_family(
        t,
        stream.universe(),
        rough_range as u128,
        RangePolicy::default(),
    )?;

    let m_ae = ae_iterations_for(epsilon);
    RegisterBank::new()
        .with(
            "hash_index",
            t as u64 * counter_width(family.field_prime().min(u64::MAX as u128) as u64),
        )
        .with("stream_counter", counter_width(stream.n() as u64 + 1))
        .with("phase_estimation", counter_width(m_ae as u64))
        .with("flag", 1)
        .record(ledger);

    // ideal-family probability; the true family deviates by <= eps/300
    let f0 = crate::stream::frequency_vector(stream).distinct();
    let p = -f64::exp_m1(f0 as f64 * (-1.0 / rough_range as f64).ln_1p());

    let sampler = AeSampler::new(p.clamp(0.0, 1.0), m_ae, tier)?;
    let charge = ChargeUnit {
        queries_per_use: 0,
        passes_per_use: cost.ae_passes_per_iteration,
    };
    let mut runs: Vec<f64> = (0..AE_RUNS)
        .map(|_| {
            charge.apply(ledger, m_ae as u64);
            sampler.sample_estimate(rng)
        })
        .collect();
    ledger.mark_emulated("amplitude_estimation");
    runs.sort_by(|a, b| a.partial_cmp(b).expect("estimates are finite"));
    let mut p_tilde = runs[runs.len() / 2];

    let clamped = p_tilde >= 1.0;
    if clamped {
        p_tilde = 1.0 - 1.0 / (2.0 * rough_range as f64);
    }
    let value = invert_one_probability(p_tilde, rough_range);

    Ok(StreamF0Outcome {
        estimate: MomentEstimate {
            value,
            k: MomentIndex::Finite(0),
            epsilon,
            confidence: 2.0 / 3.0,
        },
        rough_range,
        family,
        clamped,
    })
}
