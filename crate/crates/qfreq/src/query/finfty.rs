//! Query-model F∞: binary search over the multiplicity threshold, each step
//! decided by the k-distinctness emulator with its confidence amplified to a
//! per-step failure budget of 1/(6⌈log₂n⌉); the gapped promise problem is
//! answered by thresholding the search result at (1−ε/2)k.

use rand::Rng;

use super::QueryError;
use crate::qsim::{k_distinctness, CostModel, KDistinctnessOutcome, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

/// Binary search for max_j n_j. Exact when every subroutine call is honest;
/// the ε parameter is carried on the estimate for reporting.
pub fn approx_f_infty_query<R: Rng + ?Sized>(
    stream: &Stream,
    epsilon: f64,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, QueryError> {
    if stream.is_empty() {
        return Err(QueryError::EmptyStream);
    }
    let n = stream.n();
    let log_n = ((n.max(2)) as f64).log2().ceil().max(1.0);
    let delta = 1.0 / (6.0 * log_n);

    // invariant: some value has multiplicity >= lo (every value gives lo = 1)
    let mut lo = 1usize;
    let mut hi = n;
    while lo < hi {
        let mid = (lo + hi).div_ceil(2); // mid >= 2, a valid k-distinctness order
        let outcome = k_distinctness(stream.items(), mid as u32, delta, cost, rng, ledger);
        if matches!(outcome, KDistinctnessOutcome::Witness { .. }) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }

    Ok(MomentEstimate {
        value: lo as f64,
        k: MomentIndex::Infinity,
        epsilon,
        confidence: 2.0 / 3.0,
    })
}

/// The two promise cases of gapped k-distinctness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GappedOutcome {
    /// The stream contains k equal elements.
    ContainsKEqual,
    /// No (1−ε)k elements are equal.
    FarFromKEqual,
}

/// Distinguishes the gapped cases by estimating F∞ and thresholding at
/// (1−ε/2)·k. Outside the promise the output is unspecified; an instance with
/// maximum multiplicity exactly (1−ε)k is outside the promise and lands in the
/// far case under this threshold.
pub fn gapped_k_distinctness<R: Rng + ?Sized>(
    stream: &Stream,
    k: u32,
    epsilon: f64,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<GappedOutcome, QueryError> {
    if k < 2 {
        return Err(QueryError::UnsupportedMomentIndex { k, min: 2 });
    }
    let est = approx_f_infty_query(stream, epsilon, cost, rng, ledger)?;
    if est.value >= (1.0 - epsilon / 2.0) * k as f64 {
        Ok(GappedOutcome::ContainsKEqual)
    } else {
        Ok(GappedOutcome::FarFromKEqual)
    }
}
