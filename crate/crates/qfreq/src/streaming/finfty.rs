//! Streaming F∞: Dürr–Høyer maximum finding over the multiplicity oracle
//! |j⟩|x⟩ ↦ |j⟩|x ± n_j⟩, each oracle pair costing two passes (compute and
//! uncompute). One classical bookkeeping pass first restricts the search to
//! the observed-value set, so the domain has size F₀ ≤ n even when m is much
//! larger. The answer is exact whenever the descent finds the maximum, which
//! happens with probability well above 2/3 at the configured budget.

use std::collections::BTreeMap;

use rand::Rng;

use super::pass::{counter_width, PassRunner, RegisterBank};
use super::StreamAlgoError;
use crate::qsim::{durr_hoyer_min, ChargeUnit, CostModel, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

pub fn f_infty_stream<R: Rng + ?Sized>(
    stream: &Stream,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, StreamAlgoError> {
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }

    // observed-value restriction: one classical pass
    let runner = PassRunner::new(stream);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    runner.pass(ledger, |v| {
        *counts.entry(v).or_insert(0) += 1;
    });
    let multiplicities: Vec<u64> = counts.values().copied().collect();
    let domain = multiplicities.len();

    // maximum via minimum of the complement; each oracle use is a 2-pass pair
    let keys: Vec<u64> = multiplicities.iter().map(|&c| u64::MAX - c).collect();
    let index = durr_hoyer_min(
        &keys,
        cost.min_find_budget,
        ChargeUnit::PASS_PAIR,
        rng,
        ledger,
    );

    let log_domain = counter_width(domain as u64);
    RegisterBank::new()
        .with("threshold_descent", log_domain * log_domain)
        .with("multiplicity_counter", counter_width(stream.n() as u64 + 1))
        .record(ledger);

    Ok(MomentEstimate {
        value: multiplicities[index] as f64,
        k: MomentIndex::Infinity,
        epsilon: 0.0,
        confidence: 2.0 / 3.0,
    })
}
