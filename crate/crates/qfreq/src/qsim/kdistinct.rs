//! Emulated k-distinctness: decides whether a sequence contains k equal
//! elements, answering via exact classical counting while charging
//! ⌈c·n^(1−2^{k−2}/(2^k−1))⌉·max(1, ⌈log₃(1/δ)⌉) queries, plus k verification
//! queries for any returned witness.

use std::collections::HashMap;

use rand::Rng;

use super::ledger::{charged_k_distinctness_queries, CostModel, ResourceLedger};

/// Either a witness set of k indices claimed to hold equal values, or "no".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KDistinctnessOutcome {
    Witness {
        indices: Vec<usize>,
        claimed_value: u64,
    },
    No,
}

impl KDistinctnessOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, KDistinctnessOutcome::Witness { .. })
    }
}

/// Emulator over an explicit value sequence. Honest answers come from exact
/// counting (the witness is the first k occurrences of the earliest value to
/// reach k). With failure injection on, the answer flips with probability
/// `delta`: a true witness becomes "no", and a true "no" becomes a fabricated
/// witness that cannot survive verification.
pub fn k_distinctness<R: Rng + ?Sized>(
    values: &[u64],
    k: u32,
    delta: f64,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> KDistinctnessOutcome {
    assert!(k >= 2, "k-distinctness requires k >= 2");
    ledger.mark_emulated("k_distinctness");
    ledger.charge_queries(charged_k_distinctness_queries(
        values.len(),
        k,
        delta,
        cost.c_kdist,
    ));

    let mut positions: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut honest = KDistinctnessOutcome::No;
    for (i, &v) in values.iter().enumerate() {
        let entry = positions.entry(v).or_default();
        entry.push(i);
        if entry.len() == k as usize {
            honest = KDistinctnessOutcome::Witness {
                indices: entry.clone(),
                claimed_value: v,
            };
            break;
        }
    }

    let outcome = if cost.failure_injection && rng.random_bool(delta) {
        match honest {
            KDistinctnessOutcome::Witness { .. } => KDistinctnessOutcome::No,
            KDistinctnessOutcome::No if values.len() >= k as usize => {
                // the first k positions cannot all be equal, or the honest
                // answer would have been a witness
                KDistinctnessOutcome::Witness {
                    indices: (0..k as usize).collect(),
                    claimed_value: values[0],
                }
            }
            no => no,
        }
    } else {
        honest
    };

    if outcome.is_witness() {
        // a claimed equal k-tuple is checked with k additional queries
        ledger.charge_queries(k as u64);
    }
    outcome
}
