//! Bounded-relative-variance mean estimation, emulated: an honest classical
//! median-of-means estimator (18 groups of ⌈9B/ε²⌉ samples, Chebyshev gives
//! each group a failure rate ≤ 1/9), billed at the quantum rate
//! ⌈(B/ε)·(ln(B/ε)+1)^{3/2}·(ln(ln(B/ε)+2)+1)⌉ sampler uses. The true draw
//! count lands in `classical_samples`, keeping the emulation transparent.

use rand::Rng;

use super::ledger::{charged_mean_estimator_uses, ChargeUnit, ResourceLedger};
use super::QsimError;

const GROUPS: usize = 18;

/// Number of classical draws per group for a declared bound B and accuracy ε.
pub fn classical_group_size(b: f64, epsilon: f64) -> u64 {
    (9.0 * b / (epsilon * epsilon)).ceil() as u64
}

/// Estimates E[v] of a non-negative sampler with E[v²]/E[v]² ≤ B up to
/// relative error ε with probability ≥ 2/3, charging the quantum-rate cost.
pub fn mean_estimate_rel_var<R, S>(
    mut sampler: S,
    b: f64,
    epsilon: f64,
    charge: ChargeUnit,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<f64, QsimError>
where
    R: Rng + ?Sized,
    S: FnMut(&mut R) -> f64,
{
    if b < 1.0 {
        return Err(QsimError::RelativeVarianceBoundTooSmall { b });
    }
    if !(0.0..1.0).contains(&epsilon) || epsilon <= 0.0 {
        return Err(QsimError::EpsilonOutOfRange { epsilon });
    }
    ledger.mark_emulated("mean_estimate_rel_var");
    let quantum_uses = charged_mean_estimator_uses(b, epsilon);
    charge.apply(ledger, quantum_uses);

    let group = classical_group_size(b, epsilon);
    let mut means = Vec::with_capacity(GROUPS);
    for _ in 0..GROUPS {
        let mut sum = 0.0;
        for _ in 0..group {
            sum += sampler(rng);
        }
        means.push(sum / group as f64);
    }
    ledger.add_classical_samples(GROUPS as u64 * group);

    means.sort_by(|a, b| a.partial_cmp(b).expect("sampler outputs are finite"));
    Ok((means[GROUPS / 2 - 1] + means[GROUPS / 2]) / 2.0)
}
