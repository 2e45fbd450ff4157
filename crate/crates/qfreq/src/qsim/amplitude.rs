//! Canonical amplitude estimation: for true good-state probability p and M
//! phase-estimation iterations, the measured outcome y ∈ {0,…,M−1} follows
//!
//!   P(y) = ½·(F_M(y/M − ω) + F_M(y/M + ω)),   ω = asin(√p)/π,
//!
//! with the Fejér-style kernel F_M(δ) = sin²(Mπδ)/(M²sin²(πδ)), and the
//! estimate is p̃ = sin²(πy/M). With probability at least 8/π² the estimate
//! satisfies |p̃ − p| ≤ 2π√(p(1−p))/M + π²/M².
//!
//! Tier A computes the distribution by statevector phase estimation (M a power
//! of two, ≤ 2^11); tier B samples the closed form directly. The two agree to
//! numerical precision, which the tests pin down.

use rand::Rng;

use super::ledger::{ChargeUnit, ResourceLedger};
use super::statevector::{rotation, Statevector};
use super::QsimError;

use std::f64::consts::PI;

/// Which backend produces the outcome distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AeTier {
    /// Exact phase-estimation circuit; M must be a power of two with
    /// log₂(M) + 1 ≤ 12 qubits.
    Statevector,
    /// Closed-form outcome distribution.
    ClosedForm,
}

fn fejer_kernel(delta: f64, m: u32) -> f64 {
    // periodic in delta with period 1; the removable singularity at integer
    // delta evaluates to 1. sin is accurate near 0, so reducing to [-1/2, 1/2]
    // keeps the ratio stable everywhere else.
    let reduced = delta - delta.round();
    if reduced == 0.0 {
        return 1.0;
    }
    let m = m as f64;
    let num = (m * PI * reduced).sin();
    let den = m * (PI * reduced).sin();
    (num / den).powi(2)
}

/// Closed-form outcome distribution over y ∈ {0,…,M−1}.
pub fn ae_outcome_distribution(p: f64, m: u32) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&p), "probability out of range");
    assert!(m >= 1);
    let omega = p.sqrt().asin() / PI;
    let mut probs: Vec<f64> = (0..m)
        .map(|y| {
            let d = y as f64 / m as f64;
            0.5 * (fejer_kernel(d - omega, m) + fejer_kernel(d + omega, m))
        })
        .collect();
    let total: f64 = probs.iter().sum();
    for q in probs.iter_mut() {
        *q /= total;
    }
    probs
}

/// The estimate decoded from outcome y.
pub fn ae_estimate_for_outcome(y: u32, m: u32) -> f64 {
    (PI * y as f64 / m as f64).sin().powi(2)
}

/// Outcome distribution by exact phase estimation on a statevector: one work
/// qubit prepared with good amplitude √p, controlled Grover rotations, inverse
/// DFT on the register.
pub fn ae_outcome_distribution_statevector(p: f64, m: u32) -> Result<Vec<f64>, QsimError> {
    if !m.is_power_of_two() {
        return Err(QsimError::IterationsNotPowerOfTwo { m });
    }
    let r = m.trailing_zeros();
    if r + 1 > 12 {
        return Err(QsimError::TooManyQubits { qubits: r + 1 });
    }
    let theta = p.sqrt().asin();
    let mut sv = Statevector::basis(r + 1, 0)?;
    // work qubit (index r): |0⟩ ↦ cosθ|0⟩ + sinθ|1⟩; good state is |1⟩
    sv.apply_single(r, rotation(theta));
    for q in 0..r {
        sv.hadamard(q);
    }
    // controlled G^(2^q), G = rotation by 2θ
    for q in 0..r {
        let angle = 2.0 * theta * 2f64.powi(q as i32);
        sv.apply_controlled(q, r, rotation(angle));
    }
    sv.inverse_dft_low(r);
    Ok(sv.low_register_distribution(r))
}

/// Precomputed sampler over the outcome distribution.
#[derive(Debug, Clone)]
pub struct AeSampler {
    cdf: Vec<f64>,
    m: u32,
}

impl AeSampler {
    pub fn new(p: f64, m: u32, tier: AeTier) -> Result<Self, QsimError> {
        let probs = match tier {
            AeTier::ClosedForm => ae_outcome_distribution(p, m),
            AeTier::Statevector => ae_outcome_distribution_statevector(p, m)?,
        };
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for q in probs {
            acc += q;
            cdf.push(acc);
        }
        Ok(AeSampler { cdf, m })
    }

    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        match self
            .cdf
            .binary_search_by(|c| c.partial_cmp(&u).expect("cdf is finite"))
        {
            Ok(i) | Err(i) => (i as u32).min(self.m - 1),
        }
    }

    pub fn sample_estimate<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        ae_estimate_for_outcome(self.sample_outcome(rng), self.m)
    }
}

/// One amplitude-estimation run: samples the canonical outcome distribution
/// for true probability `p`, charges `m` predicate uses at the given rate, and
/// returns p̃ = sin²(πy/M).
pub fn amplitude_estimate<R: Rng + ?Sized>(
    p: f64,
    m: u32,
    tier: AeTier,
    charge: ChargeUnit,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<f64, QsimError> {
    if m == 0 {
        return Err(QsimError::IterationsNotPowerOfTwo { m });
    }
    let sampler = AeSampler::new(p, m, tier)?;
    charge.apply(ledger, m as u64);
    ledger.mark_emulated("amplitude_estimation");
    Ok(sampler.sample_estimate(rng))
}
