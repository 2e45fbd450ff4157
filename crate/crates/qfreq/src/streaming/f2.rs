//! Streaming F₂: the sign-hash estimator f(h) = (Σ_i h(a_i))² has mean F₂ and
//! variance ≤ 2F₂², so its relative second moment is bounded by 3; feeding it
//! to the bounded-relative-variance mean estimator gives relative error ε in
//! Õ(1/ε) charged passes (2 per sampler use: a compute and an uncompute pass).
//! A classical one-pass median-of-means baseline is included for comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::pass::{counter_width, PassRunner, RegisterBank};
use super::StreamAlgoError;
use crate::hashfam::{make_sign_family, ExactSignFamily, SIGN_PRIME_FLOOR};
use crate::qsim::{mean_estimate_rel_var, ChargeUnit, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

/// E[f²]/E[f]² ≤ 1 + Var/E² ≤ 3 for the sign-hash estimator.
const RELATIVE_SECOND_MOMENT_BOUND: f64 = 3.0;

pub fn approx_f2_stream<R: Rng + ?Sized>(
    stream: &Stream,
    epsilon: f64,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, StreamAlgoError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(StreamAlgoError::EpsilonOutOfRange { epsilon });
    }
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }
    let family = make_sign_family(stream.universe(), SIGN_PRIME_FLOOR)?;
    RegisterBank::new()
        .with(
            "sign_hash_spec",
            4 * counter_width(family.field_prime() as u64),
        )
        .with("signed_sum", counter_width(2 * stream.n() as u64 + 1))
        .record(ledger);

    let items = stream.items();
    let value = mean_estimate_rel_var(
        |r: &mut R| {
            let h = family.sample(r);
            let sum: i64 = items.iter().map(|&a| h.sign_eval(a)).sum();
            (sum * sum) as f64
        },
        RELATIVE_SECOND_MOMENT_BOUND,
        epsilon,
        ChargeUnit::PASS_PAIR,
        rng,
        ledger,
    )?;

    Ok(MomentEstimate {
        value,
        k: MomentIndex::Finite(2),
        epsilon,
        confidence: 2.0 / 3.0,
    })
}

/// Exact-mode oracle: mean and variance of f over the complete ±1 assignment
/// family on [m] (m-wise independent), as exact rationals. Enumeration scale.
pub fn exact_sign_estimator_moments(
    stream: &Stream,
) -> Result<(BigRational, BigRational), StreamAlgoError> {
    let family = ExactSignFamily::new(stream.universe())?;
    let mut sum = BigInt::from(0);
    let mut sum_sq = BigInt::from(0);
    for pattern in 0..family.len() {
        let s: i64 = stream
            .items()
            .iter()
            .map(|&a| family.sign(pattern, a))
            .sum();
        let f = BigInt::from(s) * BigInt::from(s);
        sum_sq += &f * &f;
        sum += f;
    }
    let members = BigInt::from(family.len());
    let mean = BigRational::new(sum, members.clone());
    let second = BigRational::new(sum_sq, members);
    let variance = &second - &mean * &mean;
    Ok((mean, variance))
}

/// Classical single-pass AMS baseline: ⌈16/ε²⌉ sign counters per group,
/// 9 groups, group means of squares medianed. Exactly one stream pass.
pub fn ams_f2_classical<R: Rng + ?Sized>(
    stream: &Stream,
    epsilon: f64,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, StreamAlgoError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(StreamAlgoError::EpsilonOutOfRange { epsilon });
    }
    if stream.is_empty() {
        return Err(StreamAlgoError::EmptyStream);
    }
    const GROUPS: usize = 9;
    let per_group = (16.0 / (epsilon * epsilon)).ceil() as usize;
    let family = make_sign_family(stream.universe(), SIGN_PRIME_FLOOR)?;
    let hashes: Vec<_> = (0..GROUPS * per_group)
        .map(|_| family.sample(rng))
        .collect();
    let mut sums = vec![0i64; hashes.len()];

    let runner = PassRunner::new(stream);
    runner.pass(ledger, |v| {
        for (h, s) in hashes.iter().zip(sums.iter_mut()) {
            *s += h.sign_eval(v);
        }
    });
    RegisterBank::new()
        .with(
            "ams_counters",
            (GROUPS * per_group) as u64 * counter_width(2 * stream.n() as u64 + 1),
        )
        .record(ledger);

    let mut group_means: Vec<f64> = sums
        .chunks(per_group)
        .map(|chunk| chunk.iter().map(|&s| (s * s) as f64).sum::<f64>() / per_group as f64)
        .collect();
    group_means.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(MomentEstimate {
        value: group_means[GROUPS / 2],
        k: MomentIndex::Finite(2),
        epsilon,
        confidence: 2.0 / 3.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::exact_moment;
    use num_traits::ToPrimitive;

    #[test]
    fn constant_stream_is_estimated_exactly() {
        // every sign hash gives (±n)² = n² = F₂
        let stream = Stream::new(vec![3; 10], 4).unwrap();
        let mut ledger = ResourceLedger::new();
        let est =
            approx_f2_stream(&stream, 0.3, &mut crate::rng::seeded_rng(1), &mut ledger).unwrap();
        assert_eq!(est.value, 100.0);
        // pass charge is the closed form: 2 per emulated sampler use
        assert_eq!(
            ledger.stream_passes(),
            2 * crate::qsim::charged_mean_estimator_uses(3.0, 0.3)
        );
        assert!(ledger.classical_samples() > 0);
    }

    #[test]
    fn exact_family_mean_is_f2_and_variance_bounded() {
        for items in [vec![1u64, 1, 2, 3], vec![2, 2, 2], vec![1, 2, 3, 4, 1, 2]] {
            let m = *items.iter().max().unwrap();
            let stream = Stream::new(items, m).unwrap();
            let (mean, var) = exact_sign_estimator_moments(&stream).unwrap();
            let f2 = BigRational::from(BigInt::from(exact_moment(&stream, 2).to_u64().unwrap()));
            assert_eq!(mean, f2, "exact mean must be F2");
            let bound = BigRational::from(BigInt::from(2)) * &f2 * &f2;
            assert!(var <= bound, "variance above 2F2²");
        }
    }

    #[test]
    fn prime_family_mean_is_f2_up_to_documented_bias() {
        // enumerate a tiny odd-prime sign family: |mean − F₂| ≤ n²/p²·F₂ scale
        use crate::hashfam::{make_family, RangePolicy};
        let stream = Stream::new(vec![1, 2, 2, 3], 5).unwrap();
        let fam = make_family(4, 5, 5, RangePolicy::Exact { prime: 5 }).unwrap();
        let members = fam.enumerate().unwrap();
        let mut total = 0f64;
        for h in &members {
            let s: i64 = stream
                .items()
                .iter()
                .map(|&a| if h.field_value(a) % 2 == 0 { 1 } else { -1 })
                .sum();
            total += (s * s) as f64;
        }
        let mean = total / members.len() as f64;
        let f2 = exact_moment(&stream, 2).to_f64().unwrap();
        let n = stream.n() as f64;
        let bias_bound = (n * n - f2) / 25.0; // pairwise sign bias (1/p)² per cross term
        assert!(
            (mean - f2).abs() <= bias_bound + 1e-9,
            "mean {mean} vs F2 {f2} (bound {bias_bound})"
        );
    }

    #[test]
    fn ams_baseline_single_pass_and_tracks_f2() {
        use rand::Rng;
        let mut rng = crate::rng::seeded_rng(17);
        let items: Vec<u64> = (0..128).map(|_| rng.random_range(1..=64)).collect();
        let stream = Stream::new(items, 64).unwrap();
        let truth = exact_moment(&stream, 2).to_f64().unwrap();
        let trials = 200;
        let mut hits = 0;
        for t in 0..trials {
            let mut trng = crate::rng::trial_rng(19, t);
            let mut ledger = ResourceLedger::new();
            let est = ams_f2_classical(&stream, 0.2, &mut trng, &mut ledger).unwrap();
            assert_eq!(ledger.stream_passes(), 1);
            if (est.value - truth).abs() <= 0.2 * truth {
                hits += 1;
            }
        }
        assert!(
            hits as f64 >= (2.0 / 3.0) * trials as f64,
            "hits {hits}/{trials}"
        );
    }
}
