//! Exact ground truth: frequency moments in unbounded integer arithmetic,
//! k-wise collision counting, and the full-enumeration collision moments used
//! as oracles by every estimator test.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::stream::{SampleTuple, Stream};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MomentError {
    #[error("F_infinity is undefined for an empty stream")]
    EmptyStream,
    #[error("enumeration of {size} tuples exceeds the cap of {cap}")]
    EnumerationTooLarge { size: u128, cap: u64 },
    #[error("sample length {ell} violates 1 <= ell <= n = {n}")]
    SampleLengthOutOfRange { ell: usize, n: usize },
    #[error("collision order k must be at least 2, got {k}")]
    CollisionOrderTooSmall { k: u32 },
}

/// F_k = Σ_j n_j^k in exact integer arithmetic. k = 0 counts distinct values;
/// the empty stream yields 0 for every finite k.
pub fn exact_moment(stream: &Stream, k: u32) -> BigUint {
    let fv = crate::stream::frequency_vector(stream);
    let mut total = BigUint::zero();
    for &count in fv.counts().values() {
        total += BigUint::from(count).pow(k);
    }
    total
}

/// F_∞ = max_j n_j. Errors on the empty stream, which the definition does not cover.
pub fn exact_f_infty(stream: &Stream) -> Result<u64, MomentError> {
    crate::stream::frequency_vector(stream)
        .max_count()
        .ok_or(MomentError::EmptyStream)
}

/// Number of k-subsets of `values` positions whose entries are all equal,
/// via the per-value formula Σ_v (c_v choose k).
pub fn kwise_collisions(values: &[u64], k: u32) -> BigUint {
    let mut counts = std::collections::HashMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0u64) += 1;
    }
    let k = BigUint::from(k);
    let mut total = BigUint::zero();
    for (_, c) in counts {
        let c = BigUint::from(c);
        if c >= k {
            total += binomial(c, k.clone());
        }
    }
    total
}

/// C_k(s₁,…,s_ℓ): k-wise collisions among the stream values at the sampled positions.
pub fn collision_count(
    stream: &Stream,
    sample: &SampleTuple,
    k: u32,
) -> Result<BigUint, MomentError> {
    if k < 2 {
        return Err(MomentError::CollisionOrderTooSmall { k });
    }
    let values: Vec<u64> = sample
        .positions()
        .iter()
        .map(|&p| stream.value_at(p))
        .collect();
    Ok(kwise_collisions(&values, k))
}

/// Exact mean and second moment of C_k over all n^ℓ equiprobable sample tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionMoments {
    pub mean: BigRational,
    pub second_moment: BigRational,
}

impl CollisionMoments {
    pub fn variance(&self) -> BigRational {
        &self.second_moment - &self.mean * &self.mean
    }
}

/// Enumeration cap: n^ℓ may not exceed this.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Enumerates every tuple in [n]^ℓ and returns the exact rational mean and
/// second moment of C_k. The mean must equal binom(ℓ,k)·F_k/n^k as an
/// identity; the test suites lean on that.
pub fn collision_moments_enumerate(
    stream: &Stream,
    ell: usize,
    k: u32,
) -> Result<CollisionMoments, MomentError> {
    let n = stream.n();
    if ell == 0 || ell > n {
        return Err(MomentError::SampleLengthOutOfRange { ell, n });
    }
    if k < 2 {
        return Err(MomentError::CollisionOrderTooSmall { k });
    }
    let mut size: u128 = 1;
    for _ in 0..ell {
        size = size.saturating_mul(n as u128);
        if size > ENUMERATION_CAP as u128 {
            return Err(MomentError::EnumerationTooLarge {
                size,
                cap: ENUMERATION_CAP,
            });
        }
    }

    let mut sum = BigUint::zero();
    let mut sum_sq = BigUint::zero();
    let mut tuple = vec![0usize; ell];
    let mut values = vec![0u64; ell];
    loop {
        for (slot, &pos) in values.iter_mut().zip(tuple.iter()) {
            *slot = stream.value_at(pos);
        }
        let c = kwise_collisions(&values, k);
        sum_sq += &c * &c;
        sum += c;

        // odometer over [n]^ell
        let mut digit = 0;
        loop {
            if digit == ell {
                let denom = BigInt::from(BigUint::from(n as u64).pow(ell as u32));
                let mean = BigRational::new(BigInt::from(sum), denom.clone());
                let second_moment = BigRational::new(BigInt::from(sum_sq), denom);
                return Ok(CollisionMoments {
                    mean,
                    second_moment,
                });
            }
            tuple[digit] += 1;
            if tuple[digit] < n {
                break;
            }
            tuple[digit] = 0;
            digit += 1;
        }
    }
}

/// The closed-form mean binom(ℓ,k)·F_k/n^k as an exact rational.
pub fn collision_mean_formula(stream: &Stream, ell: usize, k: u32) -> BigRational {
    let fk = exact_moment(stream, k);
    let numer = binomial(BigUint::from(ell as u64), BigUint::from(k)) * fk;
    let denom = BigUint::from(stream.n() as u64).pow(k);
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The variance bound Σ_{q=k}^{2k-1} (ℓ·F_k^{1/k}/n)^q.
pub fn collision_variance_bound(stream: &Stream, ell: usize, k: u32) -> f64 {
    let fk = exact_moment(stream, k).to_f64().unwrap_or(f64::INFINITY);
    let base = ell as f64 * fk.powf(1.0 / k as f64) / stream.n() as f64;
    (k..=2 * k - 1).map(|q| base.powi(q as i32)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn s(items: &[u64], m: u64) -> Stream {
        Stream::new(items.to_vec(), m).unwrap()
    }

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn exact_moment_examples() {
        assert_eq!(exact_moment(&s(&[1, 2, 3], 3), 2), BigUint::from(3u32));
        // pairs instance with n = 6, k = 2: F_k = n·2^{k-1} = 12
        assert_eq!(
            exact_moment(&s(&[1, 1, 2, 2, 3, 3], 3), 2),
            BigUint::from(12u32)
        );
        assert_eq!(exact_moment(&s(&[5, 5, 5], 5), 3), BigUint::from(27u32));
        assert_eq!(exact_moment(&s(&[], 3), 2), BigUint::zero());
        assert_eq!(exact_moment(&s(&[], 3), 0), BigUint::zero());
    }

    #[test]
    fn f_infty_examples() {
        assert_eq!(exact_f_infty(&s(&[1, 2, 2, 3], 3)).unwrap(), 2);
        assert_eq!(exact_f_infty(&s(&[7], 7)).unwrap(), 1);
        assert_eq!(exact_f_infty(&s(&[4, 4, 4, 1], 4)).unwrap(), 3);
        assert_eq!(exact_f_infty(&s(&[], 4)), Err(MomentError::EmptyStream));
    }

    #[test]
    fn collision_count_examples() {
        let all_equal = s(&[1, 1, 1], 1);
        let sample = SampleTuple::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(
            collision_count(&all_equal, &sample, 2).unwrap(),
            BigUint::from(3u32)
        );

        let distinct = s(&[1, 2, 3], 3);
        assert_eq!(
            collision_count(&distinct, &sample, 2).unwrap(),
            BigUint::zero()
        );

        let two_pairs = s(&[1, 1, 2, 2], 2);
        let sample = SampleTuple::new(vec![0, 1, 2, 3], 4).unwrap();
        assert_eq!(
            collision_count(&two_pairs, &sample, 2).unwrap(),
            BigUint::from(2u32)
        );

        assert_eq!(
            collision_count(&two_pairs, &sample, 1),
            Err(MomentError::CollisionOrderTooSmall { k: 1 })
        );
    }

    /// Independent oracle: enumerate every k-subset of positions directly.
    fn collisions_by_subset_enumeration(values: &[u64], k: usize) -> u64 {
        fn rec(values: &[u64], k: usize, start: usize, chosen: &mut Vec<usize>, hits: &mut u64) {
            if chosen.len() == k {
                let first = values[chosen[0]];
                if chosen.iter().all(|&i| values[i] == first) {
                    *hits += 1;
                }
                return;
            }
            for i in start..values.len() {
                chosen.push(i);
                rec(values, k, i + 1, chosen, hits);
                chosen.pop();
            }
        }
        let mut hits = 0;
        rec(values, k, 0, &mut Vec::new(), &mut hits);
        hits
    }

    #[test]
    fn per_value_formula_matches_subset_enumeration() {
        let mut rng = crate::rng::seeded_rng(11);
        use rand::Rng;
        for _ in 0..200 {
            let len = rng.random_range(1..=7);
            let values: Vec<u64> = (0..len).map(|_| rng.random_range(1..=4)).collect();
            for k in 2..=4u32 {
                let fast = kwise_collisions(&values, k).to_u64().unwrap();
                let slow = collisions_by_subset_enumeration(&values, k as usize);
                assert_eq!(fast, slow, "values={values:?} k={k}");
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let cm = collision_moments_enumerate(&s(&[1, 2], 2), 2, 2).unwrap();
        assert_eq!(cm.mean, rational(1, 2));

        let cm = collision_moments_enumerate(&s(&[1, 1], 1), 2, 2).unwrap();
        assert_eq!(cm.mean, BigRational::one());

        let cm = collision_moments_enumerate(&s(&[1, 1, 2], 2), 2, 2).unwrap();
        assert_eq!(cm.mean, rational(5, 9));
    }

    #[test]
    fn enumeration_rejects_oversized_grid() {
        let big = s(&(1..=100).collect::<Vec<u64>>(), 100);
        assert!(matches!(
            collision_moments_enumerate(&big, 4, 2),
            Err(MomentError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn mean_identity_on_small_grid() {
        // spot checks on a few streams; the full n<=5 sweep runs in the
        // acceptance suite
        for items in [
            vec![1u64, 1, 2],
            vec![1, 2, 3, 1],
            vec![2, 2, 2, 2],
            vec![1, 2, 1, 2, 3],
        ] {
            let m = *items.iter().max().unwrap();
            let st = s(&items, m);
            for ell in 1..=3usize.min(st.n()) {
                for k in [2u32, 3] {
                    let cm = collision_moments_enumerate(&st, ell, k).unwrap();
                    assert_eq!(cm.mean, collision_mean_formula(&st, ell, k));
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn prop_first_moment_is_length(items in proptest::collection::vec(1u64..=9, 0..40)) {
            let n = items.len() as u64;
            let st = Stream::new(items, 9).unwrap();
            proptest::prop_assert_eq!(exact_moment(&st, 1), BigUint::from(n));
        }

        #[test]
        fn prop_collision_routes_agree(
            values in proptest::collection::vec(1u64..=5, 1..8),
            k in 2u32..=4,
        ) {
            let fast = kwise_collisions(&values, k).to_u64().unwrap();
            let slow = collisions_by_subset_enumeration(&values, k as usize);
            proptest::prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn moment_invariants_on_random_streams() {
        use rand::Rng;
        let mut rng = crate::rng::seeded_rng(5);
        for _ in 0..100 {
            let n = rng.random_range(1..=12);
            let m = rng.random_range(1..=6);
            let items: Vec<u64> = (0..n).map(|_| rng.random_range(1..=m)).collect();
            let st = s(&items, m);
            // F1 = n exactly
            assert_eq!(exact_moment(&st, 1), BigUint::from(n as u64));
            let finf = exact_f_infty(&st).unwrap();
            let f0 = exact_moment(&st, 0);
            for k in 1..=4u32 {
                let fk = exact_moment(&st, k);
                let low = BigUint::from(finf).pow(k);
                let high = &f0 * &low;
                assert!(fk >= low && fk <= high, "bounds failed for k={k}");
            }
            // norm monotonicity: F_q^{1/q} <= F_k^{1/k} for q >= k >= 1
            for k in 1..=3u32 {
                for q in k..=4u32 {
                    let fk = exact_moment(&st, k).to_f64().unwrap();
                    let fq = exact_moment(&st, q).to_f64().unwrap();
                    assert!(
                        fq.powf(1.0 / q as f64) <= fk.powf(1.0 / k as f64) + 1e-12,
                        "monotonicity failed k={k} q={q}"
                    );
                }
            }
        }
    }
}
