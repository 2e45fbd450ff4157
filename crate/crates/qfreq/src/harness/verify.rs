//! The `qfreq verify` suites: exact-enumeration and property checks runnable
//! from the CLI, one pass/fail line per check.

use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use thiserror::Error;

use crate::hashfam::{make_family, RangePolicy};
use crate::moments::{
    collision_count, collision_mean_formula, collision_moments_enumerate, collision_variance_bound,
    exact_moment, kwise_collisions,
};
use crate::stream::{SampleTuple, Stream};
use crate::streaming::{exact_sign_estimator_moments, nk_enumeration_mean};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; available: collision_moments, hash, collision, ams, nk, all")]
    UnknownSuite(String),
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// All value patterns of length n over a universe of size n, one per
/// set-partition shape (restricted growth strings).
pub fn value_patterns(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![1u64; n];
    fn rec(current: &mut Vec<u64>, pos: usize, max_used: u64, out: &mut Vec<Vec<u64>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 1..=max_used + 1 {
            current[pos] = v;
            rec(current, pos + 1, max_used.max(v), out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(&mut current, 1, 1, &mut out);
    out
}

/// Collision-moment identities: exact mean equality and the variance bound on
/// every stream shape with n ≤ 5, ℓ ≤ 4, k ∈ {2, 3}.
pub fn suite_collision_moments() -> Vec<CheckResult> {
    let mut mean_failures = 0u64;
    let mut var_failures = 0u64;
    let mut cases = 0u64;
    for n in 1..=5usize {
        for pattern in value_patterns(n) {
            let m = *pattern.iter().max().unwrap();
            let stream = Stream::new(pattern, m).unwrap();
            for ell in 1..=4.min(n) {
                for k in [2u32, 3] {
                    cases += 1;
                    let cm = collision_moments_enumerate(&stream, ell, k).unwrap();
                    if cm.mean != collision_mean_formula(&stream, ell, k) {
                        mean_failures += 1;
                    }
                    let var = cm.variance().to_f64().unwrap();
                    let bound = collision_variance_bound(&stream, ell, k);
                    if var > bound + 1e-9 {
                        var_failures += 1;
                    }
                }
            }
        }
    }
    vec![
        check(
            "collision_mean_identity",
            mean_failures == 0,
            format!("{cases} cases, {mean_failures} mean mismatches (exact rational)"),
        ),
        check(
            "collision_variance_bound",
            var_failures == 0,
            format!("{cases} cases, {var_failures} bound violations (tolerance 1e-9)"),
        ),
    ]
}

/// Exact t-wise independence of the polynomial families by full enumeration,
/// p ≤ 11, t ≤ 4.
pub fn suite_hash() -> Vec<CheckResult> {
    let mut results = Vec::new();
    for &p in &[2u64, 3, 5, 7, 11] {
        for t in 1..=4u32.min(p as u32) {
            let fam = make_family(t, p, p as u128, RangePolicy::Exact { prime: p as u128 })
                .expect("small exact family");
            let members = fam.enumerate().expect("enumerable");
            // outputs of each member at every domain point
            let tables: Vec<Vec<u128>> = members
                .iter()
                .map(|h| (1..=p).map(|x| h.eval(x)).collect())
                .collect();
            let mut uniform = true;
            let points: Vec<usize> = (0..p as usize).collect();
            for subset in combinations(&points, t as usize) {
                let mut seen = std::collections::HashMap::new();
                for table in &tables {
                    let key: Vec<u128> = subset.iter().map(|&x| table[x]).collect();
                    *seen.entry(key).or_insert(0u64) += 1;
                }
                let expected = members.len() as u64 / p.pow(t);
                if seen.len() != (p as usize).pow(t) || seen.values().any(|&c| c != expected) {
                    uniform = false;
                }
            }
            results.push(check(
                format!("hash_exact_{t}wise_p{p}"),
                uniform,
                format!("{} members, all {t}-point marginals uniform", members.len()),
            ));
        }
    }
    results
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Dual-route collision counting on random small inputs.
pub fn suite_collision() -> Vec<CheckResult> {
    use rand::Rng;
    let mut failures = 0u64;
    let trials = 500u64;
    for t in 0..trials {
        let mut rng = crate::rng::trial_rng(0xC0117, t);
        let n = rng.random_range(2..=8);
        let m = rng.random_range(1..=4);
        let items: Vec<u64> = (0..n).map(|_| rng.random_range(1..=m)).collect();
        let stream = Stream::new(items, m).unwrap();
        let ell = rng.random_range(1..=6);
        let positions: Vec<usize> = (0..ell).map(|_| rng.random_range(0..n)).collect();
        let tuple = SampleTuple::new(positions.clone(), n).unwrap();
        for k in [2u32, 3] {
            let fast = collision_count(&stream, &tuple, k).unwrap();
            // subset enumeration oracle
            let values: Vec<u64> = positions.iter().map(|&p| stream.value_at(p)).collect();
            let mut slow = 0u64;
            let masks = 1u32 << ell;
            for mask in 0..masks {
                if mask.count_ones() == k {
                    let chosen: Vec<u64> = (0..ell)
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| values[i])
                        .collect();
                    if chosen.windows(2).all(|w| w[0] == w[1]) {
                        slow += 1;
                    }
                }
            }
            if fast != slow.into() {
                failures += 1;
            }
        }
    }
    vec![check(
        "collision_dual_route",
        failures == 0,
        format!("{trials} random samples, {failures} mismatches"),
    )]
}

/// Exact-mode AMS identities: full-enumeration mean equals F₂ exactly and
/// variance ≤ 2F₂².
pub fn suite_ams() -> Vec<CheckResult> {
    use rand::Rng;
    let mut mean_exact = true;
    let mut var_bounded = true;
    for t in 0..30u64 {
        let mut rng = crate::rng::trial_rng(0xA35, t);
        let n = rng.random_range(1..=32);
        let m = rng.random_range(1..=12);
        let items: Vec<u64> = (0..n).map(|_| rng.random_range(1..=m)).collect();
        let stream = Stream::new(items, m).unwrap();
        let (mean, var) = exact_sign_estimator_moments(&stream).unwrap();
        let f2 = BigRational::from_u64(exact_moment(&stream, 2).to_u64().unwrap()).unwrap();
        if mean != f2 {
            mean_exact = false;
        }
        if var > BigRational::from_u64(2).unwrap() * &f2 * &f2 {
            var_bounded = false;
        }
    }
    vec![
        check(
            "ams_exact_mean",
            mean_exact,
            "enumeration mean equals F2 exactly",
        ),
        check("ams_variance_bound", var_bounded, "Var(f) <= 2·F2² exactly"),
    ]
}

/// N_k estimator exact identities: enumeration mean equals F_k (n ≤ 32) and
/// enumeration variance stays below k·m^{1−1/k}·F_k².
pub fn suite_nk() -> Vec<CheckResult> {
    use crate::streaming::fk::{nk_estimator_value, tail_occurrences};
    use rand::Rng;
    let mut exact = true;
    let mut var_bounded = true;
    for t in 0..50u64 {
        let mut rng = crate::rng::trial_rng(0x4E4B, t);
        let n = rng.random_range(1..=32);
        let m = rng.random_range(1..=16);
        let items: Vec<u64> = (0..n).map(|_| rng.random_range(1..=m)).collect();
        let stream = Stream::new(items, m).unwrap();
        for k in [3u32, 4] {
            if nk_enumeration_mean(&stream, k).unwrap() != exact_moment(&stream, k) {
                exact = false;
            }
            // exact variance over uniform i against the declared bound
            let values: Vec<f64> = tail_occurrences(&stream)
                .iter()
                .map(|&tail| nk_estimator_value(n, tail, k).to_f64().unwrap())
                .collect();
            let fk = exact_moment(&stream, k).to_f64().unwrap();
            let second: f64 = values.iter().map(|v| v * v).sum::<f64>() / n as f64;
            let variance = second - fk * fk;
            let bound = k as f64 * (m as f64).powf(1.0 - 1.0 / k as f64) * fk * fk;
            if variance > bound + 1e-9 {
                var_bounded = false;
            }
        }
    }
    vec![
        check(
            "nk_exact_mean",
            exact,
            "enumeration mean equals F_k as an integer identity",
        ),
        check(
            "nk_variance_bound",
            var_bounded,
            "enumeration Var(N_k) <= k·m^(1-1/k)·F_k² (tolerance 1e-9)",
        ),
    ]
}

/// Reconstruction sanity: a freshly built no-witness sequence has no collisions.
pub fn suite_reconstruct() -> Vec<CheckResult> {
    let seq = crate::query::reconstruct_consistent_sequence(12, &[], 100).unwrap();
    let ok = kwise_collisions(&seq, 2) == 0u32.into();
    vec![check(
        "reconstruct_fresh_values_distinct",
        ok,
        "no-witness reconstruction is collision-free",
    )]
}

pub fn run_suite(name: &str) -> Result<Vec<CheckResult>, VerifyError> {
    match name {
        "collision_moments" => Ok(suite_collision_moments()),
        "hash" => Ok(suite_hash()),
        "collision" => Ok(suite_collision()),
        "ams" => Ok(suite_ams()),
        "nk" => Ok(suite_nk()),
        "all" => {
            let mut all = suite_collision_moments();
            all.extend(suite_hash());
            all.extend(suite_collision());
            all.extend(suite_ams());
            all.extend(suite_nk());
            all.extend(suite_reconstruct());
            Ok(all)
        }
        other => Err(VerifyError::UnknownSuite(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_patterns_count_matches_bell_numbers() {
        assert_eq!(value_patterns(1).len(), 1);
        assert_eq!(value_patterns(2).len(), 2);
        assert_eq!(value_patterns(3).len(), 5);
        assert_eq!(value_patterns(4).len(), 15);
        assert_eq!(value_patterns(5).len(), 52);
    }

    #[test]
    fn all_suites_pass() {
        for result in run_suite("all").unwrap() {
            assert!(result.passed, "{}: {}", result.name, result.detail);
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("bogus").is_err());
    }

    #[test]
    fn combinations_enumerate_choose() {
        let items: Vec<usize> = (0..5).collect();
        assert_eq!(combinations(&items, 2).len(), 10);
        assert_eq!(combinations(&items, 4).len(), 5);
    }
}
