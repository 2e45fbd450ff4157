//! Query-model F₀: hash every element pairwise-independently into [m³] and
//! recover the d = ⌈96/ε²⌉ smallest distinct hash values with the d-smallest
//! subroutine; the d'th smallest value v gives the estimate d·M/v. Succeeds
//! with probability at least 3/5 − 1/m at a charge of ⌈√(d·n)⌉ queries.

use rand::Rng;

use super::QueryError;
use crate::hashfam::{make_family, RangePolicy};
use crate::qsim::{d_smallest_distinct, CostModel, ResourceLedger};
use crate::stream::{MomentEstimate, MomentIndex, Stream};

/// d = ⌈96/ε²⌉.
pub fn f0_sample_budget(epsilon: f64) -> usize {
    (96.0 / (epsilon * epsilon)).ceil() as usize
}

/// Failure budget handed to the d-smallest subroutine.
const D_SMALLEST_DELTA: f64 = 1.0 / 15.0;

pub fn approx_f0_query<R: Rng + ?Sized>(
    stream: &Stream,
    epsilon: f64,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Result<MomentEstimate, QueryError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(QueryError::EpsilonOutOfRange { epsilon });
    }
    if stream.is_empty() {
        return Err(QueryError::EmptyStream);
    }
    let m = stream.universe();
    let range = (m as u128).pow(3);
    let d = f0_sample_budget(epsilon);

    let family = make_family(2, m, range, RangePolicy::default())?;
    let h = family.sample(rng);
    let hashes: Vec<u128> = stream.items().iter().map(|&a| h.eval(a)).collect();

    // f = g = h∘a; the joint evaluation is charged once inside the subroutine
    let chosen = d_smallest_distinct(&hashes, &hashes, d, D_SMALLEST_DELTA, cost, rng, ledger);

    let value = if chosen.len() < d {
        // fewer than d distinct hash values exist: they are all enumerated, so
        // d' is the exact distinct count (up to hash collisions)
        chosen.len() as f64
    } else {
        let v = chosen
            .iter()
            .map(|&i| hashes[i])
            .max()
            .expect("d >= 1 so the set is non-empty");
        d as f64 * range as f64 / v as f64
    };

    Ok(MomentEstimate {
        value,
        k: MomentIndex::Finite(0),
        epsilon,
        confidence: 3.0 / 5.0 - 1.0 / m as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::exact_moment;
    use num_traits::ToPrimitive;

    #[test]
    fn sample_budget_examples() {
        assert_eq!(f0_sample_budget(1.0), 96);
        assert_eq!(f0_sample_budget(0.5), 384);
        assert_eq!(f0_sample_budget(0.25), 1536);
    }

    #[test]
    fn few_distinct_values_answered_exactly() {
        // F0 < d: the subroutine reveals every distinct value
        let stream = Stream::new(vec![3, 1, 4, 1, 5, 9, 2, 6, 5, 3], 16).unwrap();
        let mut ledger = ResourceLedger::new();
        let est = approx_f0_query(
            &stream,
            1.0,
            &CostModel::default(),
            &mut crate::rng::seeded_rng(9),
            &mut ledger,
        )
        .unwrap();
        assert_eq!(est.value, 7.0);
        assert!(ledger.oracle_queries() > 0);
    }

    #[test]
    fn charge_is_the_dsmallest_formula() {
        let stream = Stream::new((1..=100).collect(), 200).unwrap();
        let mut ledger = ResourceLedger::new();
        approx_f0_query(
            &stream,
            1.0,
            &CostModel::default(),
            &mut crate::rng::seeded_rng(1),
            &mut ledger,
        )
        .unwrap();
        let expected = (96.0f64 * 100.0).sqrt().ceil() as u64;
        assert_eq!(ledger.oracle_queries(), expected);
    }

    #[test]
    fn estimator_tracks_f0_on_a_large_instance() {
        // light Monte-Carlo version of the acceptance criterion
        let n = 2000usize;
        let m = 4096u64;
        let items: Vec<u64> = (0..n).map(|i| (i as u64 % 1000) + 1).collect();
        let stream = Stream::new(items, m).unwrap();
        let truth = exact_moment(&stream, 0).to_f64().unwrap();
        let epsilon = 0.5;
        let trials = 60;
        let mut hits = 0;
        for t in 0..trials {
            let mut rng = crate::rng::trial_rng(4242, t);
            let mut ledger = ResourceLedger::new();
            let est = approx_f0_query(
                &stream,
                epsilon,
                &CostModel::default(),
                &mut rng,
                &mut ledger,
            )
            .unwrap();
            if (est.value - truth).abs() <= epsilon * truth {
                hits += 1;
            }
        }
        assert!(
            hits as f64 >= 0.55 * trials as f64,
            "success rate {hits}/{trials}"
        );
    }
}
