//! Emulated d-smallest-distinct-types subroutine: given oracles f and g on
//! [n], returns d′ = min(d, #types) indices holding the d′ smallest f-values
//! subject to pairwise-distinct g-values, charging ⌈c·√(d·n)⌉ joint queries.
//! A combined f=g evaluation is charged once (recorded ledger policy).

use rand::Rng;

use super::ledger::{charged_d_smallest_queries, CostModel, ResourceLedger};

/// Emulator: computes the exact answer classically, charges the proven cost.
/// With failure injection on, the returned set is adversarially perturbed with
/// probability `delta`.
pub fn d_smallest_distinct<R: Rng + ?Sized>(
    f: &[u128],
    g: &[u128],
    d: usize,
    delta: f64,
    cost: &CostModel,
    rng: &mut R,
    ledger: &mut ResourceLedger,
) -> Vec<usize> {
    assert_eq!(f.len(), g.len());
    assert!(d >= 1);
    let n = f.len();
    ledger.mark_emulated("d_smallest_distinct");
    ledger.charge_queries(charged_d_smallest_queries(d, n, cost.c_dsmall));

    // best representative per g-type: smallest f, ties to the smallest index
    let mut best: std::collections::HashMap<u128, (u128, usize)> = std::collections::HashMap::new();
    for i in 0..n {
        let entry = best.entry(g[i]).or_insert((f[i], i));
        if (f[i], i) < *entry {
            *entry = (f[i], i);
        }
    }
    let mut reps: Vec<(u128, usize)> = best.into_values().collect();
    reps.sort_unstable();

    let d_prime = d.min(reps.len());
    let mut chosen: Vec<usize> = reps[..d_prime].iter().map(|&(_, i)| i).collect();

    if cost.failure_injection && rng.random_bool(delta) {
        // adversarial perturbation: swap the boundary element for the next
        // representative, or drop it when there is none
        if reps.len() > d_prime {
            chosen[d_prime - 1] = reps[d_prime].1;
        } else if chosen.len() > 1 {
            chosen.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: &[u128], g: &[u128], d: usize) -> (Vec<usize>, ResourceLedger) {
        let mut ledger = ResourceLedger::new();
        let out = d_smallest_distinct(
            f,
            g,
            d,
            1.0 / 15.0,
            &CostModel::default(),
            &mut crate::rng::seeded_rng(1),
            &mut ledger,
        );
        (out, ledger)
    }

    #[test]
    fn identity_oracles_give_smallest_indices() {
        let v: Vec<u128> = vec![1, 2, 3, 4, 5];
        let (out, ledger) = run(&v, &v, 2);
        assert_eq!(out, vec![0, 1]);
        assert_eq!(ledger.oracle_queries(), (2.0f64 * 5.0).sqrt().ceil() as u64);
    }

    #[test]
    fn duplicate_types_keep_one_representative() {
        // f = g = hashed values with duplicates: one index per distinct value,
        // ordered by value
        let v: Vec<u128> = vec![9, 3, 3, 7, 9, 1];
        let (out, _) = run(&v, &v, 3);
        assert_eq!(out, vec![5, 1, 3]); // values 1, 3, 7
    }

    #[test]
    fn d_larger_than_type_count_truncates() {
        let v: Vec<u128> = vec![2, 2, 5, 5];
        let (out, _) = run(&v, &v, 10);
        assert_eq!(out.len(), 2); // d' = |{g(j)}| = 2
        assert_eq!(out, vec![0, 2]);
    }

    #[test]
    fn output_contract_holds_on_random_inputs() {
        use rand::Rng;
        let mut rng = crate::rng::seeded_rng(8);
        for _ in 0..200 {
            let n = rng.random_range(1..=40);
            let f: Vec<u128> = (0..n).map(|_| rng.random_range(0..30u64) as u128).collect();
            let g: Vec<u128> = (0..n).map(|_| rng.random_range(0..8u64) as u128).collect();
            let d = rng.random_range(1..=6);
            let mut ledger = ResourceLedger::new();
            let out =
                d_smallest_distinct(&f, &g, d, 0.0, &CostModel::default(), &mut rng, &mut ledger);

            // distinct g-types within the output
            let types: std::collections::HashSet<u128> = out.iter().map(|&i| g[i]).collect();
            assert_eq!(types.len(), out.len());

            // second bullet: any outside j with f(j) < f(i) has a chosen
            // representative of its own type at least as small
            for &i in &out {
                for j in 0..n {
                    if out.contains(&j) {
                        continue;
                    }
                    if f[j] < f[i] {
                        assert!(
                            out.iter().any(|&ip| g[ip] == g[j] && f[ip] <= f[j]),
                            "uncovered smaller element: f={f:?} g={g:?} d={d} out={out:?}"
                        );
                    }
                }
            }
        }
    }
}
