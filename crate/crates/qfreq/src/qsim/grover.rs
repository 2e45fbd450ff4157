//! Grover search on the statevector tier, used to validate the sin² success
//! formula the emulators sample from.

use rand::Rng;

use super::QsimError;

/// sin²((2j+1)·asin(√(t/n))): success probability of measuring a marked item
/// after j Grover iterations with t marked out of n.
pub fn grover_success_probability(n: u64, t: u64, iterations: u64) -> f64 {
    if t == 0 {
        return 0.0;
    }
    if t >= n {
        return 1.0;
    }
    let theta = ((t as f64 / n as f64).sqrt()).asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Number of iterations ⌊π/4·√(n/t)⌋ for a known marked count.
pub fn grover_iterations(n: u64, t: u64) -> u64 {
    if t == 0 || t >= n {
        return 0;
    }
    (std::f64::consts::FRAC_PI_4 * (n as f64 / t as f64).sqrt()).floor() as u64
}

#[derive(Debug, Clone)]
pub struct GroverRun {
    pub iterations: u64,
    pub success_probability: f64,
    pub measured: usize,
}

/// Runs ⌊π/4·√(N/t)⌋ Grover iterations over N = marked.len() items (a power of
/// two ≤ 2^12) with the marked set known, on real amplitudes, and samples a
/// measurement. The amplitudes stay uniform within the marked and unmarked
/// classes, so a two-component representation is exact.
pub fn grover_search_statevector<R: Rng + ?Sized>(
    marked: &[bool],
    rng: &mut R,
) -> Result<GroverRun, QsimError> {
    let n = marked.len();
    if !n.is_power_of_two() || n == 0 {
        return Err(QsimError::NotPowerOfTwo { len: n });
    }
    if n.trailing_zeros() > 12 {
        return Err(QsimError::TooManyQubits {
            qubits: n.trailing_zeros(),
        });
    }
    let t = marked.iter().filter(|&&b| b).count();
    let iterations = grover_iterations(n as u64, t as u64);

    // per-item amplitudes within each class
    let mut good = if t > 0 { 1.0 / (n as f64).sqrt() } else { 0.0 };
    let mut bad = 1.0 / (n as f64).sqrt();
    for _ in 0..iterations {
        // oracle: flip marked signs
        good = -good;
        // diffusion: a ↦ 2·mean − a
        let mean = (t as f64 * good + (n - t) as f64 * bad) / n as f64;
        good = 2.0 * mean - good;
        bad = 2.0 * mean - bad;
    }
    let success_probability = t as f64 * good * good;

    // sample a basis state from the exact distribution
    let measured = if t > 0 && rng.random::<f64>() < success_probability {
        let pick = rng.random_range(0..t);
        marked
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .nth(pick)
            .map(|(i, _)| i)
            .expect("pick < t")
    } else {
        let unmarked = n - t;
        if unmarked == 0 {
            rng.random_range(0..n)
        } else {
            let pick = rng.random_range(0..unmarked);
            marked
                .iter()
                .enumerate()
                .filter(|(_, &b)| !b)
                .nth(pick)
                .map(|(i, _)| i)
                .expect("pick < n - t")
        }
    };

    Ok(GroverRun {
        iterations,
        success_probability,
        measured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_marked_needs_no_iterations() {
        let marked = vec![true; 16];
        let run = grover_search_statevector(&marked, &mut crate::rng::seeded_rng(1)).unwrap();
        assert_eq!(run.iterations, 0);
        assert!((run.success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_marked_on_four_qubits_matches_formula() {
        // q = 4, t = 1: 3 iterations, success = sin²(7θ) with θ = asin(1/4)
        let mut marked = vec![false; 16];
        marked[5] = true;
        let run = grover_search_statevector(&marked, &mut crate::rng::seeded_rng(2)).unwrap();
        assert_eq!(run.iterations, 3);
        let theta = (1.0f64 / 4.0).asin();
        let expected = (7.0 * theta).sin().powi(2);
        assert!(
            (run.success_probability - expected).abs() < 1e-8,
            "got {} want {expected}",
            run.success_probability
        );
    }

    #[test]
    fn no_marked_items_yields_uniform_failure() {
        let marked = vec![false; 8];
        let mut seen = vec![0u32; 8];
        let mut rng = crate::rng::seeded_rng(3);
        for _ in 0..4000 {
            let run = grover_search_statevector(&marked, &mut rng).unwrap();
            assert_eq!(run.success_probability, 0.0);
            seen[run.measured] += 1;
        }
        for &c in &seen {
            assert!(c > 350, "measurement far from uniform: {seen:?}");
        }
    }

    #[test]
    fn closed_form_matches_explicit_statevector_iteration() {
        // cross-check the two-component evolution against a full dense vector
        let n = 64usize;
        let marked_idx = [3usize, 17, 40];
        let mut marked = vec![false; n];
        for &i in &marked_idx {
            marked[i] = true;
        }
        let mut amps = vec![1.0 / (n as f64).sqrt(); n];
        let iters = grover_iterations(n as u64, 3);
        for _ in 0..iters {
            for &i in &marked_idx {
                amps[i] = -amps[i];
            }
            let mean: f64 = amps.iter().sum::<f64>() / n as f64;
            for a in amps.iter_mut() {
                *a = 2.0 * mean - *a;
            }
        }
        let dense: f64 = marked_idx.iter().map(|&i| amps[i] * amps[i]).sum();
        let formula = grover_success_probability(n as u64, 3, iters);
        assert!((dense - formula).abs() < 1e-8);
    }
}
