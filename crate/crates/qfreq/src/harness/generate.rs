//! Instance generators: the hard instances reused from the lower-bound
//! reductions (pair streams, near-pairings, bounded-overlap set encodings)
//! plus generic generators. Every named generator advertises the moments its
//! construction forces, asserted exactly by the test suites.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::stream::{MomentIndex, Stream};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {name}: {message}")]
    BadParams { name: &'static str, message: String },
}

/// A generated stream with the moments its construction pins down.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub stream: Stream,
    /// Exact advertised moments; empty for generators without closed forms.
    pub advertised: Vec<(MomentIndex, BigUint)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityVariant {
    Equal,
    Distinct,
}

/// The generator catalogue.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// n uniform draws from [1, m].
    Uniform { n: usize, m: u64 },
    /// n draws from a heavy-tailed (Zipf-like, exponent s) law on [1, m].
    Zipf { n: usize, m: u64, s: f64 },
    /// The single value 1, n times.
    AllEqual { n: usize, m: u64 },
    /// Values 1..n shuffled: every multiplicity 1.
    AllDistinct { n: usize },
    /// Each of n/2 values exactly twice (collision-instance S₂): F_k = n·2^{k−1}.
    Pairs { n: usize },
    /// (n−2)/2 values twice plus two unmatched singletons (near-pairing):
    /// F_k = 2^{k−1}(n−2) + 2.
    NearPairs { n: usize },
    /// f0 values, each n/f0 times: F₀ pinned with uniform multiplicities.
    /// The universe may be wider than the support.
    Balanced { n: usize, f0: u64, m: u64 },
    /// Concatenation of two n/4-subsets of [n] with overlap ≤ n/8 (equality
    /// reduction): equal variant duplicates the subset; the distinct variant
    /// forces overlap exactly n/8.
    Equality { n: usize, variant: EqualityVariant },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Uniform { .. } => "uniform",
            GeneratorSpec::Zipf { .. } => "zipf",
            GeneratorSpec::AllEqual { .. } => "all_equal",
            GeneratorSpec::AllDistinct { .. } => "all_distinct",
            GeneratorSpec::Pairs { .. } => "pairs",
            GeneratorSpec::NearPairs { .. } => "near_pairs",
            GeneratorSpec::Balanced { .. } => "balanced",
            GeneratorSpec::Equality { .. } => "equality",
        }
    }

    /// Parses a generator from its name and `key=value` parameters.
    pub fn parse(
        name: &str,
        params: &std::collections::BTreeMap<String, String>,
    ) -> Result<Self, GeneratorError> {
        let get_usize = |key: &str, gen: &'static str| -> Result<usize, GeneratorError> {
            params
                .get(key)
                .and_then(|v| v.parse().ok())
                .ok_or(GeneratorError::BadParams {
                    name: gen,
                    message: format!("missing or invalid `{key}`"),
                })
        };
        let get_u64 = |key: &str, gen: &'static str| -> Result<u64, GeneratorError> {
            params
                .get(key)
                .and_then(|v| v.parse().ok())
                .ok_or(GeneratorError::BadParams {
                    name: gen,
                    message: format!("missing or invalid `{key}`"),
                })
        };
        match name {
            "uniform" => Ok(GeneratorSpec::Uniform {
                n: get_usize("n", "uniform")?,
                m: get_u64("m", "uniform")?,
            }),
            "zipf" => Ok(GeneratorSpec::Zipf {
                n: get_usize("n", "zipf")?,
                m: get_u64("m", "zipf")?,
                s: params.get("s").and_then(|v| v.parse().ok()).unwrap_or(1.1),
            }),
            "all_equal" => {
                let n = get_usize("n", "all_equal")?;
                let m = params.get("m").and_then(|v| v.parse().ok()).unwrap_or(1u64);
                Ok(GeneratorSpec::AllEqual { n, m })
            }
            "all_distinct" => Ok(GeneratorSpec::AllDistinct {
                n: get_usize("n", "all_distinct")?,
            }),
            "pairs" => Ok(GeneratorSpec::Pairs {
                n: get_usize("n", "pairs")?,
            }),
            "near_pairs" => Ok(GeneratorSpec::NearPairs {
                n: get_usize("n", "near_pairs")?,
            }),
            "balanced" => {
                let f0 = get_u64("f0", "balanced")?;
                let m = params.get("m").and_then(|v| v.parse().ok()).unwrap_or(f0);
                Ok(GeneratorSpec::Balanced {
                    n: get_usize("n", "balanced")?,
                    f0,
                    m,
                })
            }
            "equality" => {
                let n = get_usize("n", "equality")?;
                let variant = match params.get("variant").map(|s| s.as_str()) {
                    Some("equal") => EqualityVariant::Equal,
                    Some("distinct") | None => EqualityVariant::Distinct,
                    Some(other) => {
                        return Err(GeneratorError::BadParams {
                            name: "equality",
                            message: format!("unknown variant {other:?}"),
                        })
                    }
                };
                Ok(GeneratorSpec::Equality { n, variant })
            }
            other => Err(GeneratorError::UnknownGenerator(other.to_string())),
        }
    }

    pub fn generate<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<GeneratedInstance, GeneratorError> {
        match *self {
            GeneratorSpec::Uniform { n, m } => {
                require(m >= 1, "uniform", "m >= 1")?;
                let items = (0..n).map(|_| rng.random_range(1..=m)).collect();
                Ok(instance(items, m, vec![]))
            }
            GeneratorSpec::Zipf { n, m, s } => {
                require(m >= 1, "zipf", "m >= 1")?;
                require(s > 0.0, "zipf", "s > 0")?;
                // inverse-CDF sampling over unnormalized weights r^{-s}
                let weights: Vec<f64> = (1..=m).map(|r| (r as f64).powf(-s)).collect();
                let total: f64 = weights.iter().sum();
                let items = (0..n)
                    .map(|_| {
                        let mut u = rng.random::<f64>() * total;
                        for (r, w) in weights.iter().enumerate() {
                            u -= w;
                            if u <= 0.0 {
                                return r as u64 + 1;
                            }
                        }
                        m
                    })
                    .collect();
                Ok(instance(items, m, vec![]))
            }
            GeneratorSpec::AllEqual { n, m } => {
                require(m >= 1, "all_equal", "m >= 1")?;
                let mut advertised = vec![
                    (MomentIndex::Finite(0), BigUint::from(n.min(1) as u64)),
                    (MomentIndex::Infinity, BigUint::from(n as u64)),
                ];
                for k in 1..=4u32 {
                    advertised.push((MomentIndex::Finite(k), BigUint::from(n as u64).pow(k)));
                }
                Ok(instance(vec![1; n], m, advertised))
            }
            GeneratorSpec::AllDistinct { n } => {
                let mut items: Vec<u64> = (1..=n as u64).collect();
                items.shuffle(rng);
                let mut advertised =
                    vec![(MomentIndex::Infinity, BigUint::from(1u64.min(n as u64)))];
                for k in 0..=4u32 {
                    advertised.push((MomentIndex::Finite(k), BigUint::from(n as u64)));
                }
                Ok(instance(items, n.max(1) as u64, advertised))
            }
            GeneratorSpec::Pairs { n } => {
                require(n >= 2 && n % 2 == 0, "pairs", "n even and >= 2")?;
                let half = n as u64 / 2;
                let mut items: Vec<u64> = (1..=half).flat_map(|v| [v, v]).collect();
                items.shuffle(rng);
                let mut advertised = vec![
                    (MomentIndex::Finite(0), BigUint::from(half)),
                    (MomentIndex::Infinity, BigUint::from(2u64)),
                ];
                for k in 1..=4u32 {
                    // F_k = (n/2)·2^k = n·2^{k−1}
                    advertised.push((MomentIndex::Finite(k), BigUint::from(n as u64) << (k - 1)));
                }
                Ok(instance(items, half.max(1), advertised))
            }
            GeneratorSpec::NearPairs { n } => {
                require(n >= 4 && n % 2 == 0, "near_pairs", "n even and >= 4")?;
                let paired = (n as u64 - 2) / 2;
                let mut items: Vec<u64> = (1..=paired).flat_map(|v| [v, v]).collect();
                items.push(paired + 1);
                items.push(paired + 2);
                items.shuffle(rng);
                let mut advertised = vec![
                    (MomentIndex::Finite(0), BigUint::from(paired + 2)),
                    (MomentIndex::Infinity, BigUint::from(2u64)),
                ];
                for k in 1..=4u32 {
                    // construction-derived: 2^{k−1}(n−2) + 2
                    let fk = (BigUint::from(n as u64 - 2) << (k - 1)) + BigUint::from(2u64);
                    advertised.push((MomentIndex::Finite(k), fk));
                }
                Ok(instance(items, paired + 2, advertised))
            }
            GeneratorSpec::Balanced { n, f0, m } => {
                require(f0 >= 1, "balanced", "f0 >= 1")?;
                require(m >= f0, "balanced", "m >= f0")?;
                require(
                    (n as u64).is_multiple_of(f0),
                    "balanced",
                    "f0 must divide n for exact multiplicities",
                )?;
                let reps = n as u64 / f0;
                let mut items: Vec<u64> = (1..=f0)
                    .flat_map(|v| std::iter::repeat_n(v, reps as usize))
                    .collect();
                items.shuffle(rng);
                let mut advertised = vec![
                    (MomentIndex::Finite(0), BigUint::from(f0)),
                    (MomentIndex::Infinity, BigUint::from(reps)),
                ];
                for k in 1..=4u32 {
                    advertised.push((
                        MomentIndex::Finite(k),
                        BigUint::from(f0) * BigUint::from(reps).pow(k),
                    ));
                }
                Ok(instance(items, m, advertised))
            }
            GeneratorSpec::Equality { n, variant } => {
                require(
                    n >= 8 && n % 8 == 0,
                    "equality",
                    "n must be a multiple of 8",
                )?;
                let quarter = n / 4;
                let overlap = n / 8;
                let mut universe: Vec<u64> = (1..=n as u64).collect();
                universe.shuffle(rng);
                let first: Vec<u64> = universe[..quarter].to_vec();
                let second: Vec<u64> = match variant {
                    EqualityVariant::Equal => first.clone(),
                    EqualityVariant::Distinct => {
                        // exactly `overlap` common values, the rest fresh
                        let mut s: Vec<u64> = first[..overlap].to_vec();
                        s.extend_from_slice(&universe[quarter..quarter + (quarter - overlap)]);
                        s
                    }
                };
                let mut items = first;
                items.extend(second);
                let mut advertised = Vec::new();
                match variant {
                    EqualityVariant::Equal => {
                        advertised.push((MomentIndex::Finite(0), BigUint::from(quarter as u64)));
                        advertised.push((MomentIndex::Infinity, BigUint::from(2u64)));
                        for k in 1..=4u32 {
                            // n/4 values twice: F_k = (n/4)·2^k = n·2^{k−2}
                            advertised
                                .push((MomentIndex::Finite(k), BigUint::from(quarter as u64) << k));
                        }
                    }
                    EqualityVariant::Distinct => {
                        let distinct = (n / 2 - overlap) as u64;
                        advertised.push((MomentIndex::Finite(0), BigUint::from(distinct)));
                        advertised.push((MomentIndex::Infinity, BigUint::from(2u64)));
                        for k in 1..=4u32 {
                            // overlap values twice, the rest once
                            let fk = (BigUint::from(overlap as u64) << k)
                                + BigUint::from((n / 2 - 2 * overlap) as u64);
                            advertised.push((MomentIndex::Finite(k), fk));
                        }
                    }
                }
                Ok(instance(items, n as u64, advertised))
            }
        }
    }
}

fn require(ok: bool, name: &'static str, message: &str) -> Result<(), GeneratorError> {
    if ok {
        Ok(())
    } else {
        Err(GeneratorError::BadParams {
            name,
            message: message.to_string(),
        })
    }
}

fn instance(items: Vec<u64>, m: u64, advertised: Vec<(MomentIndex, BigUint)>) -> GeneratedInstance {
    GeneratedInstance {
        stream: Stream::new(items, m).expect("generators produce in-range values"),
        advertised,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{exact_f_infty, exact_moment};

    fn check_advertised(inst: &GeneratedInstance) {
        for (k, expected) in &inst.advertised {
            match k {
                MomentIndex::Finite(k) => {
                    assert_eq!(exact_moment(&inst.stream, *k), *expected, "F_{k} mismatch");
                }
                MomentIndex::Infinity => {
                    assert_eq!(
                        BigUint::from(exact_f_infty(&inst.stream).unwrap()),
                        *expected,
                        "F_inf mismatch"
                    );
                }
            }
        }
    }

    #[test]
    fn pairs_instance_moments() {
        let inst = GeneratorSpec::Pairs { n: 6 }
            .generate(&mut crate::rng::seeded_rng(1))
            .unwrap();
        // F₂ = n·2^{k−1} = 12
        assert_eq!(exact_moment(&inst.stream, 2), BigUint::from(12u32));
        check_advertised(&inst);
    }

    #[test]
    fn all_distinct_instance_moments() {
        let inst = GeneratorSpec::AllDistinct { n: 6 }
            .generate(&mut crate::rng::seeded_rng(2))
            .unwrap();
        assert_eq!(exact_moment(&inst.stream, 2), BigUint::from(6u32));
        check_advertised(&inst);
    }

    #[test]
    fn near_pairs_gap_against_pairs() {
        // the construction-derived F₂ values differ by a constant: 2n vs 2n−2
        let pairs = GeneratorSpec::Pairs { n: 16 }
            .generate(&mut crate::rng::seeded_rng(3))
            .unwrap();
        let near = GeneratorSpec::NearPairs { n: 16 }
            .generate(&mut crate::rng::seeded_rng(4))
            .unwrap();
        check_advertised(&pairs);
        check_advertised(&near);
        assert_eq!(exact_moment(&pairs.stream, 2), BigUint::from(32u32));
        assert_eq!(exact_moment(&near.stream, 2), BigUint::from(30u32));
    }

    #[test]
    fn every_generator_satisfies_its_advertised_moments() {
        let specs: Vec<GeneratorSpec> = vec![
            GeneratorSpec::Uniform { n: 40, m: 16 },
            GeneratorSpec::Zipf {
                n: 40,
                m: 16,
                s: 1.2,
            },
            GeneratorSpec::AllEqual { n: 12, m: 3 },
            GeneratorSpec::AllDistinct { n: 12 },
            GeneratorSpec::Pairs { n: 12 },
            GeneratorSpec::NearPairs { n: 12 },
            GeneratorSpec::Balanced { n: 12, f0: 4, m: 9 },
            GeneratorSpec::Equality {
                n: 16,
                variant: EqualityVariant::Equal,
            },
            GeneratorSpec::Equality {
                n: 16,
                variant: EqualityVariant::Distinct,
            },
        ];
        for (i, spec) in specs.iter().enumerate() {
            let inst = spec
                .generate(&mut crate::rng::seeded_rng(10 + i as u64))
                .unwrap();
            check_advertised(&inst);
        }
    }

    #[test]
    fn equality_variants_have_the_reduction_gap() {
        let eq = GeneratorSpec::Equality {
            n: 32,
            variant: EqualityVariant::Equal,
        }
        .generate(&mut crate::rng::seeded_rng(5))
        .unwrap();
        let ne = GeneratorSpec::Equality {
            n: 32,
            variant: EqualityVariant::Distinct,
        }
        .generate(&mut crate::rng::seeded_rng(6))
        .unwrap();
        // equal: F_k = n·2^{k−2}; distinct: F₀ ≥ 3n/8 and F_k ≤ n/4 + n·2^{k−3}
        assert_eq!(exact_moment(&eq.stream, 2), BigUint::from(32u32));
        assert!(exact_moment(&ne.stream, 0) >= BigUint::from(12u32));
        assert!(exact_moment(&ne.stream, 2) <= BigUint::from(8u32 + 16u32));
    }

    #[test]
    fn parse_rejects_unknown_names() {
        let params = std::collections::BTreeMap::new();
        assert!(matches!(
            GeneratorSpec::parse("nope", &params),
            Err(GeneratorError::UnknownGenerator(_))
        ));
    }
}
