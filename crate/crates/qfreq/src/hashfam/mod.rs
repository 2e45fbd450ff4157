//! t-wise independent hash families: all degree-(t−1) polynomials over a prime
//! field GF(p), evaluated at the input and reduced onto the range. With R = p
//! ("exact mode") the family is exactly t-wise independent; with R < p the
//! range map carries a bias of at most R/p, kept below a configured budget by
//! choosing p ≥ R·2^bias.
//!
//! Sign hashes for the second-moment estimators map the field value to ±1 by
//! parity, with probability bias 1/(2p). The complete ±1 assignment family on
//! [m] is also provided for exact-mode enumeration tests.

pub mod field;

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use field::{next_prime_at_least, poly_eval_mod, MERSENNE_127};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HashFamilyError {
    #[error("no suitable prime: need p >= {required} which exceeds the supported tiers")]
    NoSuitablePrime { required: u128 },
    #[error("range {range} exceeds the field size {prime}")]
    RangeExceedsField { range: u128, prime: u128 },
    #[error("{prime} is not prime")]
    NotPrime { prime: u128 },
    #[error("field size {prime} is smaller than the domain {domain}")]
    FieldSmallerThanDomain { prime: u128, domain: u64 },
    #[error("independence t must be at least 1")]
    ZeroIndependence,
    #[error("family of {size} members exceeds the enumeration cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },
    #[error("malformed hash record: {0}")]
    MalformedRecord(String),
}

/// How the field prime is selected for a requested range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangePolicy {
    /// R = p: no range reduction, exact t-wise independence. The prime is given.
    Exact { prime: u128 },
    /// Reduce mod R with p ≥ R·2^bias_log2, keeping the per-point bias ≤ 2^-bias_log2.
    Auto { bias_log2: u32 },
}

impl Default for RangePolicy {
    fn default() -> Self {
        RangePolicy::Auto { bias_log2: 20 }
    }
}

/// A t-wise independent family over domain [m] with range [R].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    t: u32,
    domain: u64,
    range: u128,
    prime: u128,
}

/// Upper limit on fully enumerated family sizes.
pub const FAMILY_ENUMERATION_CAP: u128 = 1 << 24;

pub fn make_family(
    t: u32,
    domain: u64,
    range: u128,
    policy: RangePolicy,
) -> Result<HashFamily, HashFamilyError> {
    if t == 0 {
        return Err(HashFamilyError::ZeroIndependence);
    }
    let prime = match policy {
        RangePolicy::Exact { prime } => {
            if prime != range {
                return Err(HashFamilyError::RangeExceedsField { range, prime });
            }
            let ok = if prime <= u64::MAX as u128 {
                field::is_prime_u64(prime as u64)
            } else {
                prime == MERSENNE_127
            };
            if !ok {
                return Err(HashFamilyError::NotPrime { prime });
            }
            prime
        }
        RangePolicy::Auto { bias_log2 } => {
            let required =
                (domain as u128).max(range.checked_shl(bias_log2).unwrap_or(u128::MAX).max(range));
            if required <= field::SMALL_PRIME_CAP as u128 {
                next_prime_at_least(required as u64)
                    .ok_or(HashFamilyError::NoSuitablePrime { required })? as u128
            } else if required <= MERSENNE_127 {
                MERSENNE_127
            } else {
                return Err(HashFamilyError::NoSuitablePrime { required });
            }
        }
    };
    if prime < domain as u128 {
        return Err(HashFamilyError::FieldSmallerThanDomain { prime, domain });
    }
    if range > prime {
        return Err(HashFamilyError::RangeExceedsField { range, prime });
    }
    Ok(HashFamily {
        t,
        domain,
        range,
        prime,
    })
}

impl HashFamily {
    pub fn independence(&self) -> u32 {
        self.t
    }

    pub fn domain_size(&self) -> u64 {
        self.domain
    }

    pub fn range_size(&self) -> u128 {
        self.range
    }

    pub fn field_prime(&self) -> u128 {
        self.prime
    }

    /// |H| = p^t.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.t)
    }

    /// Number of field values that map to a given range value y ∈ [1, R].
    /// Out of p uniform field values, y is hit ⌈(p − (y−1))/R⌉ times.
    pub fn point_preimage_count(&self, y: u128) -> u128 {
        assert!(y >= 1 && y <= self.range);
        let residue = y - 1;
        if residue >= self.prime {
            return 0;
        }
        (self.prime - residue - 1) / self.range + 1
    }

    /// Uniformly sampled member; reproducible for a fixed rng state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HashFunction {
        let coeffs = (0..self.t)
            .map(|_| uniform_field(rng, self.prime))
            .collect();
        HashFunction {
            prime: self.prime,
            range: self.range,
            coeffs,
        }
    }

    /// Member j of the family, j ∈ [0, p^t): the base-p digits of j are the
    /// coefficients in ascending degree order. This is the explicit index map
    /// used wherever a family member must be addressed by number.
    pub fn member_at(&self, index: u128) -> HashFunction {
        let mut coeffs = Vec::with_capacity(self.t as usize);
        let mut rest = index;
        for _ in 0..self.t {
            coeffs.push(rest % self.prime);
            rest /= self.prime;
        }
        HashFunction {
            prime: self.prime,
            range: self.range,
            coeffs,
        }
    }

    /// All members, for exact-mode enumeration. Errors above the cap.
    pub fn enumerate(&self) -> Result<Vec<HashFunction>, HashFamilyError> {
        let size = (0..self.t).try_fold(1u128, |acc, _| acc.checked_mul(self.prime));
        let size = size.filter(|&s| s <= FAMILY_ENUMERATION_CAP).ok_or(
            HashFamilyError::EnumerationTooLarge {
                size: size.unwrap_or(u128::MAX),
                cap: FAMILY_ENUMERATION_CAP,
            },
        )?;
        Ok((0..size).map(|j| self.member_at(j)).collect())
    }
}

fn uniform_field<R: Rng + ?Sized>(rng: &mut R, p: u128) -> u128 {
    if p <= u64::MAX as u128 {
        rng.random_range(0..p as u64) as u128
    } else {
        // rejection sample 127-bit values below the Mersenne prime
        loop {
            let x: u128 = rng.random::<u128>() >> 1;
            if x < p {
                return x;
            }
        }
    }
}

/// One polynomial hash: h(x) = ((Σ_i c_i x^i mod p) mod R) + 1, outputs in [1, R].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFunction {
    prime: u128,
    range: u128,
    coeffs: Vec<u128>,
}

impl HashFunction {
    /// The raw field value Σ_i c_i x^i mod p.
    pub fn field_value(&self, x: u64) -> u128 {
        poly_eval_mod(&self.coeffs, x as u128, self.prime)
    }

    /// Range value in [1, R].
    pub fn eval(&self, x: u64) -> u128 {
        self.field_value(x) % self.range + 1
    }

    pub fn coefficients(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn prime(&self) -> u128 {
        self.prime
    }

    pub fn range(&self) -> u128 {
        self.range
    }

    /// Text record `p t c0 c1 … c_{t-1}`, the reproducibility format.
    pub fn to_record(&self) -> String {
        let mut s = format!("{} {}", self.prime, self.coeffs.len());
        for c in &self.coeffs {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s
    }

    /// Parses a `p t c0 … c_{t-1}` record; the range is family-level context.
    pub fn from_record(record: &str, range: u128) -> Result<Self, HashFamilyError> {
        let mut it = record.split_whitespace();
        let bad = |m: &str| HashFamilyError::MalformedRecord(m.to_string());
        let prime: u128 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("missing prime"))?;
        let t: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("missing t"))?;
        let coeffs: Vec<u128> = it
            .map(|s| s.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("coefficient is not an integer"))?;
        if coeffs.len() != t {
            return Err(bad("coefficient count does not match t"));
        }
        if range > prime {
            return Err(HashFamilyError::RangeExceedsField { range, prime });
        }
        Ok(HashFunction {
            prime,
            range,
            coeffs,
        })
    }
}

/// 4-wise independent ±1 hashes: degree-3 polynomials over an odd prime field,
/// sign = parity of the field value. Pr[+1] = 1/2 + 1/(2p).
#[derive(Debug, Clone)]
pub struct SignHashFamily {
    inner: HashFamily,
}

/// Default lower bound on the sign-hash prime, keeping the documented
/// parity bias 1/(2p) below 2^-32.
pub const SIGN_PRIME_FLOOR: u64 = 1 << 31;

pub fn make_sign_family(domain: u64, min_prime: u64) -> Result<SignHashFamily, HashFamilyError> {
    let lo = domain.max(min_prime).max(3);
    let p = next_prime_at_least(lo).ok_or(HashFamilyError::NoSuitablePrime {
        required: lo as u128,
    })? as u128;
    let inner = make_family(4, domain, p, RangePolicy::Exact { prime: p })?;
    Ok(SignHashFamily { inner })
}

impl SignHashFamily {
    pub fn field_prime(&self) -> u128 {
        self.inner.field_prime()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SignHashFunction {
        SignHashFunction {
            inner: self.inner.sample(rng),
        }
    }

    pub fn enumerate(&self) -> Result<Vec<SignHashFunction>, HashFamilyError> {
        Ok(self
            .inner
            .enumerate()?
            .into_iter()
            .map(|inner| SignHashFunction { inner })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignHashFunction {
    inner: HashFunction,
}

impl SignHashFunction {
    pub fn sign_eval(&self, x: u64) -> i64 {
        if self.inner.field_value(x).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn as_field_hash(&self) -> &HashFunction {
        &self.inner
    }
}

/// The complete family of all 2^m sign assignments on [m]: exactly m-wise
/// independent, so in particular an exact ±1 4-wise family. Enumeration scale
/// only; exact-mode tests use it where the estimator identities must hold as
/// integer identities.
#[derive(Debug, Clone, Copy)]
pub struct ExactSignFamily {
    m: u64,
}

pub const EXACT_SIGN_DOMAIN_CAP: u64 = 24;

impl ExactSignFamily {
    pub fn new(m: u64) -> Result<Self, HashFamilyError> {
        if m > EXACT_SIGN_DOMAIN_CAP {
            return Err(HashFamilyError::EnumerationTooLarge {
                size: 1u128 << m.min(127),
                cap: 1 << EXACT_SIGN_DOMAIN_CAP,
            });
        }
        Ok(ExactSignFamily { m })
    }

    pub fn len(&self) -> u64 {
        1 << self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sign of value x ∈ [1, m] under member `pattern`: bit (x−1) of the pattern.
    pub fn sign(&self, pattern: u64, x: u64) -> i64 {
        debug_assert!(x >= 1 && x <= self.m);
        if pattern >> (x - 1) & 1 == 0 {
            1
        } else {
            -1
        }
    }
}
