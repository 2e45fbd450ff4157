//! Prime-field arithmetic for the polynomial hash constructions.
//!
//! Two tiers: ordinary primes below 2^63 (products fit in u128), and the
//! Mersenne prime 2^127 − 1 for ranges too large for the first tier, reduced
//! by limb folding.

/// The Mersenne prime 2^127 − 1.
pub const MERSENNE_127: u128 = (1u128 << 127) - 1;

/// Largest bound for which `next_prime_at_least` searches ordinary primes.
pub const SMALL_PRIME_CAP: u64 = 1 << 63;

fn pow_mod_u64(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Deterministic Miller–Rabin for u64 (the 12 smallest prime witnesses cover
/// the whole range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime ≥ `lo`, or None if the search would pass `SMALL_PRIME_CAP`.
pub fn next_prime_at_least(lo: u64) -> Option<u64> {
    let mut candidate = lo.max(2);
    loop {
        if candidate >= SMALL_PRIME_CAP {
            return None;
        }
        if is_prime_u64(candidate) {
            return Some(candidate);
        }
        candidate += 1;
    }
}

/// x mod (2^127 − 1), for x < 2^128.
fn fold_m127(x: u128) -> u128 {
    let mut r = (x & MERSENNE_127) + (x >> 127);
    if r >= MERSENNE_127 {
        r -= MERSENNE_127;
    }
    r
}

/// a·b mod (2^127 − 1) via 64-bit limbs. a, b must be < 2^127.
fn mul_mod_m127(a: u128, b: u128) -> u128 {
    let (a1, a0) = (a >> 64, a & u64::MAX as u128);
    let (b1, b0) = (b >> 64, b & u64::MAX as u128);
    let low = a0 * b0;
    let mid = a0 * b1 + a1 * b0; // a1, b1 < 2^63 so each product < 2^127
    let high = a1 * b1;

    // value = high·2^128 + mid·2^64 + low, reduced with 2^127 ≡ 1.
    let mid_hi = mid >> 63; // mid = mid_hi·2^63 + mid_lo ⇒ mid·2^64 ≡ mid_hi + mid_lo·2^64
    let mid_lo = (mid & ((1u128 << 63) - 1)) << 64;
    let mut acc = fold_m127(low);
    acc = fold_m127(acc + mid_lo);
    acc = fold_m127(acc + mid_hi);
    acc = fold_m127(acc + fold_m127(high << 1));
    acc
}

/// a·b mod p. p must either be below 2^64 or equal MERSENNE_127.
pub fn mul_mod(a: u128, b: u128, p: u128) -> u128 {
    if p <= u64::MAX as u128 {
        (a % p) * (b % p) % p
    } else {
        debug_assert_eq!(p, MERSENNE_127, "large primes must be the Mersenne tier");
        mul_mod_m127(a % p, b % p)
    }
}

pub fn add_mod(a: u128, b: u128, p: u128) -> u128 {
    let (a, b) = (a % p, b % p);
    let r = a.wrapping_add(b);
    if r >= p || r < a {
        r.wrapping_sub(p)
    } else {
        r
    }
}

/// Horner evaluation of Σ_i c_i·x^i mod p (c in ascending degree order).
pub fn poly_eval_mod(coeffs: &[u128], x: u128, p: u128) -> u128 {
    let x = x % p;
    let mut acc: u128 = 0;
    for &c in coeffs.iter().rev() {
        acc = add_mod(mul_mod(acc, x, p), c, p);
    }
    acc
}
