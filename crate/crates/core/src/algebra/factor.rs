//! Prime factorization by trial division and the derived quantities that
//! drive the composite-alphabet network construction.

use crate::error::{Error, Result};

/// Prime factorization of `m >= 2` as `(prime, exponent)` pairs with ascending primes.
pub fn factorize(m: u64) -> Result<Vec<(u64, u32)>> {
    if m < 2 {
        return Err(Error::Precondition(format!("factorize requires m >= 2, got {m}")));
    }
    let mut rest = m;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0u32;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(out)
}

/// Whether `m` is prime.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

/// All primes strictly below `bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound <= 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p < n {
        if sieve[p] {
            let mut q = p * p;
            while q < n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// `m` divided by its radical: the product of `p^(e-1)` over the prime
/// factorization of `m`. Equals 1 exactly when `m` is squarefree.
pub fn radical_quotient(m: u64) -> Result<u64> {
    Ok(factorize(m)?.iter().map(|(p, e)| p.pow(e - 1)).product())
}

/// Smallest exponent `a >= 0` with `p^a >= bound`.
pub fn min_pow_at_least(p: u64, bound: u64) -> u32 {
    assert!(p >= 2, "base must be at least 2");
    let mut a = 0u32;
    let mut pow = 1u64;
    while pow < bound {
        pow *= p;
        a += 1;
    }
    a
}

/// Companion modulus paired with the `index`-th prime of `m` (0-based, primes
/// ascending): `p_i^(e_i - 1)` times `p_j^min_pow_at_least(p_j, radical_quotient(m))`
/// over the remaining primes `p_j`.
pub fn partner_modulus(m: u64, index: usize) -> Result<u64> {
    let fs = factorize(m)?;
    if index >= fs.len() {
        return Err(Error::Precondition(format!(
            "{m} has {} distinct primes, index {index} is out of range",
            fs.len()
        )));
    }
    let f = radical_quotient(m)?;
    let mut out = fs[index].0.pow(fs[index].1 - 1);
    for (j, (p, _)) in fs.iter().enumerate() {
        if j != index {
            out *= p.pow(min_pow_at_least(*p, f));
        }
    }
    Ok(out)
}
