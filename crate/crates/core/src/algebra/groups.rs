//! Finite abelian groups as products of cyclic groups, with elements encoded
//! as mixed-radix integers.

use serde::{Deserialize, Serialize};

use crate::algebra::factor::factorize;
use crate::error::Result;

/// A finite abelian group given by its cyclic factor orders. Elements are
/// encoded as integers in `0..order()` in mixed radix, first factor most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Group with the given cyclic factor orders (each must be at least 1).
    pub fn new(factors: Vec<u64>) -> Self {
        assert!(factors.iter().all(|&f| f >= 1), "factor orders must be positive");
        FiniteAbelianGroup { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> u64 {
        0
    }

    /// Split an element into its per-factor digits.
    pub fn decompose(&self, a: u64) -> Vec<u64> {
        mixed_radix_decompose(&self.factors, a)
    }

    /// Reassemble an element from per-factor digits.
    pub fn compose(&self, digits: &[u64]) -> u64 {
        mixed_radix_compose(&self.factors, digits)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let da = self.decompose(a);
        let db = self.decompose(b);
        let sum: Vec<u64> = self
            .factors
            .iter()
            .zip(da.iter().zip(db.iter()))
            .map(|(&f, (&x, &y))| (x + y) % f)
            .collect();
        self.compose(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let da = self.decompose(a);
        let n: Vec<u64> = self
            .factors
            .iter()
            .zip(da.iter())
            .map(|(&f, &x)| (f - x) % f)
            .collect();
        self.compose(&n)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// `c`-fold sum of `a`.
    pub fn scalar_mul(&self, c: u64, a: u64) -> u64 {
        let da = self.decompose(a);
        let s: Vec<u64> = self
            .factors
            .iter()
            .zip(da.iter())
            .map(|(&f, &x)| (x as u128 * c as u128 % f as u128) as u64)
            .collect();
        self.compose(&s)
    }
}

/// Digits of `value` in the mixed radix given by `sizes`, first digit most
/// significant.
pub fn mixed_radix_decompose(sizes: &[u64], value: u64) -> Vec<u64> {
    let mut digits = vec![0u64; sizes.len()];
    let mut rest = value;
    for (i, &s) in sizes.iter().enumerate().rev() {
        digits[i] = rest % s;
        rest /= s;
    }
    digits
}

/// Inverse of [`mixed_radix_decompose`].
pub fn mixed_radix_compose(sizes: &[u64], digits: &[u64]) -> u64 {
    assert_eq!(sizes.len(), digits.len());
    let mut value = 0u64;
    for (&s, &d) in sizes.iter().zip(digits.iter()) {
        debug_assert!(d < s);
        value = value * s + d;
    }
    value
}

/// Partitions of `n` with parts descending, enumerated largest-first
/// (`[n]`, ..., `[1, 1, ..., 1]`).
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = max_part.min(remaining);
        for part in (1..=top).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All abelian groups of order `n >= 2`, one per isomorphism class. For each
/// prime power `p^e` of `n` the cyclic factors follow the partitions of `e`
/// largest-first; primes ascend, and the factor lists of later primes vary
/// fastest across the returned groups.
pub fn abelian_groups_of_order(n: u64) -> Result<Vec<FiniteAbelianGroup>> {
    let fs = factorize(n)?;
    let per_prime: Vec<Vec<Vec<u64>>> = fs
        .iter()
        .map(|(p, e)| {
            partitions(*e)
                .into_iter()
                .map(|parts| parts.into_iter().map(|a| p.pow(a)).collect())
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for choices in &per_prime {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for choice in choices {
                let mut factors: Vec<u64> = prefix.clone();
                factors.extend_from_slice(choice);
                next.push(factors);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(FiniteAbelianGroup::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_order() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn mixed_radix_roundtrip() {
        let sizes = [4u64, 3, 5];
        for v in 0..60 {
            assert_eq!(mixed_radix_compose(&sizes, &mixed_radix_decompose(&sizes, v)), v);
        }
    }
}
