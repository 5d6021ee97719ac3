//! Symbol alphabets: plain sets, the rings Z_n, prime fields, finite abelian
//! groups and finite products of alphabets. Symbols are integers in
//! `0..size()`; structured alphabets interpret them in mixed radix.

use serde::{Deserialize, Serialize};

use crate::algebra::arith::gcd;
use crate::algebra::factor::is_prime;
use crate::algebra::groups::{mixed_radix_compose, mixed_radix_decompose, FiniteAbelianGroup};
use crate::error::{Error, Result};

/// A finite symbol alphabet, possibly carrying algebraic structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alphabet {
    /// A structureless set of the given size.
    Set { size: u64 },
    /// The ring Z_n of integers modulo `modulus`.
    Ring { modulus: u64 },
    /// The prime field GF(prime).
    Field { prime: u64 },
    /// A product of cyclic groups with the given orders.
    Group { factors: Vec<u64> },
    /// A product alphabet; symbols split into one digit per part.
    Product { parts: Vec<Alphabet> },
}

impl Alphabet {
    pub fn set(size: u64) -> Self {
        assert!(size >= 1, "alphabet must be nonempty");
        Alphabet::Set { size }
    }

    pub fn ring(modulus: u64) -> Self {
        assert!(modulus >= 2, "ring modulus must be at least 2");
        Alphabet::Ring { modulus }
    }

    pub fn field(prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Precondition(format!("{prime} is not prime")));
        }
        Ok(Alphabet::Field { prime })
    }

    pub fn group(factors: Vec<u64>) -> Self {
        assert!(!factors.is_empty() && factors.iter().all(|&f| f >= 1));
        Alphabet::Group { factors }
    }

    pub fn product(parts: Vec<Alphabet>) -> Self {
        assert!(!parts.is_empty());
        Alphabet::Product { parts }
    }

    pub fn size(&self) -> u64 {
        match self {
            Alphabet::Set { size } => *size,
            Alphabet::Ring { modulus } => *modulus,
            Alphabet::Field { prime } => *prime,
            Alphabet::Group { factors } => factors.iter().product(),
            Alphabet::Product { parts } => parts.iter().map(|p| p.size()).product(),
        }
    }

    /// Additive characteristic: the smallest `c >= 1` with `c * a = 0` for all
    /// `a`, or `None` for a plain set.
    pub fn characteristic(&self) -> Option<u64> {
        match self {
            Alphabet::Set { .. } => None,
            Alphabet::Ring { modulus } => Some(*modulus),
            Alphabet::Field { prime } => Some(*prime),
            Alphabet::Group { factors } => Some(factors.iter().copied().fold(1, lcm)),
            Alphabet::Product { parts } => {
                parts.iter().map(|p| p.characteristic()).try_fold(1, |acc, c| Some(lcm(acc, c?)))
            }
        }
    }

    /// Multiplicative units of a ring or field alphabet; empty for alphabets
    /// without a multiplication.
    pub fn units(&self) -> Vec<u64> {
        match self {
            Alphabet::Ring { modulus } => (1..*modulus).filter(|&a| gcd(a, *modulus) == 1).collect(),
            Alphabet::Field { prime } => (1..*prime).collect(),
            _ => Vec::new(),
        }
    }

    fn require_additive(&self) -> Result<()> {
        if matches!(self, Alphabet::Set { .. }) {
            return Err(Error::Precondition("plain set has no additive structure".into()));
        }
        if let Alphabet::Product { parts } = self {
            for p in parts {
                p.require_additive()?;
            }
        }
        Ok(())
    }

    pub fn add(&self, a: u64, b: u64) -> Result<u64> {
        self.require_additive()?;
        Ok(match self {
            Alphabet::Set { .. } => unreachable!(),
            Alphabet::Ring { modulus } | Alphabet::Field { prime: modulus } => (a + b) % modulus,
            Alphabet::Group { factors } => FiniteAbelianGroup::new(factors.clone()).add(a, b),
            Alphabet::Product { parts } => {
                let sizes: Vec<u64> = parts.iter().map(|p| p.size()).collect();
                let da = mixed_radix_decompose(&sizes, a);
                let db = mixed_radix_decompose(&sizes, b);
                let mut out = Vec::with_capacity(parts.len());
                for (p, (x, y)) in parts.iter().zip(da.into_iter().zip(db)) {
                    out.push(p.add(x, y)?);
                }
                mixed_radix_compose(&sizes, &out)
            }
        })
    }

    pub fn neg(&self, a: u64) -> Result<u64> {
        self.require_additive()?;
        Ok(match self {
            Alphabet::Set { .. } => unreachable!(),
            Alphabet::Ring { modulus } | Alphabet::Field { prime: modulus } => {
                (modulus - a % modulus) % modulus
            }
            Alphabet::Group { factors } => FiniteAbelianGroup::new(factors.clone()).neg(a),
            Alphabet::Product { parts } => {
                let sizes: Vec<u64> = parts.iter().map(|p| p.size()).collect();
                let da = mixed_radix_decompose(&sizes, a);
                let mut out = Vec::with_capacity(parts.len());
                for (p, x) in parts.iter().zip(da) {
                    out.push(p.neg(x)?);
                }
                mixed_radix_compose(&sizes, &out)
            }
        })
    }

    pub fn sub(&self, a: u64, b: u64) -> Result<u64> {
        let nb = self.neg(b)?;
        self.add(a, nb)
    }

    /// `c`-fold sum of `a`; multiplication by the integer `c`.
    pub fn scalar_mul(&self, c: u64, a: u64) -> Result<u64> {
        self.require_additive()?;
        Ok(match self {
            Alphabet::Set { .. } => unreachable!(),
            Alphabet::Ring { modulus } | Alphabet::Field { prime: modulus } => {
                (c as u128 % *modulus as u128 * (a as u128) % *modulus as u128) as u64
            }
            Alphabet::Group { factors } => {
                FiniteAbelianGroup::new(factors.clone()).scalar_mul(c, a)
            }
            Alphabet::Product { parts } => {
                let sizes: Vec<u64> = parts.iter().map(|p| p.size()).collect();
                let da = mixed_radix_decompose(&sizes, a);
                let mut out = Vec::with_capacity(parts.len());
                for (p, x) in parts.iter().zip(da) {
                    out.push(p.scalar_mul(c, x)?);
                }
                mixed_radix_compose(&sizes, &out)
            }
        })
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_alphabet_addition_is_componentwise() {
        let p = Alphabet::product(vec![Alphabet::ring(4), Alphabet::ring(3)]);
        // (3,2) + (2,2) = (1,1): encoded 3*3+2=11, 2*3+2=8, 1*3+1=4.
        assert_eq!(p.add(11, 8).unwrap(), 4);
    }

    #[test]
    fn group_characteristic_is_lcm() {
        assert_eq!(Alphabet::group(vec![4, 6]).characteristic(), Some(12));
    }
}
