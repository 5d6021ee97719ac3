//! Families of permutations of a carrier `Z_N` whose scaled images jointly
//! pin down the argument: each permutation alone loses information once
//! multiplied by its scale, but the tuple of all scaled images stays
//! injective and therefore invertible. These maps drive the nonlinear
//! decoders in [`crate::codes::nonlinear`].

use std::collections::BTreeMap;

use crate::algebra::arith::gcd;
use crate::algebra::perm::Permutation;
use crate::error::{Error, Result};

/// A carrier size, one permutation per coordinate, a scale per coordinate,
/// and the precomputed inverse of the scaled-tuple map.
#[derive(Clone, Debug)]
pub struct PermutationFamily {
    carrier: u64,
    perms: Vec<Permutation>,
    scales: Vec<u64>,
    inverse: BTreeMap<Vec<u64>, u64>,
}

impl PermutationFamily {
    fn assemble(carrier: u64, perms: Vec<Permutation>, scales: Vec<u64>) -> Result<Self> {
        let mut fam = PermutationFamily { carrier, perms, scales, inverse: BTreeMap::new() };
        for a in 0..carrier {
            let t = fam.tuple(a);
            if fam.inverse.insert(t, a).is_some() {
                return Err(Error::Validation(
                    "scaled permutation images collide; the tuple map is not injective".into(),
                ));
            }
        }
        Ok(fam)
    }

    /// Permutations of `Z_{m*w}` viewed as `w` strata of `m` consecutive
    /// values: for `l < w`, permutation `l` cyclically advances the offset
    /// within stratum `l` and fixes everything else; the last permutation is
    /// the identity. All scales equal `w`, so a scaled image keeps the
    /// stratum index times `w` plus the (possibly advanced) offset times `w`;
    /// comparing the coordinates of the tuple recovers both.
    pub fn shift_family(m: u64, w: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("strata need size >= 2, got {m}")));
        }
        if w < 1 {
            return Err(Error::Precondition("at least one stratum permutation is needed".into()));
        }
        let carrier = m * w;
        let mut perms = Vec::with_capacity(w as usize);
        for l in 1..=w {
            if l == w {
                perms.push(Permutation::identity(carrier));
            } else {
                let map: Vec<u64> = (0..carrier)
                    .map(|a| if a / m == l { (a / m) * m + (a % m + 1) % m } else { a })
                    .collect();
                perms.push(Permutation::new(map)?);
            }
        }
        Self::assemble(carrier, perms, vec![w; w as usize])
    }

    /// Two permutations of `Z_{m^(a+1)}` where `a >= 1` is the exact power of
    /// `m` in `m2 = s * m^a` and the cofactor `s` is coprime to `m`: the
    /// first rotates the base-`m` digits (low digit to the top), the second
    /// is the identity. Scaled by `m` and `m2` respectively, the first
    /// coordinate keeps the high digits and the second keeps the low digit,
    /// so the pair inverts.
    pub fn digit_family(m: u64, m2: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("digit base must be at least 2, got {m}")));
        }
        if m2 < 1 {
            return Err(Error::Precondition("the companion modulus must be positive".into()));
        }
        let mut s = m2;
        let mut alpha = 0u32;
        while s % m == 0 {
            s /= m;
            alpha += 1;
        }
        if alpha == 0 {
            return Err(Error::Precondition(format!("{m} does not divide {m2}")));
        }
        if gcd(s, m) != 1 {
            return Err(Error::Precondition(format!(
                "{m2} = {s} * {m}^{alpha} leaves a cofactor {s} sharing a divisor with {m}"
            )));
        }
        let m_pow_alpha = m2 / s;
        let carrier = m.checked_mul(m_pow_alpha).ok_or_else(|| {
            Error::Precondition(format!("carrier {m}^{} does not fit in 64 bits", alpha + 1))
        })?;
        let rotate: Vec<u64> = (0..carrier).map(|a| (a % m) * m_pow_alpha + a / m).collect();
        let perms = vec![Permutation::new(rotate)?, Permutation::identity(carrier)];
        Self::assemble(carrier, perms, vec![m, m2])
    }

    pub fn carrier(&self) -> u64 {
        self.carrier
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn scales(&self) -> &[u64] {
        &self.scales
    }

    /// `scales[l] * perms[l](a)` in the carrier (0-based `l`).
    pub fn scaled(&self, l: usize, a: u64) -> u64 {
        (self.scales[l] as u128 * self.perms[l].apply(a) as u128 % self.carrier as u128) as u64
    }

    /// All scaled images of `a`, first permutation first.
    pub fn tuple(&self, a: u64) -> Vec<u64> {
        (0..self.perms.len()).map(|l| self.scaled(l, a)).collect()
    }

    /// The unique preimage of a scaled tuple, or `None` when the tuple is
    /// outside the image (wrong arity included).
    pub fn invert(&self, tuple: &[u64]) -> Option<u64> {
        self.inverse.get(tuple).copied()
    }

    /// Render the family as CSV: column `a`, the non-identity permutations in
    /// descending index order, then every scaled image in descending index
    /// order. Rows cover the whole carrier.
    pub fn to_csv(&self) -> String {
        let w = self.perms.len();
        let mut out = String::from("a");
        for l in (1..w).rev() {
            out.push_str(&format!(",pi_{l}(a)"));
        }
        for l in (1..=w).rev() {
            out.push_str(&format!(",{}pi_{}(a)", self.scales[l - 1], l));
        }
        out.push('\n');
        for a in 0..self.carrier {
            out.push_str(&a.to_string());
            for l in (1..w).rev() {
                out.push_str(&format!(",{}", self.perms[l - 1].apply(a)));
            }
            for l in (1..=w).rev() {
                out.push_str(&format!(",{}", self.scaled(l - 1, a)));
            }
            out.push('\n');
        }
        out
    }
}
