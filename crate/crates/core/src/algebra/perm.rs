//! Permutations of `{0, ..., n-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored as its image table: `map[a]` is the image of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<u64>,
}

impl Permutation {
    /// Build from an image table, checking bijectivity.
    pub fn new(map: Vec<u64>) -> Result<Self> {
        let n = map.len() as u64;
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= n || seen[v as usize] {
                return Err(Error::Validation(format!(
                    "image table of length {n} is not a permutation"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: u64) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn size(&self) -> u64 {
        self.map.len() as u64
    }

    pub fn apply(&self, a: u64) -> u64 {
        self.map[a as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u64; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b as usize] = a as u64;
        }
        Permutation { map: inv }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(a, &b)| a as u64 == b)
    }
}

/// All permutations of `{0, ..., n-1}` in lexicographic order of their image
/// tables. Intended for small `n` only.
pub fn all_permutations(n: u64) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n as usize);
    let mut used = vec![false; n as usize];
    fn rec(n: u64, current: &mut Vec<u64>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if current.len() as u64 == n {
            out.push(Permutation { map: current.clone() });
            return;
        }
        for v in 0..n {
            if !used[v as usize] {
                used[v as usize] = true;
                current.push(v);
                rec(n, current, used, out);
                current.pop();
                used[v as usize] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}
