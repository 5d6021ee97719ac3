//! Dense matrices over Z_n, row-major. Rank and the row-reduction helpers are
//! defined over prime moduli only; the ring operations work for any modulus.

use serde::{Deserialize, Serialize};

use crate::algebra::arith::inverse_in_zn;
use crate::algebra::factor::is_prime;
use crate::error::{Error, Result};

/// A `rows x cols` matrix with entries in Z_modulus, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl RingMatrix {
    pub fn zero(modulus: u64, rows: usize, cols: usize) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        RingMatrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut m = Self::zero(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from row vectors; the column count is taken from the first row,
    /// so at least one row is required.
    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Precondition(
                "from_rows needs at least one row; use from_rows_with_cols for empty matrices"
                    .into(),
            ));
        }
        Self::from_rows_with_cols(modulus, rows.len(), rows[0].len(), rows)
    }

    /// Build from row vectors with explicit dimensions (allows zero rows).
    pub fn from_rows_with_cols(
        modulus: u64,
        rows: usize,
        cols: usize,
        data: &[Vec<u64>],
    ) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::Precondition(format!(
                "expected {rows} rows, got {}",
                data.len()
            )));
        }
        let mut m = Self::zero(modulus, rows, cols);
        for (r, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Precondition(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    /// The 1x1 matrix holding `value`.
    pub fn scalar(modulus: u64, value: u64) -> Self {
        let mut m = Self::zero(modulus, 1, 1);
        m.set(0, 0, value);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.modulus as u128) as u64
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_same_modulus(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Precondition("matrix addition needs equal shapes".into()));
        }
        let mut out = Self::zero(self.modulus, self.rows, self.cols);
        for i in 0..self.data.len() {
            out.data[i] = (self.data[i] + other.data[i]) % self.modulus;
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: u64) -> RingMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = self.mul_mod(*v, c % self.modulus);
        }
        out
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_same_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.modulus, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.get(r, c) + self.mul_mod(a, other.get(k, c))) % self.modulus;
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Precondition(format!(
                "vector of length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![0u64; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc = (acc + self.mul_mod(self.get(r, c), v[c] % self.modulus)) % self.modulus;
            }
            out[r] = acc;
        }
        Ok(out)
    }

    fn check_same_modulus(&self, other: &RingMatrix) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::Precondition(format!(
                "mixed moduli {} and {}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    fn require_prime_modulus(&self, what: &str) -> Result<()> {
        if !is_prime(self.modulus) {
            return Err(Error::Precondition(format!(
                "{what} is defined over prime moduli only, got {}",
                self.modulus
            )));
        }
        Ok(())
    }

    /// Rank over GF(modulus); the modulus must be prime.
    pub fn rank(&self) -> Result<usize> {
        self.require_prime_modulus("rank")?;
        let mut work = self.clone();
        Ok(gauss_eliminate(&mut work, None))
    }

    /// For a full-column-rank matrix `A` over a prime field, return an
    /// invertible square matrix `B` with `B * A` equal to the identity stacked
    /// on zero rows.
    pub fn reduce_to_identity_block(&self) -> Result<RingMatrix> {
        self.require_prime_modulus("reduce_to_identity_block")?;
        let mut work = self.clone();
        let mut b = RingMatrix::identity(self.modulus, self.rows);
        let rank = gauss_eliminate(&mut work, Some(&mut b));
        if rank != self.cols {
            return Err(Error::Precondition(format!(
                "matrix has rank {rank}, need full column rank {}",
                self.cols
            )));
        }
        Ok(b)
    }

    /// For a full-row-rank `k x n` matrix over a prime field, return an
    /// `(n-k) x n` matrix whose rows complete this one to an invertible square
    /// matrix. Rows are chosen by scanning the standard unit vectors in index
    /// order and keeping each one that is independent of the span so far.
    pub fn complement_rows(&self) -> Result<RingMatrix> {
        self.require_prime_modulus("complement_rows")?;
        let k = self.rows;
        let n = self.cols;
        let mut basis = self.clone();
        if basis.rank()? != k {
            return Err(Error::Precondition(format!(
                "matrix has rank below its row count {k}"
            )));
        }
        let mut chosen: Vec<Vec<u64>> = Vec::new();
        for i in 0..n {
            if basis.rows() == n {
                break;
            }
            let mut unit = vec![0u64; n];
            unit[i] = 1;
            let mut candidate_rows: Vec<Vec<u64>> = Vec::with_capacity(basis.rows() + 1);
            for r in 0..basis.rows() {
                candidate_rows.push((0..n).map(|c| basis.get(r, c)).collect());
            }
            candidate_rows.push(unit.clone());
            let candidate =
                RingMatrix::from_rows_with_cols(self.modulus, basis.rows() + 1, n, &candidate_rows)?;
            if candidate.rank()? == basis.rows() + 1 {
                chosen.push(unit);
                basis = candidate;
            }
        }
        RingMatrix::from_rows_with_cols(self.modulus, n - k, n, &chosen)
    }
}

/// In-place Gauss-Jordan elimination over a prime field; returns the rank.
/// When `companion` is given, the same row operations are applied to it.
fn gauss_eliminate(m: &mut RingMatrix, mut companion: Option<&mut RingMatrix>) -> usize {
    let p = m.modulus;
    let mut pivot_row = 0usize;
    for col in 0..m.cols {
        let Some(src) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        swap_rows(m, src, pivot_row);
        if let Some(b) = companion.as_deref_mut() {
            swap_rows(b, src, pivot_row);
        }
        let inv = inverse_in_zn(p, m.get(pivot_row, col)).expect("nonzero over prime field");
        scale_row(m, pivot_row, inv);
        if let Some(b) = companion.as_deref_mut() {
            scale_row(b, pivot_row, inv);
        }
        for r in 0..m.rows {
            if r != pivot_row {
                let factor = m.get(r, col);
                if factor != 0 {
                    subtract_scaled_row(m, r, pivot_row, factor);
                    if let Some(b) = companion.as_deref_mut() {
                        subtract_scaled_row(b, r, pivot_row, factor);
                    }
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.rows {
            break;
        }
    }
    pivot_row
}

fn swap_rows(m: &mut RingMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        let (x, y) = (m.get(a, c), m.get(b, c));
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn scale_row(m: &mut RingMatrix, r: usize, factor: u64) {
    for c in 0..m.cols {
        let v = m.mul_mod(m.get(r, c), factor);
        m.set(r, c, v);
    }
}

fn subtract_scaled_row(m: &mut RingMatrix, target: usize, source: usize, factor: u64) {
    let p = m.modulus;
    for c in 0..m.cols {
        let sub = m.mul_mod(m.get(source, c), factor);
        let v = (m.get(target, c) + p - sub) % p;
        m.set(target, c, v);
    }
}
