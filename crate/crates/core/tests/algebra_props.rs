//! Property tests for the arithmetic and matrix primitives.

use ncnet_core::algebra::arith::{bezout, gcd, inverse_in_zn};
use ncnet_core::algebra::factor::{factorize, min_pow_at_least, radical_quotient};
use ncnet_core::algebra::matrix::RingMatrix;
use ncnet_core::algebra::perm::Permutation;
use proptest::prelude::*;

proptest! {
    #[test]
    fn bezout_satisfies_identity(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let (g, u, v) = bezout(a, b);
        prop_assert_eq!(g, gcd(a, b));
        prop_assert_eq!(u as i128 * a as i128 + v as i128 * b as i128, g as i128);
    }

    #[test]
    fn inverse_agrees_with_gcd_test(n in 2u64..500, a in 0u64..500) {
        let a = a % n;
        let inv = inverse_in_zn(n, a);
        prop_assert_eq!(inv.is_some(), gcd(a, n) == 1);
        if let Some(x) = inv {
            prop_assert!(x < n);
            prop_assert_eq!((a as u128 * x as u128 % n as u128) as u64, 1 % n);
        }
    }

    #[test]
    fn factorize_roundtrips(m in 2u64..1_000_000) {
        let fs = factorize(m).unwrap();
        let product: u64 = fs.iter().map(|(p, g)| p.pow(*g)).product();
        prop_assert_eq!(product, m);
    }

    #[test]
    fn radical_quotient_divides_m(m in 2u64..1_000_000) {
        let f = radical_quotient(m).unwrap();
        prop_assert_eq!(m % f, 0);
    }

    #[test]
    fn min_pow_bounds(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), bound in 1u64..100_000) {
        let a = min_pow_at_least(p, bound);
        prop_assert!(p.pow(a) >= bound);
        if a > 0 {
            prop_assert!(p.pow(a - 1) < bound);
        }
    }

    #[test]
    fn permutation_inverse_composes_to_identity(n in 1usize..20, seed in any::<u64>()) {
        // Build a permutation from the seed by a Fisher-Yates shuffle.
        let mut map: Vec<u64> = (0..n as u64).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            map.swap(i, j);
        }
        let p = Permutation::new(map).unwrap();
        let inv = p.inverse();
        for a in 0..n as u64 {
            prop_assert_eq!(inv.apply(p.apply(a)), a);
            prop_assert_eq!(p.apply(inv.apply(a)), a);
        }
    }

    #[test]
    fn reduce_to_identity_block_property(
        p in prop::sample::select(vec![2u64, 3, 5]),
        rows in 1usize..5,
        extra in 0usize..3,
        data in prop::collection::vec(0u64..5, 0..40),
    ) {
        // Draw a random (rows+extra) x rows matrix and keep it only if full column rank.
        let n = rows + extra;
        let mut cells = vec![0u64; n * rows];
        for (i, v) in data.iter().enumerate() {
            if i < cells.len() {
                cells[i] = v % p;
            }
        }
        let rows_vec: Vec<Vec<u64>> = (0..n).map(|r| cells[r * rows..(r + 1) * rows].to_vec()).collect();
        let a = RingMatrix::from_rows(p, &rows_vec).unwrap();
        if a.rank().unwrap() == rows {
            let b = a.reduce_to_identity_block().unwrap();
            let ba = b.mul(&a).unwrap();
            let mut expected = RingMatrix::zero(p, n, rows);
            for i in 0..rows {
                expected.set(i, i, 1);
            }
            prop_assert_eq!(ba, expected);
        }
    }

    #[test]
    fn complement_rows_property(
        p in prop::sample::select(vec![2u64, 3, 5]),
        k in 0usize..4,
        extra in 1usize..4,
        data in prop::collection::vec(0u64..5, 0..24),
    ) {
        let n = k + extra;
        let mut cells = vec![0u64; k * n];
        for (i, v) in data.iter().enumerate() {
            if i < cells.len() {
                cells[i] = v % p;
            }
        }
        let rows_vec: Vec<Vec<u64>> = (0..k).map(|r| cells[r * n..(r + 1) * n].to_vec()).collect();
        let a = RingMatrix::from_rows_with_cols(p, k, n, &rows_vec).unwrap();
        if a.rank().unwrap() == k {
            let q = a.complement_rows().unwrap();
            prop_assert_eq!(q.rows(), n - k);
            let mut stacked: Vec<Vec<u64>> = rows_vec.clone();
            for r in 0..q.rows() {
                stacked.push((0..n).map(|c| q.get(r, c)).collect());
            }
            let s = RingMatrix::from_rows_with_cols(p, n, n, &stacked).unwrap();
            prop_assert_eq!(s.rank().unwrap(), n);
        }
    }
}
