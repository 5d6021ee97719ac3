//! Integer gcd, the extended Euclidean algorithm and inverses in Z_n.

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclidean algorithm: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`.
pub fn bezout(a: u64, b: u64) -> (u64, i64, i64) {
    let (mut old_r, mut r) = (a as i64, b as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r as u64, old_s, old_t)
}

/// Multiplicative inverse of `a` in Z_n, or `None` when `gcd(a, n) != 1`.
pub fn inverse_in_zn(n: u64, a: u64) -> Option<u64> {
    let a = a % n;
    let (g, u, _) = bezout(a, n);
    if g != 1 {
        return None;
    }
    Some(u.rem_euclid(n as i64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_handles_zero() {
        assert_eq!(bezout(0, 5), (5, 0, 1));
        assert_eq!(bezout(5, 0), (5, 1, 0));
    }

    #[test]
    fn inverse_of_unit_is_unit() {
        for n in 2u64..40 {
            for a in 1..n {
                if let Some(x) = inverse_in_zn(n, a) {
                    assert_eq!(inverse_in_zn(n, x), Some(a));
                }
            }
        }
    }
}
