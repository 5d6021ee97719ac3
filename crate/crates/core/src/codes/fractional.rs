//! Fractional-rate linear solutions: the extra receivers of the tap and
//! two-gadget families cannot be served at rate 1 when the characteristic
//! divides the gadget size, but giving every message `k` symbols carried in
//! `n = k + 1` edge slots restores solvability over the prime field. The
//! extra slot of each bottleneck carries a crafted mix of diagonal message
//! components that the extra receiver combines; the positional receivers
//! still decode by subtracting slotwise.

use std::collections::BTreeMap;

use crate::algebra::alphabet::Alphabet;
use crate::algebra::factor::is_prime;
use crate::algebra::matrix::RingMatrix;
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams, EdgeFunction, LinearForm};

use super::{bottleneck, bottleneck_all, own_relay, port, receiver, shared_relay};

/// Accumulates `rows x cols` coefficient matrices keyed by input id, with
/// 1-based row/column indices matching the component conventions below.
struct FormBuilder {
    modulus: u64,
    rows: usize,
    cols: usize,
    terms: BTreeMap<String, RingMatrix>,
}

impl FormBuilder {
    fn new(modulus: u64, rows: u64, cols: u64) -> Self {
        FormBuilder { modulus, rows: rows as usize, cols: cols as usize, terms: BTreeMap::new() }
    }

    /// Add `coeff` at (row, col), both 1-based.
    fn add(&mut self, id: &str, row: u64, col: u64, coeff: u64) {
        let mat = self
            .terms
            .entry(id.to_string())
            .or_insert_with(|| RingMatrix::zero(self.modulus, self.rows, self.cols));
        let (r, c) = ((row - 1) as usize, (col - 1) as usize);
        mat.set(r, c, (mat.get(r, c) + coeff) % self.modulus);
    }

    fn message_form(self) -> EdgeFunction {
        EdgeFunction::Linear(LinearForm { message_terms: self.terms, edge_terms: BTreeMap::new() })
    }

    fn edge_form(self) -> EdgeFunction {
        EdgeFunction::Linear(LinearForm { message_terms: BTreeMap::new(), edge_terms: self.terms })
    }
}

fn require_prime_divisor(p: u64, m: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if m % p != 0 {
        return Err(Error::Precondition(format!("{p} does not divide {m}")));
    }
    Ok(())
}

/// Rate `(2m+1)/(2m+2)` solution for the extra-receiver family over `GF(p)`
/// for a prime `p` dividing `m` — the regime where no scalar linear solution
/// exists. Messages carry `k = 2m+1` symbols; each bottleneck's final slot
/// mixes diagonal components so the tap receiver can reassemble `x_0`.
pub fn n1_fractional(m: u64, p: u64) -> Result<Code> {
    if m < 1 {
        return Err(Error::Precondition("the extra-receiver family needs m >= 1".into()));
    }
    require_prime_divisor(p, m)?;
    let k = 2 * m + 1;
    let n = 2 * m + 2;
    let mut code = Code::new(CodeParams { k, n, alphabet: Alphabet::field(p)? });
    let x = |j: u64| format!("x_{j}");

    // Bottleneck 0: componentwise sums of the messages its encoder sees,
    // except that slots 1..m skip the message indexed like the slot and the
    // final slot carries the diagonal components of messages 2..m.
    let mut b = FormBuilder::new(p, n, k);
    for l in 1..=m {
        for j in 1..=m {
            if j != l {
                b.add(&x(j), l, l, 1);
            }
        }
    }
    for l in m + 1..=k {
        for j in 1..=m {
            b.add(&x(j), l, l, 1);
        }
    }
    for j in 2..=m {
        b.add(&x(j), n, j, 1);
    }
    code.set_edge_function(bottleneck(0, ""), b.message_form());

    // Bottleneck i (1 <= i <= m): like the shared bottleneck but without
    // x_i; slot i switches to the diagonal mix and the final slot carries
    // one high component of x_0.
    for i in 1..=m {
        let mut b = FormBuilder::new(p, n, k);
        for l in 1..=m {
            if l == i {
                b.add(&x(0), i, m + 1, 1);
                for j in 1..=m {
                    if j != i {
                        b.add(&x(j), i, j, 1);
                    }
                }
            } else {
                for j in 0..=m {
                    if j != i && j != l {
                        b.add(&x(j), l, l, 1);
                    }
                }
            }
        }
        for l in m + 1..=k {
            for j in 0..=m {
                if j != i {
                    b.add(&x(j), l, l, 1);
                }
            }
        }
        b.add(&x(0), n, m + 1 + i, 1);
        code.set_edge_function(bottleneck(i, ""), b.message_form());
    }

    // Shared bottleneck: sums over all messages with the same slot pattern.
    let mut b = FormBuilder::new(p, n, k);
    for l in 1..=m {
        for j in 0..=m {
            if j != l {
                b.add(&x(j), l, l, 1);
            }
        }
    }
    for l in m + 1..=k {
        for j in 0..=m {
            b.add(&x(j), l, l, 1);
        }
    }
    b.add(&x(0), n, m + 1, 1);
    for j in 1..=m {
        b.add(&x(j), n, j, 1);
    }
    code.set_edge_function(bottleneck_all(""), b.message_form());

    // Positional receivers subtract slotwise; receiver i >= 1 takes its own
    // slot-i component from the final slot of the shared bottleneck instead.
    let mut b = FormBuilder::new(p, k, n);
    for l in 1..=k {
        b.add(&shared_relay(0, ""), l, l, 1);
        b.add(&own_relay(0, ""), l, l, p - 1);
    }
    code.add_decoder(receiver(0, ""), x(0), b.edge_form());
    for i in 1..=m {
        let mut b = FormBuilder::new(p, k, n);
        for l in 1..=k {
            if l == i {
                b.add(&shared_relay(i, ""), i, n, 1);
                b.add(&own_relay(i, ""), i, i, p - 1);
            } else {
                b.add(&shared_relay(i, ""), l, l, 1);
                b.add(&own_relay(i, ""), l, l, p - 1);
            }
        }
        code.add_decoder(receiver(i, ""), x(i), b.edge_form());
    }

    // Tap receiver: slots 1..m cancel the other messages using that p
    // divides m; the remaining components of x_0 come out of the mixed
    // slots.
    let pt = |i: u64| port(i, "", "R_x");
    let mut b = FormBuilder::new(p, k, n);
    for l in 1..=m {
        b.add(&pt(0), l, l, p - 2);
        for i in 1..=m {
            if i != l {
                b.add(&pt(i), l, l, p - 1);
            }
        }
    }
    b.add(&pt(1), m + 1, 1, 1);
    b.add(&pt(0), m + 1, n, p - 1);
    for l in m + 2..=k {
        b.add(&pt(l - m - 1), l, n, 1);
    }
    code.add_decoder("R_x", x(0), b.edge_form());
    Ok(code)
}

/// Rate `(2m1+2m2+2)/(2m1+2m2+3)` solution for the two-gadget family over
/// `GF(p)` for a prime `p` dividing both gadget sizes — again the regime
/// with no scalar linear solution. The shared message's components are split
/// across the slot ranges of the two gadgets; `delta = 2*m1 + m2 + 2` marks
/// where the second gadget's private slots begin.
pub fn n3_fractional(m1: u64, m2: u64, p: u64) -> Result<Code> {
    if m1 < 1 || m2 < 1 {
        return Err(Error::Precondition("this family needs m1 >= 1 and m2 >= 1".into()));
    }
    require_prime_divisor(p, m1)?;
    require_prime_divisor(p, m2)?;
    let k = 2 * (m1 + m2) + 2;
    let n = k + 1;
    let delta = 2 * m1 + m2 + 2;
    let mut code = Code::new(CodeParams { k, n, alphabet: Alphabet::field(p)? });
    let x1 = |j: u64| format!("x_{j}^(1)");
    let x2 = |j: u64| format!("x_{j}^(2)");
    let s1 = "^(1)";
    let s2 = "^(2)";

    // First gadget, bottleneck 0 (sees only the private messages).
    let mut b = FormBuilder::new(p, n, k);
    for l in 1..=m1 {
        for j in 1..=m1 {
            if j != l {
                b.add(&x1(j), l, l, 1);
            }
        }
    }
    for l in m1 + 1..=k {
        for j in 1..=m1 {
            b.add(&x1(j), l, l, 1);
        }
    }
    for j in 2..=m1 {
        b.add(&x1(j), n, j, 1);
    }
    code.set_edge_function(bottleneck(0, s1), b.message_form());

    // First gadget, bottleneck i >= 1.
    for i in 1..=m1 {
        let mut b = FormBuilder::new(p, n, k);
        for l in 1..=m1 {
            if l == i {
                b.add("z", i, m1 + 1, 1);
                for j in 1..=m1 {
                    if j != i {
                        b.add(&x1(j), i, j, 1);
                    }
                }
            } else {
                b.add("z", l, l, 1);
                for j in 1..=m1 {
                    if j != i && j != l {
                        b.add(&x1(j), l, l, 1);
                    }
                }
            }
        }
        for l in m1 + 1..=k {
            b.add("z", l, l, 1);
            for j in 1..=m1 {
                if j != i {
                    b.add(&x1(j), l, l, 1);
                }
            }
        }
        b.add("z", n, m1 + i + 1, 1);
        code.set_edge_function(bottleneck(i, s1), b.message_form());
    }

    // First gadget, shared bottleneck.
    let mut b = FormBuilder::new(p, n, k);
    for l in 1..=m1 {
        b.add("z", l, l, 1);
        for j in 1..=m1 {
            if j != l {
                b.add(&x1(j), l, l, 1);
            }
        }
    }
    for l in m1 + 1..=k {
        b.add("z", l, l, 1);
        for j in 1..=m1 {
            b.add(&x1(j), l, l, 1);
        }
    }
    b.add("z", n, m1 + 1, 1);
    for j in 1..=m1 {
        b.add(&x1(j), n, j, 1);
    }
    code.set_edge_function(bottleneck_all(s1), b.message_form());

    // Second gadget, bottleneck 0: its private slots live in delta+1..k.
    let mut b = FormBuilder::new(p, n, k);
    for l in 1..=delta {
        for j in 1..=m2 {
            b.add(&x2(j), l, l, 1);
        }
    }
    for l in delta + 1..=k {
        for j in 1..=m2 {
            if j != l - delta {
                b.add(&x2(j), l, l, 1);
            }
        }
    }
    for j in 2..=m2 {
        b.add(&x2(j), n, delta + j, 1);
    }
    code.set_edge_function(bottleneck(0, s2), b.message_form());

    // Second gadget, bottleneck i >= 1.
    for i in 1..=m2 {
        let mut b = FormBuilder::new(p, n, k);
        for l in 1..=delta {
            b.add("z", l, l, 1);
            for j in 1..=m2 {
                if j != i {
                    b.add(&x2(j), l, l, 1);
                }
            }
        }
        for l in delta + 1..=k {
            if l == delta + i {
                b.add("z", l, delta, 1);
                for j in 1..=m2 {
                    if j != i {
                        b.add(&x2(j), l, delta + j, 1);
                    }
                }
            } else {
                b.add("z", l, l, 1);
                for j in 1..=m2 {
                    if j != i && j != l - delta {
                        b.add(&x2(j), l, l, 1);
                    }
                }
            }
        }
        b.add("z", n, 2 * m1 + 1 + i, 1);
        code.set_edge_function(bottleneck(i, s2), b.message_form());
    }

    // Second gadget, shared bottleneck.
    let mut b = FormBuilder::new(p, n, k);
    for l in 1..=delta {
        b.add("z", l, l, 1);
        for j in 1..=m2 {
            b.add(&x2(j), l, l, 1);
        }
    }
    for l in delta + 1..=k {
        b.add("z", l, l, 1);
        for j in 1..=m2 {
            if j != l - delta {
                b.add(&x2(j), l, l, 1);
            }
        }
    }
    b.add("z", n, delta, 1);
    for j in 1..=m2 {
        b.add(&x2(j), n, delta + j, 1);
    }
    code.set_edge_function(bottleneck_all(s2), b.message_form());

    // Positional receivers of both gadgets subtract slotwise, pulling the
    // one mixed slot out of the shared bottleneck's final component.
    for (suffix, size) in [(s1, m1), (s2, m2)] {
        let mut b = FormBuilder::new(p, k, n);
        for l in 1..=k {
            b.add(&shared_relay(0, suffix), l, l, 1);
            b.add(&own_relay(0, suffix), l, l, p - 1);
        }
        code.add_decoder(receiver(0, suffix), "z", b.edge_form());

        for i in 1..=size {
            let special = if suffix == s1 { i } else { delta + i };
            let msg = if suffix == s1 { x1(i) } else { x2(i) };
            let mut b = FormBuilder::new(p, k, n);
            for l in 1..=k {
                if l == special {
                    b.add(&shared_relay(i, suffix), l, n, 1);
                    b.add(&own_relay(i, suffix), l, special, p - 1);
                } else {
                    b.add(&shared_relay(i, suffix), l, l, 1);
                    b.add(&own_relay(i, suffix), l, l, p - 1);
                }
            }
            code.add_decoder(receiver(i, suffix), msg, b.edge_form());
        }
    }

    // Shared-message receiver: taps every bottleneck of both gadgets. Slots
    // 1..m1 and delta+1..k cancel privately carried messages using that p
    // divides the gadget sizes; the middle components come out of the mixed
    // final slots.
    let pt1 = |i: u64| port(i, s1, "R_z");
    let pt2 = |i: u64| port(i, s2, "R_z");
    let mut b = FormBuilder::new(p, k, n);
    for l in 1..=m1 {
        b.add(&pt1(0), l, l, p - 2);
        for i in 1..=m1 {
            if i != l {
                b.add(&pt1(i), l, l, p - 1);
            }
        }
    }
    b.add(&pt1(1), m1 + 1, 1, 1);
    b.add(&pt1(0), m1 + 1, n, p - 1);
    for l in m1 + 2..=2 * m1 + 1 {
        b.add(&pt1(l - m1 - 1), l, n, 1);
    }
    for l in 2 * m1 + 2..=2 * m1 + m2 + 1 {
        b.add(&pt2(l - 2 * m1 - 1), l, n, 1);
    }
    b.add(&pt2(1), delta, delta + 1, 1);
    b.add(&pt2(0), delta, n, p - 1);
    for l in delta + 1..=k {
        b.add(&pt2(0), l, l, p - 2);
        for i in 1..=m2 {
            if i != l - delta {
                b.add(&pt2(i), l, l, p - 1);
            }
        }
    }
    code.add_decoder("R_z", "z", b.edge_form());
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_scale_with_the_gadget_sizes() {
        let code = n1_fractional(2, 2).unwrap();
        assert_eq!((code.params.k, code.params.n), (5, 6));
        // 3 messages and 3 bottlenecks get explicit functions.
        assert_eq!(code.edge_functions.len(), 4);
        assert_eq!(code.decoders.len(), 4);

        let code = n3_fractional(2, 2, 2).unwrap();
        assert_eq!((code.params.k, code.params.n), (10, 11));
        assert_eq!(code.edge_functions.len(), 8);
        assert_eq!(code.decoders.len(), 7);
    }

    #[test]
    fn every_function_is_linear() {
        let code = n3_fractional(2, 2, 2).unwrap();
        for f in code.edge_functions.values() {
            assert!(matches!(f, EdgeFunction::Linear(_)));
        }
        for d in &code.decoders {
            assert!(matches!(d.function, EdgeFunction::Linear(_)));
        }
    }
}
