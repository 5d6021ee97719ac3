//! Scalar linear solutions for the generated families, built from all-ones
//! encoders: every bottleneck sums the inputs its encoder sees, positional
//! receivers subtract their own bottleneck from the shared one, and each
//! family's extra receiver recombines its taps with coefficients that exist
//! exactly under that family's arithmetic condition.

use crate::algebra::alphabet::Alphabet;
use crate::algebra::arith::{bezout, gcd, inverse_in_zn};
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams};

use super::{
    bottleneck, bottleneck_all, port, receiver, scalar_edge_sum, scalar_message_sum, shared_relay,
};

pub(crate) fn ring_modulus(alphabet: &Alphabet) -> Result<u64> {
    match alphabet {
        Alphabet::Ring { modulus } => Ok(*modulus),
        Alphabet::Field { prime } => Ok(*prime),
        _ => Err(Error::Precondition("scalar linear designs need a ring or field alphabet".into())),
    }
}

/// All-ones encoders and subtraction decoders for one gadget over the given
/// input messages (position order). Bottleneck `i` sums every input except
/// position `i`, the shared bottleneck sums all of them, and positional
/// receiver `i` recovers its input as the difference of its two relays.
fn ones_block(code: &mut Code, modulus: u64, suffix: &str, inputs: &[String]) {
    for i in 0..inputs.len() {
        let terms: Vec<(String, u64)> = inputs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, id)| (id.clone(), 1))
            .collect();
        code.set_edge_function(bottleneck(i as u64, suffix), scalar_message_sum(modulus, &terms));
    }
    let all: Vec<(String, u64)> = inputs.iter().map(|id| (id.clone(), 1)).collect();
    code.set_edge_function(bottleneck_all(suffix), scalar_message_sum(modulus, &all));

    for (i, input) in inputs.iter().enumerate() {
        let i = i as u64;
        let f = scalar_edge_sum(
            modulus,
            &[
                (shared_relay(i, suffix), 1),
                (super::own_relay(i, suffix), modulus - 1),
            ],
        );
        code.add_decoder(receiver(i, suffix), input.clone(), f);
    }
}

/// All-ones solution for the base family: works over every ring or prime
/// field because only differences of bottlenecks are decoded.
pub fn n0_scalar_linear(m: u64, alphabet: Alphabet) -> Result<Code> {
    let modulus = ring_modulus(&alphabet)?;
    if m < 1 {
        return Err(Error::Precondition("the base family needs m >= 1".into()));
    }
    let mut code = Code::new(CodeParams::scalar(alphabet));
    let inputs: Vec<String> = (0..=m).map(|i| format!("x_{i}")).collect();
    ones_block(&mut code, modulus, "", &inputs);
    Ok(code)
}

/// All-ones solution for the extra-receiver family. The tap receiver sums
/// its `m+1` bottleneck taps into `m * x_0` plus a multiple of the remaining
/// messages that cancels, so it needs `m` invertible modulo the
/// characteristic.
pub fn n1_scalar_linear(m: u64, alphabet: Alphabet) -> Result<Code> {
    let modulus = ring_modulus(&alphabet)?;
    if m < 1 {
        return Err(Error::Precondition("the extra-receiver family needs m >= 1".into()));
    }
    let Some(m_inv) = inverse_in_zn(modulus, m % modulus) else {
        return Err(Error::Precondition(format!(
            "{m} has no inverse modulo {modulus}, so the tap receiver cannot isolate its message"
        )));
    };
    let mut code = n0_scalar_linear(m, alphabet)?;
    // Sum of taps 1..m is m*x_0 + (m-1)*(sum of the others); subtracting
    // (m-1) copies of tap 0 leaves m*x_0.
    let mut terms = vec![(port(0, "", "R_x"), (m_inv + modulus - 1) % modulus)];
    for i in 1..=m {
        terms.push((port(i, "", "R_x"), m_inv));
    }
    code.add_decoder("R_x", "x_0", scalar_edge_sum(modulus, &terms));
    Ok(code)
}

/// All-ones solution for the shared-input family. The shared receiver sums
/// the non-0th taps of the first gadget: that equals `(m+1)` copies of the
/// shared message plus `m` copies of each private one, which collapses to
/// the shared message exactly when the characteristic divides `m`.
pub fn n2_scalar_linear(m: u64, w: u64, alphabet: Alphabet) -> Result<Code> {
    let modulus = ring_modulus(&alphabet)?;
    if m < 1 || w < 1 {
        return Err(Error::Precondition("this family needs m >= 1 and w >= 1".into()));
    }
    if m % modulus != 0 {
        return Err(Error::Precondition(format!(
            "characteristic {modulus} does not divide {m}, so the shared receiver's taps cannot cancel"
        )));
    }
    let mut code = Code::new(CodeParams::scalar(alphabet));
    for l in 1..=w {
        let suffix = format!("^({l})");
        let mut inputs = vec!["z".to_string()];
        inputs.extend((1..=m + 1).map(|i| format!("x_{i}{suffix}")));
        ones_block(&mut code, modulus, &suffix, &inputs);
    }
    let terms: Vec<(String, u64)> = (1..=m + 1).map(|i| (port(i, "^(1)", "R_z"), 1)).collect();
    code.add_decoder("R_z", "z", scalar_edge_sum(modulus, &terms));
    Ok(code)
}

/// All-ones solution for the two-gadget shared-input family. Gadget `l`
/// yields `m_l` copies of the shared message after its private messages
/// cancel; Bezout weights recombine the two multiples into `gcd(m1, m2)`
/// copies, so that gcd must be invertible modulo the characteristic.
pub fn n3_scalar_linear(m1: u64, m2: u64, alphabet: Alphabet) -> Result<Code> {
    let modulus = ring_modulus(&alphabet)?;
    if m1 < 1 || m2 < 1 {
        return Err(Error::Precondition("this family needs m1 >= 1 and m2 >= 1".into()));
    }
    let g = gcd(m1, m2);
    let Some(g_inv) = inverse_in_zn(modulus, g % modulus) else {
        return Err(Error::Precondition(format!(
            "gcd({m1}, {m2}) = {g} has no inverse modulo {modulus}"
        )));
    };
    let (_, u, v) = bezout(m1 / g, m2 / g);
    let weights = [u.rem_euclid(modulus as i64) as u64, v.rem_euclid(modulus as i64) as u64];

    let mut code = Code::new(CodeParams::scalar(alphabet));
    let mut rz_terms = Vec::new();
    for (l, (size, weight)) in [(m1, weights[0]), (m2, weights[1])].into_iter().enumerate() {
        let suffix = format!("^({})", l + 1);
        let mut inputs = vec!["z".to_string()];
        inputs.extend((1..=size).map(|i| format!("x_{i}{suffix}")));
        ones_block(&mut code, modulus, &suffix, &inputs);

        // weight/g * (sum of taps 1..size - (size-1) * tap 0) = weight/g * size * z.
        let c = (weight as u128 * g_inv as u128 % modulus as u128) as u64;
        let one_minus_size = (modulus + 1 - size % modulus) % modulus;
        rz_terms.push((port(0, &suffix, "R_z"), (c as u128 * one_minus_size as u128 % modulus as u128) as u64));
        for i in 1..=size {
            rz_terms.push((port(i, &suffix, "R_z"), c));
        }
    }
    code.add_decoder("R_z", "z", scalar_edge_sum(modulus, &rz_terms));
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::code::EdgeFunction;

    #[test]
    fn tap_receiver_coefficients_invert_the_multiplicity() {
        // Over Z_3 with m = 2: tap 0 carries x_1+x_2, taps 1 and 2 carry
        // x_0 plus one other message each; 1*tap0 + 2*tap1 + 2*tap2 = 4*x_0
        // + 3*(x_1+x_2) = x_0.
        let code = n1_scalar_linear(2, Alphabet::ring(3)).unwrap();
        let f = code.decoder_for("R_x", "x_0").unwrap();
        let EdgeFunction::Linear(form) = f else { panic!("expected a linear decoder") };
        let coeff = |i: u64| form.edge_terms[&port(i, "", "R_x")].get(0, 0);
        assert_eq!((coeff(0), coeff(1), coeff(2)), (1, 2, 2));
    }

    #[test]
    fn shared_receiver_uses_only_the_first_gadget() {
        let code = n2_scalar_linear(2, 2, Alphabet::ring(2)).unwrap();
        let f = code.decoder_for("R_z", "z").unwrap();
        let EdgeFunction::Linear(form) = f else { panic!("expected a linear decoder") };
        assert!(form.edge_terms.keys().all(|id| id.contains("^(1)")));
        assert_eq!(form.edge_terms.len(), 3);
    }

    #[test]
    fn gcd_must_be_invertible() {
        assert!(n3_scalar_linear(4, 6, Alphabet::ring(4)).is_err(), "gcd 2 not a unit mod 4");
        assert!(n3_scalar_linear(4, 6, Alphabet::ring(3)).is_ok(), "gcd 2 is a unit mod 3");
    }
}
