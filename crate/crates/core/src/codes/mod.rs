//! Hand-built codes for the generated families: all-ones scalar linear
//! designs, permutation-based nonlinear designs, fractional-rate linear
//! designs, componentwise products, and the assembly for the composite
//! union network.
//!
//! Constructors mirror the id scheme of [`crate::build`], so a code built
//! here attaches to the corresponding generated network without further
//! renaming.

use std::collections::BTreeMap;

use crate::algebra::matrix::RingMatrix;
use crate::net::code::{EdgeFunction, LinearForm};

pub mod fractional;
pub mod linear;
pub mod n4;
pub mod nonlinear;
pub mod perm_family;
pub mod product;

/// Id of gadget bottleneck `i` under `suffix`.
pub(crate) fn bottleneck(i: u64, suffix: &str) -> String {
    format!("e_{i}{suffix}")
}

/// Id of the all-inputs bottleneck under `suffix`.
pub(crate) fn bottleneck_all(suffix: &str) -> String {
    format!("e{suffix}")
}

/// Id of the relay from fan-out `i` into positional receiver `i`.
pub(crate) fn own_relay(i: u64, suffix: &str) -> String {
    format!("v_{i}{suffix}->R_{i}{suffix}")
}

/// Id of the relay from the all-inputs fan-out into positional receiver `i`.
pub(crate) fn shared_relay(i: u64, suffix: &str) -> String {
    format!("v{suffix}->R_{i}{suffix}")
}

/// Id of the tap from fan-out `i` into an extra receiver.
pub(crate) fn port(i: u64, suffix: &str, receiver: &str) -> String {
    format!("v_{i}{suffix}->{receiver}")
}

/// Id of positional receiver `i` under `suffix`.
pub(crate) fn receiver(i: u64, suffix: &str) -> String {
    format!("R_{i}{suffix}")
}

/// Scalar linear combination of messages; zero coefficients are dropped.
pub(crate) fn scalar_message_sum(modulus: u64, terms: &[(String, u64)]) -> EdgeFunction {
    let message_terms: BTreeMap<String, RingMatrix> = terms
        .iter()
        .filter(|(_, c)| c % modulus != 0)
        .map(|(id, c)| (id.clone(), RingMatrix::scalar(modulus, *c)))
        .collect();
    EdgeFunction::Linear(LinearForm { message_terms, edge_terms: BTreeMap::new() })
}

/// Scalar linear combination of in-edges; zero coefficients are dropped.
pub(crate) fn scalar_edge_sum(modulus: u64, terms: &[(String, u64)]) -> EdgeFunction {
    let edge_terms: BTreeMap<String, RingMatrix> = terms
        .iter()
        .filter(|(_, c)| c % modulus != 0)
        .map(|(id, c)| (id.clone(), RingMatrix::scalar(modulus, *c)))
        .collect();
    EdgeFunction::Linear(LinearForm { message_terms: BTreeMap::new(), edge_terms })
}
