//! Nonlinear scalar solutions for the shared-input families over `Z_{m*w}`
//! and `Z_{m^(a+1)}`: each gadget adds a permuted image of the shared
//! message to the sum of its private messages, the in-gadget receivers undo
//! the permutation after subtracting, and the extra receiver inverts the
//! tuple of scaled permutation images tabulated in
//! [`crate::codes::perm_family`].

use std::collections::BTreeMap;

use crate::algebra::alphabet::Alphabet;
use crate::algebra::groups::mixed_radix_decompose;
use crate::algebra::matrix::RingMatrix;
use crate::algebra::perm::Permutation;
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams, EdgeFunction, InputRef, LinearForm, Stage, StagedForm};

use super::perm_family::PermutationFamily;
use super::{bottleneck, bottleneck_all, own_relay, port, receiver, scalar_message_sum, shared_relay};

/// Hard cap on tabulated decode tables; anything larger is refused rather
/// than allocated.
const MAX_TABLE_ENTRIES: u128 = 1 << 26;

fn checked_table_len(size: u64, arity: u32) -> Result<usize> {
    match (size as u128).checked_pow(arity) {
        Some(len) if len <= MAX_TABLE_ENTRIES => Ok(len as usize),
        _ => Err(Error::Precondition(format!(
            "a decode table with {size}^{arity} entries is too large to tabulate"
        ))),
    }
}

/// `pi(z) + sum of xs`, staged as one z stage and one sum stage so the table
/// needs only `modulus^2` entries no matter how many messages feed in.
fn shifted_sum(modulus: u64, pi: &Permutation, xs: &[String]) -> EdgeFunction {
    let z_stage = Stage { terms: vec![(InputRef::message("z"), 1)] };
    let x_stage =
        Stage { terms: xs.iter().map(|x| (InputRef::message(x.clone()), 1)).collect() };
    let mut table = Vec::with_capacity((modulus * modulus) as usize);
    for zv in 0..modulus {
        for sum in 0..modulus {
            table.push((pi.apply(zv) + sum) % modulus);
        }
    }
    EdgeFunction::Staged(StagedForm { stages: vec![z_stage, x_stage], table })
}

/// `pi^{-1}(shared - own)` for the receiver whose gadget hides the shared
/// message behind a permutation.
fn unshift_difference(modulus: u64, pi: &Permutation, shared: String, own: String) -> EdgeFunction {
    let stage = Stage {
        terms: vec![(InputRef::edge(shared), 1), (InputRef::edge(own), modulus - 1)],
    };
    let inv = pi.inverse();
    let table = (0..modulus).map(|t| inv.apply(t)).collect();
    EdgeFunction::Staged(StagedForm { stages: vec![stage], table })
}

/// Plain `shared - own` for receivers of unpermuted messages.
fn difference(modulus: u64, shared: String, own: String) -> EdgeFunction {
    let mut edge_terms = BTreeMap::new();
    edge_terms.insert(shared, RingMatrix::scalar(modulus, 1));
    edge_terms.insert(own, RingMatrix::scalar(modulus, modulus - 1));
    EdgeFunction::Linear(LinearForm { message_terms: BTreeMap::new(), edge_terms })
}

/// Emit one gadget's bottlenecks and in-gadget decoders: bottleneck 0 misses
/// the shared message and is a plain sum, every other bottleneck and the
/// shared one add `pi(z)`, receiver 0 unshifts the difference and the others
/// subtract.
fn permuted_block(code: &mut Code, modulus: u64, pi: &Permutation, suffix: &str, xs: &[String]) {
    let ones: Vec<(String, u64)> = xs.iter().map(|x| (x.clone(), 1)).collect();
    code.set_edge_function(bottleneck(0, suffix), scalar_message_sum(modulus, &ones));
    for i in 1..=xs.len() as u64 {
        let others: Vec<String> =
            xs.iter().enumerate().filter(|(j, _)| *j as u64 != i - 1).map(|(_, x)| x.clone()).collect();
        code.set_edge_function(bottleneck(i, suffix), shifted_sum(modulus, pi, &others));
    }
    code.set_edge_function(bottleneck_all(suffix), shifted_sum(modulus, pi, xs));

    code.add_decoder(
        receiver(0, suffix),
        "z",
        unshift_difference(modulus, pi, shared_relay(0, suffix), own_relay(0, suffix)),
    );
    for (i, x) in xs.iter().enumerate() {
        let i = i as u64 + 1;
        code.add_decoder(
            receiver(i, suffix),
            x.clone(),
            difference(modulus, shared_relay(i, suffix), own_relay(i, suffix)),
        );
    }
}

/// Nonlinear solution for the shared-input family over `Z_{m*w}`: gadget `l`
/// hides the shared message behind the `l`-th stratum-shift permutation.
/// The extra receiver multiplies each gadget's tap sum by `w` — killing the
/// private messages, whose multiplicity `m*w` vanishes, and leaving `w`
/// times the permuted shared message — then inverts the tuple.
pub fn n2_nonlinear(m: u64, w: u64) -> Result<Code> {
    let fam = PermutationFamily::shift_family(m, w)?;
    let size = fam.carrier();
    checked_table_len(size, 2)?;
    let rz_len = checked_table_len(size, w as u32)?;

    let mut code = Code::new(CodeParams::scalar(Alphabet::ring(size)));
    for l in 1..=w {
        let suffix = format!("^({l})");
        let xs: Vec<String> = (1..=m + 1).map(|i| format!("x_{i}{suffix}")).collect();
        permuted_block(&mut code, size, &fam.perms()[(l - 1) as usize], &suffix, &xs);
    }

    let stages: Vec<Stage> = (1..=w)
        .map(|l| {
            let suffix = format!("^({l})");
            Stage {
                terms: (1..=m + 1)
                    .map(|i| (InputRef::edge(port(i, &suffix, "R_z")), w))
                    .collect(),
            }
        })
        .collect();
    let radices = vec![size; w as usize];
    let table: Vec<u64> = (0..rz_len as u64)
        .map(|ix| fam.invert(&mixed_radix_decompose(&radices, ix)).unwrap_or(0))
        .collect();
    code.add_decoder("R_z", "z", EdgeFunction::Staged(StagedForm { stages, table }));
    Ok(code)
}

/// Nonlinear solution for the two-gadget family over `Z_{m1^(a+1)}` where
/// `a` is the exact power of `m1` in `m2`: the first gadget hides the shared
/// message behind the digit rotation, the second carries it plainly. The
/// extra receiver forms `m_l` times the permuted shared message per gadget
/// (taps 1.. minus `m_l - 1` copies of tap 0) and inverts the scaled pair.
pub fn n3_nonlinear(m1: u64, m2: u64) -> Result<Code> {
    let fam = PermutationFamily::digit_family(m1, m2)?;
    let size = fam.carrier();
    checked_table_len(size, 2)?;
    let rz_len = checked_table_len(size, 2)?;

    let mut code = Code::new(CodeParams::scalar(Alphabet::ring(size)));
    for (l, block_size) in [(1u64, m1), (2, m2)] {
        let suffix = format!("^({l})");
        let xs: Vec<String> = (1..=block_size).map(|i| format!("x_{i}{suffix}")).collect();
        permuted_block(&mut code, size, &fam.perms()[(l - 1) as usize], &suffix, &xs);
    }

    let stages: Vec<Stage> = [(1u64, m1), (2, m2)]
        .into_iter()
        .map(|(l, block_size)| {
            let suffix = format!("^({l})");
            let one_minus = (size + 1 - block_size % size) % size;
            let mut terms = vec![(InputRef::edge(port(0, &suffix, "R_z")), one_minus)];
            for i in 1..=block_size {
                terms.push((InputRef::edge(port(i, &suffix, "R_z")), 1));
            }
            Stage { terms }
        })
        .collect();
    let table: Vec<u64> = (0..rz_len as u64)
        .map(|ix| fam.invert(&mixed_radix_decompose(&[size, size], ix)).unwrap_or(0))
        .collect();
    code.add_decoder("R_z", "z", EdgeFunction::Staged(StagedForm { stages, table }));
    Ok(code)
}
