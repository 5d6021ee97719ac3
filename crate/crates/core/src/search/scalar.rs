//! Scalar linear search with a normalized encoder side.
//!
//! On a gadget network, pairing each positional receiver's two observations
//! forces any scalar linear solution into a rigid shape: every bottleneck of
//! a gadget carries a unit-weighted sum of the messages its encoder sees,
//! with one weight per message shared by all of that gadget's bottlenecks
//! (up to a per-edge unit factor that decoders absorb). Relabeling a message
//! by a unit then normalizes its weight to one at its first appearance, so
//! the only free encoder parameters left are the weights of repeat
//! appearances — messages feeding a second or later gadget. The search
//! enumerates exactly those unit tuples.
//!
//! For each encoder candidate every edge value is a known coefficient vector
//! over the messages, so decoders are searched symbolically: a coefficient
//! tuple over a receiver's in-edges works exactly when the combined vector
//! is the demanded message's basis vector. Decoder tuples are enumerated
//! exhaustively per demand (first in-edge most significant), which sidesteps
//! linear solving over a composite modulus.

use crate::algebra::alphabet::Alphabet;
use crate::codes::linear::ring_modulus;
use crate::codes::{scalar_edge_sum, scalar_message_sum};
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams};
use crate::net::network::{validate_network, NetworkSpec, NodeKind};
use crate::net::structure::{block_structure, BlockStructure};
use crate::search::outcome::{SearchOptions, SearchOutcome};
use crate::search::scan_first;

/// How one edge's symbolic coefficient vector is obtained.
enum EdgePlan {
    /// A gadget bottleneck whose function is part of the candidate:
    /// gadget index plus bottleneck position (`None` = the all-inputs one).
    Candidate { block: usize, position: Option<usize> },
    /// Direct copy of a source's message (basis vector).
    CopySource(usize),
    /// Copy of another edge's vector.
    CopyEdge(usize),
}

/// Search for a scalar linear solution over a ring or field alphabet.
///
/// The network must decompose into labeled gadgets (see
/// [`block_structure`]), and every combining node must be a gadget encoder —
/// anything else has no place in the normalized ansatz. Candidates are
/// enumerated lexicographically: repeat-appearance weights run over the
/// units in ascending order (the all-ones assignment first), and within a
/// candidate each demand's decoder coefficients run over all tuples in
/// ascending order. The first full solution wins.
pub fn search_scalar_linear(
    net: &NetworkSpec,
    alphabet: &Alphabet,
    opts: &SearchOptions,
) -> Result<SearchOutcome<Code>> {
    let modulus = ring_modulus(alphabet)?;
    if modulus < 2 {
        return Err(Error::Precondition("the alphabet needs at least two symbols".into()));
    }
    let structure = block_structure(net)?;
    let index = validate_network(net)?;
    let message_count = net.messages.len();

    // Map bottleneck edge ids to candidate slots.
    let mut slot_of = std::collections::BTreeMap::new();
    for (b, block) in structure.blocks.iter().enumerate() {
        for (p, id) in block.partial_edges.iter().enumerate() {
            slot_of.insert(id.clone(), (b, Some(p)));
        }
        slot_of.insert(block.full_edge.clone(), (b, None));
    }

    // Edge evaluation order and per-edge plan.
    let mut rank = vec![0usize; net.nodes.len()];
    for (pos, &v) in index.topo_order.iter().enumerate() {
        rank[v] = pos;
    }
    let mut edge_order: Vec<usize> = (0..net.edges.len()).collect();
    edge_order.sort_by_key(|&e| (rank[index.node_index[&net.edges[e].tail]], e));
    let mut plan: Vec<Option<EdgePlan>> = (0..net.edges.len()).map(|_| None).collect();
    for &e in &edge_order {
        let edge = &net.edges[e];
        let tail = index.node_index[&edge.tail];
        plan[e] = Some(if let Some(&(block, position)) = slot_of.get(&edge.id) {
            EdgePlan::Candidate { block, position }
        } else if net.nodes[tail].kind == NodeKind::Source {
            EdgePlan::CopySource(index.source_message[&tail])
        } else if index.in_edges[tail].len() == 1 {
            EdgePlan::CopyEdge(index.in_edges[tail][0])
        } else {
            return Err(Error::Precondition(format!(
                "edge {:?} leaves a combining node that is not a gadget encoder",
                edge.id
            )));
        });
    }

    // Free encoder weights: one unit per repeat appearance of a message.
    let mut seen = std::collections::BTreeSet::new();
    let mut repeats: Vec<(usize, usize)> = Vec::new();
    for (b, block) in structure.blocks.iter().enumerate() {
        for (p, msg) in block.inputs.iter().enumerate() {
            if !seen.insert(msg.clone()) {
                repeats.push((b, p));
            }
        }
    }
    let units = alphabet.units();
    let unit_count = units.len() as u64;
    let mut candidates: u128 = 1;
    for _ in 0..repeats.len() {
        candidates = candidates.saturating_mul(unit_count as u128);
    }

    // Demands in canonical decoder order, with their in-edges.
    let mut demands: Vec<(String, String)> =
        net.demands.iter().map(|d| (d.receiver.clone(), d.message.clone())).collect();
    demands.sort();
    let mut demand_plans = Vec::with_capacity(demands.len());
    let mut decoder_space_sum: u128 = 0;
    for (receiver, message) in &demands {
        let node = index.node_index[receiver];
        let in_edges = index.in_edges[node].clone();
        let mut space: u128 = 1;
        for _ in 0..in_edges.len() {
            space = space.saturating_mul(modulus as u128);
        }
        decoder_space_sum = decoder_space_sum.saturating_add(space);
        demand_plans.push((in_edges, index.message_index[message], space));
    }

    let space = candidates.saturating_mul(decoder_space_sum);
    if space > opts.cap as u128 {
        return Ok(SearchOutcome::Capped { space, cap: opts.cap });
    }

    let mut tested: u64 = 0;
    let mut weight_digits = vec![0usize; repeats.len()];
    for candidate in 0..candidates as u64 {
        // Decode the unit tuple, first repeat most significant.
        let mut rest = candidate;
        for pos in (0..repeats.len()).rev() {
            weight_digits[pos] = (rest % unit_count) as usize;
            rest /= unit_count;
        }

        // Per-gadget input weights: 1 everywhere except repeat appearances.
        let mut weights: Vec<Vec<u64>> =
            structure.blocks.iter().map(|b| vec![1u64; b.inputs.len()]).collect();
        for (r, &(b, p)) in repeats.iter().enumerate() {
            weights[b][p] = units[weight_digits[r]];
        }

        let edge_vecs = propagate(net, &structure, &index, &plan, &edge_order, &weights);

        // Search a decoder for every demand; give up on the first failure.
        let mut found_decoders: Vec<Vec<u64>> = Vec::with_capacity(demands.len());
        let mut all_found = true;
        for ((in_edges, target_msg, space_r), _) in demand_plans.iter().zip(&demands) {
            let vectors: Vec<&[u64]> = in_edges.iter().map(|&e| edge_vecs[e].as_slice()).collect();
            let deg = vectors.len();
            let total = *space_r as u64;
            let hit = scan_first(
                total,
                opts.workers,
                || vec![0u64; deg],
                |t, digits| {
                    let mut rest = t;
                    for pos in (0..deg).rev() {
                        digits[pos] = rest % modulus;
                        rest /= modulus;
                    }
                    combines_to_basis(&vectors, digits, *target_msg, message_count, modulus)
                },
            );
            match hit {
                Some(t) => {
                    tested += t + 1;
                    let mut digits = vec![0u64; deg];
                    let mut rest = t;
                    for pos in (0..deg).rev() {
                        digits[pos] = rest % modulus;
                        rest /= modulus;
                    }
                    found_decoders.push(digits);
                }
                None => {
                    tested += total;
                    all_found = false;
                    break;
                }
            }
        }
        if !all_found {
            continue;
        }

        // Assemble the winning code.
        let mut code = Code::new(CodeParams::scalar(alphabet.clone()));
        for (b, block) in structure.blocks.iter().enumerate() {
            for (p, edge_id) in block.partial_edges.iter().enumerate() {
                let terms: Vec<(String, u64)> = block
                    .inputs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != p)
                    .map(|(j, id)| (id.clone(), weights[b][j]))
                    .collect();
                code.set_edge_function(edge_id.clone(), scalar_message_sum(modulus, &terms));
            }
            let all: Vec<(String, u64)> = block
                .inputs
                .iter()
                .enumerate()
                .map(|(j, id)| (id.clone(), weights[b][j]))
                .collect();
            code.set_edge_function(block.full_edge.clone(), scalar_message_sum(modulus, &all));
        }
        for (((in_edges, _, _), (receiver, message)), coeffs) in
            demand_plans.iter().zip(&demands).zip(&found_decoders)
        {
            let terms: Vec<(String, u64)> = in_edges
                .iter()
                .zip(coeffs)
                .map(|(&e, &c)| (net.edges[e].id.clone(), c))
                .collect();
            code.add_decoder(receiver.clone(), message.clone(), scalar_edge_sum(modulus, &terms));
        }
        return Ok(SearchOutcome::Found { value: code, tested, space });
    }
    Ok(SearchOutcome::Exhausted { space })
}

/// Coefficient vector (over messages) of every edge under one candidate.
fn propagate(
    net: &NetworkSpec,
    structure: &BlockStructure,
    index: &crate::net::network::NetworkIndex,
    plan: &[Option<EdgePlan>],
    edge_order: &[usize],
    weights: &[Vec<u64>],
) -> Vec<Vec<u64>> {
    let message_count = net.messages.len();
    let mut vecs: Vec<Vec<u64>> = vec![Vec::new(); net.edges.len()];
    for &e in edge_order {
        let v = match plan[e].as_ref().expect("planned") {
            EdgePlan::Candidate { block, position } => {
                let info = &structure.blocks[*block];
                let mut v = vec![0u64; message_count];
                for (j, msg) in info.inputs.iter().enumerate() {
                    if *position != Some(j) {
                        v[index.message_index[msg]] = weights[*block][j];
                    }
                }
                v
            }
            EdgePlan::CopySource(m) => {
                let mut v = vec![0u64; message_count];
                v[*m] = 1;
                v
            }
            EdgePlan::CopyEdge(src) => vecs[*src].clone(),
        };
        vecs[e] = v;
    }
    vecs
}

/// Does `sum(digits[i] * vectors[i])` equal the basis vector of `target`?
fn combines_to_basis(
    vectors: &[&[u64]],
    digits: &[u64],
    target: usize,
    message_count: usize,
    modulus: u64,
) -> bool {
    for slot in 0..message_count {
        let mut acc: u128 = 0;
        for (v, &d) in vectors.iter().zip(digits) {
            acc += d as u128 * v[slot] as u128;
        }
        let want = u64::from(slot == target);
        if (acc % modulus as u128) as u64 != want {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::families::{build_n0, build_n1};

    #[test]
    fn base_family_searches_to_the_all_ones_code() {
        let net = build_n0(2).unwrap();
        let outcome =
            search_scalar_linear(&net, &Alphabet::ring(2), &SearchOptions::default()).unwrap();
        let code = outcome.found().expect("base family is solvable everywhere");
        // One gadget, no repeats: the single candidate is the all-ones code.
        let f = code.edge_functions.get("e").expect("all-inputs bottleneck");
        match f {
            crate::net::code::EdgeFunction::Linear(form) => {
                assert_eq!(form.message_terms.len(), 3);
            }
            other => panic!("expected a linear form, got {other:?}"),
        }
    }

    #[test]
    fn capped_before_scanning_when_space_is_large() {
        let net = build_n1(2).unwrap();
        let opts = SearchOptions { cap: 10, workers: 1 };
        let outcome = search_scalar_linear(&net, &Alphabet::ring(3), &opts).unwrap();
        assert!(matches!(outcome, SearchOutcome::Capped { .. }));
    }

    #[test]
    fn rejects_alphabets_without_ring_structure() {
        let net = build_n0(2).unwrap();
        let err = search_scalar_linear(&net, &Alphabet::set(4), &SearchOptions::default());
        assert!(err.is_err());
    }
}
