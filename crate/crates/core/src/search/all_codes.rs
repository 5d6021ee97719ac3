//! Exhaustive enumeration of every scalar code on a tiny network.
//!
//! Every edge out of a combining node (an intermediate node with two or more
//! in-edges) gets a free lookup table over its node's in-edge values; all
//! other edges are forced copies. The search walks the full product space of
//! those tables in lexicographic order (tables concatenated in edge
//! declaration order, first cell most significant) and keeps exactly the
//! candidates whose receivers can all decode their demands, attaching the
//! canonical table decoders read off the observation maps.
//!
//! This is the independent oracle the structured search is validated
//! against: it assumes nothing about the shape of the functions.

use crate::algebra::Alphabet;
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams, EdgeFunction, InputRef, LookupTable};
use crate::net::network::{validate_network, NetworkSpec, NodeKind};
use crate::search::outcome::SearchOptions;
use crate::search::scan_collect;

/// Outcome of the all-codes enumeration.
#[derive(Clone, Debug)]
pub enum EnumerationOutcome {
    /// The whole function space was scanned; `codes` are all solutions in
    /// candidate order.
    Complete { codes: Vec<Code>, space: u128 },
    /// The function space exceeds the cap; nothing was scanned.
    Capped { space: u128, cap: u64 },
}

/// How one edge's value is computed during the sweep.
enum Op {
    /// Copy a source's message value.
    CopySource(usize),
    /// Copy another edge's value.
    CopyEdge(usize),
    /// Look up the candidate table at `offset` with the given input edges
    /// (declared order, first most significant).
    Table { offset: usize, inputs: Vec<usize> },
}

/// Enumerate every scalar code over `size` symbols and return the solutions.
pub fn enumerate_all_codes(
    net: &NetworkSpec,
    size: u64,
    opts: &SearchOptions,
) -> Result<EnumerationOutcome> {
    if size < 2 {
        return Err(Error::Precondition("the alphabet needs at least two symbols".into()));
    }
    let index = validate_network(net)?;

    // Free-table edges in declaration order, with their cell offsets.
    let mut table_edges: Vec<(usize, usize)> = Vec::new(); // (edge, offset)
    let mut total_cells: usize = 0;
    for (e, edge) in net.edges.iter().enumerate() {
        let tail = index.node_index[&edge.tail];
        if net.nodes[tail].kind == NodeKind::Intermediate && index.in_edges[tail].len() >= 2 {
            let deg = index.in_edges[tail].len() as u32;
            let cells = (size as u128).checked_pow(deg).unwrap_or(u128::MAX);
            if cells > (1 << 24) {
                return Ok(EnumerationOutcome::Capped { space: u128::MAX, cap: opts.cap });
            }
            table_edges.push((e, total_cells));
            total_cells += cells as usize;
        }
    }
    let space: u128 = if total_cells >= 128 {
        u128::MAX
    } else {
        (0..total_cells).fold(1u128, |acc, _| acc.saturating_mul(size as u128))
    };
    if space > opts.cap as u128 {
        return Ok(EnumerationOutcome::Capped { space, cap: opts.cap });
    }

    // Evaluation plan in topological edge order.
    let mut rank = vec![0usize; net.nodes.len()];
    for (pos, &v) in index.topo_order.iter().enumerate() {
        rank[v] = pos;
    }
    let mut edge_order: Vec<usize> = (0..net.edges.len()).collect();
    edge_order.sort_by_key(|&e| (rank[index.node_index[&net.edges[e].tail]], e));
    let offset_of: std::collections::BTreeMap<usize, usize> = table_edges.iter().copied().collect();
    let mut plan: Vec<(usize, Op)> = Vec::with_capacity(net.edges.len());
    for &e in &edge_order {
        let tail = index.node_index[&net.edges[e].tail];
        let op = if let Some(&offset) = offset_of.get(&e) {
            Op::Table { offset, inputs: index.in_edges[tail].clone() }
        } else if net.nodes[tail].kind == NodeKind::Source {
            Op::CopySource(index.source_message[&tail])
        } else if index.in_edges[tail].len() == 1 {
            Op::CopyEdge(index.in_edges[tail][0])
        } else {
            return Err(Error::Precondition(format!(
                "edge {:?} leaves a node with no in-edges",
                net.edges[e].id
            )));
        };
        plan.push((e, op));
    }

    // Assignments sweep messages in ascending id order, first most
    // significant — the same canonical order the verifier uses.
    let msg_slots: Vec<usize> = index.message_index.values().copied().collect();
    let mut assignments: u64 = 1;
    for _ in 0..msg_slots.len() {
        assignments = assignments
            .checked_mul(size)
            .ok_or_else(|| Error::Precondition("assignment space does not fit in 64 bits".into()))?;
    }

    // Demands in canonical decoder order.
    let mut demands: Vec<(String, String)> =
        net.demands.iter().map(|d| (d.receiver.clone(), d.message.clone())).collect();
    demands.sort();
    let mut demand_plans: Vec<(Vec<usize>, usize, usize)> = Vec::new(); // in-edges, msg, obs size
    for (receiver, message) in &demands {
        let node = index.node_index[receiver];
        let in_edges = index.in_edges[node].clone();
        let obs = (size as u128).pow(in_edges.len() as u32);
        if obs > (1 << 24) {
            return Err(Error::Precondition(format!(
                "receiver {receiver:?} has too many observations to tabulate"
            )));
        }
        demand_plans.push((in_edges, index.message_index[message], obs as usize));
    }

    struct Scratch {
        cells: Vec<u64>,
        edge_vals: Vec<u64>,
        msg_vals: Vec<u64>,
        maps: Vec<Vec<i64>>,
    }
    let make_scratch = || Scratch {
        cells: vec![0u64; total_cells],
        edge_vals: vec![0u64; net.edges.len()],
        msg_vals: vec![0u64; net.messages.len()],
        maps: demand_plans.iter().map(|(_, _, obs)| vec![-1i64; *obs]).collect(),
    };
    let accepts = |t: u64, s: &mut Scratch| -> bool {
        let mut rest = t;
        for pos in (0..total_cells).rev() {
            s.cells[pos] = rest % size;
            rest /= size;
        }
        for map in &mut s.maps {
            map.fill(-1);
        }
        for a in 0..assignments {
            let mut rest = a;
            for &slot in msg_slots.iter().rev() {
                s.msg_vals[slot] = rest % size;
                rest /= size;
            }
            for (e, op) in &plan {
                s.edge_vals[*e] = match op {
                    Op::CopySource(m) => s.msg_vals[*m],
                    Op::CopyEdge(src) => s.edge_vals[*src],
                    Op::Table { offset, inputs } => {
                        let mut ix = 0u64;
                        for &input in inputs {
                            ix = ix * size + s.edge_vals[input];
                        }
                        s.cells[offset + ix as usize]
                    }
                };
            }
            for ((in_edges, msg, _), map) in demand_plans.iter().zip(&mut s.maps) {
                let mut obs = 0u64;
                for &e in in_edges {
                    obs = obs * size + s.edge_vals[e];
                }
                let want = s.msg_vals[*msg] as i64;
                let cell = &mut map[obs as usize];
                if *cell < 0 {
                    *cell = want;
                } else if *cell != want {
                    return false;
                }
            }
        }
        true
    };

    let hits = scan_collect(space as u64, opts.workers, make_scratch, |t, s| accepts(t, s));

    // Materialize each hit as a code with canonical table decoders.
    let mut codes = Vec::with_capacity(hits.len());
    let mut scratch = make_scratch();
    for t in hits {
        let accepted = accepts(t, &mut scratch);
        debug_assert!(accepted, "hit must re-accept during materialization");
        let mut code = Code::new(CodeParams::scalar(Alphabet::set(size)));
        for &(e, offset) in &table_edges {
            let tail = index.node_index[&net.edges[e].tail];
            let deg = index.in_edges[tail].len();
            let cells = (size as u64).pow(deg as u32) as usize;
            let inputs: Vec<InputRef> = index.in_edges[tail]
                .iter()
                .map(|&f| InputRef::edge(net.edges[f].id.clone()))
                .collect();
            code.set_edge_function(
                net.edges[e].id.clone(),
                EdgeFunction::Table(LookupTable {
                    inputs,
                    table: scratch.cells[offset..offset + cells].to_vec(),
                }),
            );
        }
        for (((in_edges, _, _), (receiver, message)), map) in
            demand_plans.iter().zip(&demands).zip(&scratch.maps)
        {
            let inputs: Vec<InputRef> = in_edges
                .iter()
                .map(|&f| InputRef::edge(net.edges[f].id.clone()))
                .collect();
            let table: Vec<u64> = map.iter().map(|&v| v.max(0) as u64).collect();
            code.add_decoder(
                receiver.clone(),
                message.clone(),
                EdgeFunction::Table(LookupTable { inputs, table }),
            );
        }
        codes.push(code);
    }
    Ok(EnumerationOutcome::Complete { codes, space })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::families::build_n0;
    use crate::net::verify::{verify_exhaustive, VerifyOptions};

    #[test]
    fn capped_at_three_symbols_on_the_base_gadget() {
        let net = build_n0(2).unwrap();
        match enumerate_all_codes(&net, 3, &SearchOptions::default()).unwrap() {
            EnumerationOutcome::Capped { space, cap } => {
                assert!(space > cap as u128);
            }
            EnumerationOutcome::Complete { .. } => panic!("3^54 candidates cannot be complete"),
        }
    }

    #[test]
    fn every_enumerated_code_verifies() {
        // In the two-input gadget only the all-inputs encoder combines, so
        // the space is the sixteen binary tables on two bits, and exactly
        // the two Latin squares survive: both receivers must invert their
        // missing input through the shared bottleneck.
        let net = build_n0(1).unwrap();
        match enumerate_all_codes(&net, 2, &SearchOptions::default()).unwrap() {
            EnumerationOutcome::Complete { codes, space } => {
                assert_eq!(space, 16);
                assert_eq!(codes.len(), 2);
                for code in &codes {
                    let verdict = verify_exhaustive(&net, code, &VerifyOptions::default()).unwrap();
                    assert!(verdict.is_solution());
                }
            }
            EnumerationOutcome::Capped { .. } => panic!("tiny space must complete"),
        }
    }
}
