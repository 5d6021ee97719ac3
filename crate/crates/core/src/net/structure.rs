//! Recovery of the repeated building-block layout from a network's labels.
//!
//! The generated families are unions of a single gadget: a bank of encoder
//! nodes that each see all but one input message, one encoder that sees all
//! of them, a bottleneck edge out of each encoder, and one receiver per input
//! that observes its own bottleneck plus the all-inputs bottleneck. Labels
//! name the bottleneck edges `e_0 .. e_m` and `e`, with a `^(l)` suffix when
//! several gadgets coexist. Everything else (which message is input `i`,
//! which receiver belongs to position `i`) is derived from the graph, not
//! from id spelling, so searches keep working on renamed messages.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::net::network::{validate_network, NetworkIndex, NetworkSpec, NodeKind};

/// What a relay or port edge carries, in terms of gadget symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarriedSymbol {
    /// The all-but-one bottleneck `e_i` of gadget `block`.
    Partial { block: usize, position: usize },
    /// The all-inputs bottleneck `e` of gadget `block`.
    Full { block: usize },
}

/// One gadget instance.
#[derive(Clone, Debug)]
pub struct BlockInfo {
    /// Label suffix distinguishing this gadget (empty for a lone gadget,
    /// otherwise `^(1)`, `^(2)`, ...).
    pub suffix: String,
    /// Message ids by input position 0..=m.
    pub inputs: Vec<String>,
    /// Edge ids of the all-but-one bottlenecks, position order.
    pub partial_edges: Vec<String>,
    /// Edge id of the all-inputs bottleneck.
    pub full_edge: String,
    /// Receiver ids by input position (receiver `i` demands input `i`).
    pub receivers: Vec<String>,
}

/// The block decomposition of a network.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    /// Gadgets in suffix order.
    pub blocks: Vec<BlockInfo>,
    /// Receivers outside any gadget, with their demanded messages.
    pub extra_receivers: Vec<(String, Vec<String>)>,
    /// What each relay/port edge carries (edges out of bottleneck heads).
    pub carriers: BTreeMap<String, CarriedSymbol>,
}

impl BlockStructure {
    /// Input position of `message` within block `block`, if it is one.
    pub fn input_position(&self, block: usize, message: &str) -> Option<usize> {
        self.blocks[block].inputs.iter().position(|m| m == message)
    }
}

/// Parse a bottleneck label key: `e`, `e_3`, `e^(2)`, `e_3^(2)`.
/// Returns (position or None for the all-inputs edge, suffix).
fn parse_bottleneck_key(key: &str) -> Option<(Option<usize>, String)> {
    if key.contains('/') {
        // Prefixed labels come from unions; block search operates on the
        // un-merged family networks.
        return None;
    }
    let rest = key.strip_prefix('e')?;
    let (pos_part, suffix) = match rest.find("^(") {
        Some(at) => {
            let suffix = &rest[at..];
            if !suffix.ends_with(')') || suffix.len() < 4 {
                return None;
            }
            // The parenthesized part must be a number.
            suffix[2..suffix.len() - 1].parse::<usize>().ok()?;
            (&rest[..at], suffix.to_string())
        }
        None => (rest, String::new()),
    };
    if pos_part.is_empty() {
        return Some((None, suffix));
    }
    let pos = pos_part.strip_prefix('_')?.parse::<usize>().ok()?;
    Some((Some(pos), suffix))
}

/// Messages fed into `node` by direct edges from their source nodes.
fn fed_messages(net: &NetworkSpec, index: &NetworkIndex, node: usize) -> BTreeSet<usize> {
    let mut msgs = BTreeSet::new();
    for &e in &index.in_edges[node] {
        let tail = index.node_index[&net.edges[e].tail];
        if let Some(&m) = index.source_message.get(&tail) {
            msgs.insert(m);
        }
    }
    msgs
}

/// Discover the gadget decomposition of `net` from its labels and topology.
///
/// Fails with a precondition error when the labels do not describe complete
/// gadgets (missing positions, ambiguous receivers, or inputs that cannot be
/// attributed). Networks produced by merging keep their original label keys
/// under a prefix and are rejected here; run structure discovery on the
/// individual parts instead.
pub fn block_structure(net: &NetworkSpec) -> Result<BlockStructure> {
    let index = validate_network(net)?;

    // Group bottleneck labels by suffix.
    let mut by_suffix: BTreeMap<String, (BTreeMap<usize, String>, Option<String>)> =
        BTreeMap::new();
    for (key, edge_id) in &net.labels {
        if let Some((pos, suffix)) = parse_bottleneck_key(key) {
            if !index.edge_index.contains_key(edge_id) {
                continue; // label names a node or message; not a bottleneck
            }
            let entry = by_suffix.entry(suffix).or_default();
            match pos {
                Some(p) => {
                    if entry.0.insert(p, edge_id.clone()).is_some() {
                        return Err(Error::Precondition(format!(
                            "two labels claim bottleneck position {p} in the same gadget"
                        )));
                    }
                }
                None => {
                    if entry.1.replace(edge_id.clone()).is_some() {
                        return Err(Error::Precondition(
                            "two labels claim the all-inputs bottleneck of the same gadget".into(),
                        ));
                    }
                }
            }
        }
    }
    if by_suffix.is_empty() {
        return Err(Error::Precondition(
            "no gadget labels found; block search needs `e_i`/`e` edge labels".into(),
        ));
    }
    // Suffix order: lone gadget first, then ^(1), ^(2), ... numerically.
    let mut suffixes: Vec<String> = by_suffix.keys().cloned().collect();
    suffixes.sort_by_key(|s| {
        if s.is_empty() { 0usize } else { s[2..s.len() - 1].parse::<usize>().unwrap_or(usize::MAX) }
    });

    let mut blocks = Vec::new();
    let mut carriers = BTreeMap::new();
    let mut block_receivers: BTreeSet<usize> = BTreeSet::new();

    for (block_no, suffix) in suffixes.iter().enumerate() {
        let (partials, full) = &by_suffix[suffix];
        let full_edge = full.clone().ok_or_else(|| {
            Error::Precondition(format!(
                "gadget `{suffix}` is missing its all-inputs bottleneck label"
            ))
        })?;
        let m_plus_1 = partials.len();
        if m_plus_1 < 2 {
            return Err(Error::Precondition(format!(
                "gadget `{suffix}` needs at least two bottleneck positions, found {m_plus_1}"
            )));
        }
        let mut partial_edges = Vec::with_capacity(m_plus_1);
        for p in 0..m_plus_1 {
            let id = partials.get(&p).ok_or_else(|| {
                Error::Precondition(format!(
                    "gadget `{suffix}` bottleneck positions are not contiguous: missing {p}"
                ))
            })?;
            partial_edges.push(id.clone());
        }

        // Inputs: the all-inputs encoder sees everything; encoder i sees all
        // but input i.
        let full_tail = index.node_index[&net.edges[index.edge_index[&full_edge]].tail];
        let all_inputs = fed_messages(net, &index, full_tail);
        if all_inputs.len() != m_plus_1 {
            return Err(Error::Precondition(format!(
                "gadget `{suffix}`: the all-inputs encoder sees {} messages but there are {} \
                 bottleneck positions",
                all_inputs.len(),
                m_plus_1
            )));
        }
        let mut inputs = Vec::with_capacity(m_plus_1);
        for (p, edge_id) in partial_edges.iter().enumerate() {
            let tail = index.node_index[&net.edges[index.edge_index[edge_id]].tail];
            let seen = fed_messages(net, &index, tail);
            let missing: Vec<usize> = all_inputs.difference(&seen).copied().collect();
            if missing.len() != 1 || !seen.is_subset(&all_inputs) {
                return Err(Error::Precondition(format!(
                    "gadget `{suffix}` position {p}: encoder does not see exactly all-but-one of \
                     the gadget inputs"
                )));
            }
            inputs.push(net.messages[missing[0]].id.clone());
        }

        // Carriers: edges leaving a bottleneck head relay that bottleneck.
        let full_head = index.node_index[&net.edges[index.edge_index[&full_edge]].head];
        for &e in &index.out_edges[full_head] {
            carriers.insert(net.edges[e].id.clone(), CarriedSymbol::Full { block: block_no });
        }
        let mut partial_heads = Vec::with_capacity(m_plus_1);
        for (p, edge_id) in partial_edges.iter().enumerate() {
            let head = index.node_index[&net.edges[index.edge_index[edge_id]].head];
            partial_heads.push(head);
            for &e in &index.out_edges[head] {
                carriers.insert(
                    net.edges[e].id.clone(),
                    CarriedSymbol::Partial { block: block_no, position: p },
                );
            }
        }

        // Receivers: for each position, the unique receiver seeing exactly
        // {head(e_p), head(e)}.
        let mut receivers = Vec::with_capacity(m_plus_1);
        for (p, &ph) in partial_heads.iter().enumerate() {
            let mut found: Option<usize> = None;
            for (node_ix, node) in net.nodes.iter().enumerate() {
                if node.kind != NodeKind::Receiver {
                    continue;
                }
                let tails: BTreeSet<usize> = index.in_edges[node_ix]
                    .iter()
                    .map(|&e| index.node_index[&net.edges[e].tail])
                    .collect();
                if tails.len() == 2 && tails.contains(&ph) && tails.contains(&full_head) {
                    if found.replace(node_ix).is_some() {
                        return Err(Error::Precondition(format!(
                            "gadget `{suffix}` position {p}: receiver is ambiguous"
                        )));
                    }
                }
            }
            let node_ix = found.ok_or_else(|| {
                Error::Precondition(format!(
                    "gadget `{suffix}` position {p}: no receiver observes this bottleneck pair"
                ))
            })?;
            // Positional receivers must demand exactly their own input.
            let demanded: Vec<&String> = net
                .demands
                .iter()
                .filter(|d| d.receiver == net.nodes[node_ix].id)
                .map(|d| &d.message)
                .collect();
            if demanded.len() != 1 || *demanded[0] != inputs[p] {
                return Err(Error::Precondition(format!(
                    "gadget `{suffix}` position {p}: receiver `{}` does not demand exactly its \
                     own input",
                    net.nodes[node_ix].id
                )));
            }
            block_receivers.insert(node_ix);
            receivers.push(net.nodes[node_ix].id.clone());
        }

        blocks.push(BlockInfo {
            suffix: suffix.clone(),
            inputs,
            partial_edges,
            full_edge,
            receivers,
        });
    }

    // Everything else that demands a message is an extra receiver.
    let mut extra_receivers = Vec::new();
    for (node_ix, node) in net.nodes.iter().enumerate() {
        if node.kind != NodeKind::Receiver || block_receivers.contains(&node_ix) {
            continue;
        }
        let demanded: Vec<String> = net
            .demands
            .iter()
            .filter(|d| d.receiver == node.id)
            .map(|d| d.message.clone())
            .collect();
        extra_receivers.push((node.id.clone(), demanded));
    }

    Ok(BlockStructure { blocks, extra_receivers, carriers })
}
