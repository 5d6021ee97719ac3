//! Disjoint union of networks: side-by-side composition with no shared nodes,
//! messages, or edges. Part `i` has every id prefixed with `c{i}/`, label
//! keys included, so unions of unions stay collision-free.

use crate::error::{Error, Result};
use crate::net::network::{validate_network, NetworkSpec};

/// Prefix applied to ids of part `i`.
pub fn part_prefix(i: usize) -> String {
    format!("c{i}/")
}

/// Merge `parts` into one network with prefixed, disjoint namespaces.
///
/// Each part must be valid on its own; the result is valid by construction
/// but is validated again before being returned.
pub fn disjoint_union(parts: &[NetworkSpec]) -> Result<NetworkSpec> {
    if parts.is_empty() {
        return Err(Error::Precondition("a union needs at least one part".into()));
    }
    let mut merged = NetworkSpec::default();
    for (i, part) in parts.iter().enumerate() {
        validate_network(part)?;
        let prefix = part_prefix(i);
        for node in &part.nodes {
            let mut node = node.clone();
            node.id = format!("{prefix}{}", node.id);
            merged.nodes.push(node);
        }
        for msg in &part.messages {
            let mut msg = msg.clone();
            msg.id = format!("{prefix}{}", msg.id);
            msg.source = format!("{prefix}{}", msg.source);
            merged.messages.push(msg);
        }
        for edge in &part.edges {
            let mut edge = edge.clone();
            edge.id = format!("{prefix}{}", edge.id);
            edge.tail = format!("{prefix}{}", edge.tail);
            edge.head = format!("{prefix}{}", edge.head);
            merged.edges.push(edge);
        }
        for demand in &part.demands {
            let mut demand = demand.clone();
            demand.receiver = format!("{prefix}{}", demand.receiver);
            demand.message = format!("{prefix}{}", demand.message);
            merged.demands.push(demand);
        }
        for (key, value) in &part.labels {
            merged.labels.insert(format!("{prefix}{key}"), format!("{prefix}{value}"));
        }
    }
    validate_network(&merged)?;
    Ok(merged)
}
