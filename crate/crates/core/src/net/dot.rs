//! Graphviz export. Sources render as boxes, receivers as double circles,
//! intermediates as circles; an edge carries a `label` attribute when some
//! role name maps to it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::net::network::{NetworkSpec, NodeKind};

/// Escape a string for use inside a double-quoted DOT id.
fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Render `net` as a Graphviz `digraph`.
pub fn dot_export(net: &NetworkSpec) -> String {
    // Reverse role map: id -> first role name that points at it.
    let mut role_of: BTreeMap<&str, &str> = BTreeMap::new();
    for (role, id) in &net.labels {
        role_of.entry(id.as_str()).or_insert(role.as_str());
    }

    let mut out = String::new();
    out.push_str("digraph network {\n");
    out.push_str("  rankdir=LR;\n");
    for node in &net.nodes {
        let shape = match node.kind {
            NodeKind::Source => "box",
            NodeKind::Intermediate => "circle",
            NodeKind::Receiver => "doublecircle",
        };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(&node.id));
    }
    for edge in &net.edges {
        match role_of.get(edge.id.as_str()) {
            Some(role) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(&edge.tail),
                    quote(&edge.head),
                    quote(role)
                );
            }
            None => {
                let _ = writeln!(out, "  {} -> {};", quote(&edge.tail), quote(&edge.head));
            }
        }
    }
    out.push_str("}\n");
    out
}
