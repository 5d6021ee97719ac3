//! Network specifications: nodes, messages, edges, demands and role labels,
//! with structural validation and stable JSON export.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of a node in the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Source,
    Intermediate,
    Receiver,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
}

/// A message generated at a source node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub id: String,
    pub source: String,
}

/// A directed edge; parallel edges are allowed, so edges carry their own ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
}

/// A receiver's demand for one message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demand {
    pub receiver: String,
    pub message: String,
}

/// A directed acyclic multigraph with sources, receivers, demands and a map
/// from semantic role names to node, edge or message ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub nodes: Vec<Node>,
    pub messages: Vec<Message>,
    pub edges: Vec<Edge>,
    pub demands: Vec<Demand>,
    pub labels: BTreeMap<String, String>,
}

/// Index structures over a validated network.
pub struct NetworkIndex {
    /// Node positions in one fixed topological order.
    pub topo_order: Vec<usize>,
    pub node_index: BTreeMap<String, usize>,
    pub edge_index: BTreeMap<String, usize>,
    pub message_index: BTreeMap<String, usize>,
    /// In-edge indices per node, in edge declaration order.
    pub in_edges: Vec<Vec<usize>>,
    /// Out-edge indices per node, in edge declaration order.
    pub out_edges: Vec<Vec<usize>>,
    /// The single message generated by each source node.
    pub source_message: BTreeMap<usize, usize>,
}

/// Check structural well-formedness and return index structures: ids must be
/// unique, edges must join existing nodes, sources have no in-edges and
/// generate exactly one message each, receivers have no out-edges, demands
/// and labels must reference existing ids, and the graph must be acyclic.
pub fn validate_network(net: &NetworkSpec) -> Result<NetworkIndex> {
    let mut node_index = BTreeMap::new();
    for (i, node) in net.nodes.iter().enumerate() {
        if node_index.insert(node.id.clone(), i).is_some() {
            return Err(Error::Validation(format!("duplicate node id {:?}", node.id)));
        }
    }
    let mut message_index = BTreeMap::new();
    for (i, msg) in net.messages.iter().enumerate() {
        if message_index.insert(msg.id.clone(), i).is_some() {
            return Err(Error::Validation(format!("duplicate message id {:?}", msg.id)));
        }
    }
    let mut edge_index = BTreeMap::new();
    for (i, edge) in net.edges.iter().enumerate() {
        if edge_index.insert(edge.id.clone(), i).is_some() {
            return Err(Error::Validation(format!("duplicate edge id {:?}", edge.id)));
        }
    }

    let mut source_message: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, msg) in net.messages.iter().enumerate() {
        let Some(&s) = node_index.get(&msg.source) else {
            return Err(Error::Validation(format!(
                "message {:?} names unknown source {:?}",
                msg.id, msg.source
            )));
        };
        if net.nodes[s].kind != NodeKind::Source {
            return Err(Error::Validation(format!(
                "message {:?} is generated at non-source node {:?}",
                msg.id, msg.source
            )));
        }
        if source_message.insert(s, i).is_some() {
            return Err(Error::Validation(format!(
                "source {:?} generates more than one message",
                msg.source
            )));
        }
    }
    for (i, node) in net.nodes.iter().enumerate() {
        if node.kind == NodeKind::Source && !source_message.contains_key(&i) {
            return Err(Error::Validation(format!(
                "source {:?} generates no message",
                node.id
            )));
        }
    }

    let mut in_edges = vec![Vec::new(); net.nodes.len()];
    let mut out_edges = vec![Vec::new(); net.nodes.len()];
    for (i, edge) in net.edges.iter().enumerate() {
        let Some(&t) = node_index.get(&edge.tail) else {
            return Err(Error::Validation(format!(
                "edge {:?} has unknown tail {:?}",
                edge.id, edge.tail
            )));
        };
        let Some(&h) = node_index.get(&edge.head) else {
            return Err(Error::Validation(format!(
                "edge {:?} has unknown head {:?}",
                edge.id, edge.head
            )));
        };
        if net.nodes[t].kind == NodeKind::Receiver {
            return Err(Error::Validation(format!(
                "edge {:?} leaves receiver {:?}",
                edge.id, edge.tail
            )));
        }
        if net.nodes[h].kind == NodeKind::Source {
            return Err(Error::Validation(format!(
                "edge {:?} enters source {:?}",
                edge.id, edge.head
            )));
        }
        out_edges[t].push(i);
        in_edges[h].push(i);
    }

    let mut seen_demands = BTreeSet::new();
    for d in &net.demands {
        let Some(&r) = node_index.get(&d.receiver) else {
            return Err(Error::Validation(format!("demand at unknown node {:?}", d.receiver)));
        };
        if net.nodes[r].kind != NodeKind::Receiver {
            return Err(Error::Validation(format!(
                "demand at non-receiver node {:?}",
                d.receiver
            )));
        }
        if !message_index.contains_key(&d.message) {
            return Err(Error::Validation(format!(
                "demand for unknown message {:?}",
                d.message
            )));
        }
        if !seen_demands.insert((d.receiver.clone(), d.message.clone())) {
            return Err(Error::Validation(format!(
                "duplicate demand ({:?}, {:?})",
                d.receiver, d.message
            )));
        }
    }

    for (role, id) in &net.labels {
        if !node_index.contains_key(id) && !edge_index.contains_key(id)
            && !message_index.contains_key(id)
        {
            return Err(Error::Validation(format!(
                "label {role:?} points at unknown id {id:?}"
            )));
        }
    }

    // Kahn's algorithm; a leftover node means a directed cycle.
    let mut degree: Vec<usize> = in_edges.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..net.nodes.len()).filter(|&i| degree[i] == 0).collect();
    let mut topo_order = Vec::with_capacity(net.nodes.len());
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        topo_order.push(v);
        for &e in &out_edges[v] {
            let h = node_index[&net.edges[e].head];
            degree[h] -= 1;
            if degree[h] == 0 {
                queue.push(h);
            }
        }
    }
    if topo_order.len() != net.nodes.len() {
        return Err(Error::Validation("network contains a directed cycle".into()));
    }

    Ok(NetworkIndex {
        topo_order,
        node_index,
        edge_index,
        message_index,
        in_edges,
        out_edges,
        source_message,
    })
}

/// Serialize a network with stable key order; loading the output and
/// serializing again reproduces the bytes exactly.
pub fn network_to_json(net: &NetworkSpec) -> Result<String> {
    let mut s = serde_json::to_string_pretty(net)?;
    s.push('\n');
    Ok(s)
}

/// Parse a network from JSON produced by [`network_to_json`].
pub fn network_from_json(json: &str) -> Result<NetworkSpec> {
    Ok(serde_json::from_str(json)?)
}
