//! Network builders: structural invariants, node-count formulas, labels,
//! disjoint unions, composite-alphabet component lists, and the JSON and DOT
//! exports.

use ncnet_core::build::counts::{node_count, node_count_breakdown};
use ncnet_core::build::families::{build_n0, build_n1, build_n2, build_n3};
use ncnet_core::build::n4::{build_n4, n4_components, Component};
use ncnet_core::net::dot::dot_export;
use ncnet_core::net::network::{network_from_json, network_to_json, validate_network, NodeKind};
use ncnet_core::net::union::disjoint_union;

#[test]
fn n0_node_count_matches_formula() {
    for m in 1u64..=12 {
        let net = build_n0(m).unwrap();
        validate_network(&net).unwrap();
        assert_eq!(net.nodes.len() as u64, 4 * m + 6, "m={m}");
        assert_eq!(node_count("n0", &[m]).unwrap(), 4 * m + 6);
    }
}

#[test]
fn n1_node_count_matches_formula() {
    for m in 1u64..=12 {
        let net = build_n1(m).unwrap();
        validate_network(&net).unwrap();
        assert_eq!(net.nodes.len() as u64, 4 * m + 7, "m={m}");
    }
    assert_eq!(node_count("n1", &[5]).unwrap(), 27);
    assert_eq!(build_n1(5).unwrap().nodes.len(), 27);
}

#[test]
fn n2_node_count_matches_formula() {
    for m in 1u64..=5 {
        for w in 1u64..=4 {
            let net = build_n2(m, w).unwrap();
            validate_network(&net).unwrap();
            assert_eq!(net.nodes.len() as u64, 4 * m * w + 9 * w + 2, "m={m} w={w}");
        }
    }
    assert_eq!(node_count("n2", &[25, 4]).unwrap(), 438);
    assert_eq!(build_n2(25, 4).unwrap().nodes.len(), 438);
}

#[test]
fn n3_node_count_matches_formula() {
    for m1 in 1u64..=5 {
        for m2 in 1u64..=5 {
            let net = build_n3(m1, m2).unwrap();
            validate_network(&net).unwrap();
            assert_eq!(net.nodes.len() as u64, 4 * m1 + 4 * m2 + 12, "m1={m1} m2={m2}");
        }
    }
    assert_eq!(node_count("n3", &[5, 80]).unwrap(), 352);
    assert_eq!(build_n3(5, 80).unwrap().nodes.len(), 352);
}

#[test]
fn n0_structure() {
    let net = build_n0(2).unwrap();
    // 3 sources, 3 messages, receivers R_0..R_2 demanding x_0..x_2.
    let sources: Vec<_> =
        net.nodes.iter().filter(|n| n.kind == NodeKind::Source).map(|n| n.id.clone()).collect();
    assert_eq!(sources, vec!["S_0", "S_1", "S_2"]);
    assert_eq!(net.messages.len(), 3);
    assert_eq!(net.demands.len(), 3);
    assert_eq!(net.labels.get("e_1").map(String::as_str), Some("e_1"));
    assert_eq!(net.labels.get("e").map(String::as_str), Some("e"));
    // Every receiver has exactly two in-edges (its own relay and the shared one).
    for d in &net.demands {
        let in_edges = net.edges.iter().filter(|e| e.head == d.receiver).count();
        assert_eq!(in_edges, 2, "receiver {}", d.receiver);
    }
}

#[test]
fn n1_strips_to_n0() {
    // Removing the extra receiver and its in-edges from the m-input variant
    // leaves a network identical to the base one.
    for m in [1u64, 2, 3, 5] {
        let n1 = build_n1(m).unwrap();
        let n0 = build_n0(m).unwrap();
        let mut stripped = n1.clone();
        stripped.nodes.retain(|n| n.id != "R_x");
        stripped.edges.retain(|e| e.head != "R_x");
        stripped.demands.retain(|d| d.receiver != "R_x");
        stripped.labels.retain(|_, v| v != "R_x");
        assert_eq!(stripped, n0, "m={m}");
    }
}

#[test]
fn n2_receiver_in_degrees() {
    let net = build_n2(4, 3).unwrap();
    // The shared receiver takes every output port except the 0th of each block.
    let rz_in = net.edges.iter().filter(|e| e.head == "R_z").count();
    assert_eq!(rz_in, 3 * 5);
    let demands: Vec<_> = net
        .demands
        .iter()
        .filter(|d| d.receiver == "R_z")
        .map(|d| d.message.clone())
        .collect();
    assert_eq!(demands, vec!["z"]);
    // Block receivers R_0^(l) demand the shared message.
    assert!(net.demands.iter().any(|d| d.receiver == "R_0^(2)" && d.message == "z"));
    assert!(net.demands.iter().any(|d| d.receiver == "R_3^(1)" && d.message == "x_3^(1)"));
    // Per-block labels carry the block suffix.
    assert_eq!(net.labels.get("e_2^(3)").map(String::as_str), Some("e_2^(3)"));
}

#[test]
fn n3_receiver_in_degrees() {
    let net = build_n3(2, 3).unwrap();
    // The shared receiver takes all output ports of both blocks.
    let rz_in = net.edges.iter().filter(|e| e.head == "R_z").count();
    assert_eq!(rz_in, 2 + 3 + 2);
    assert!(net.demands.iter().any(|d| d.receiver == "R_0^(1)" && d.message == "z"));
    assert!(net.demands.iter().any(|d| d.receiver == "R_2^(2)" && d.message == "x_2^(2)"));
}

#[test]
fn disjoint_union_prefixes_ids_and_labels() {
    let a = build_n1(2).unwrap();
    let b = build_n2(2, 1).unwrap();
    let u = disjoint_union(&[a.clone(), b.clone()]).unwrap();
    validate_network(&u).unwrap();
    assert_eq!(u.nodes.len(), a.nodes.len() + b.nodes.len());
    assert_eq!(u.edges.len(), a.edges.len() + b.edges.len());
    assert!(u.nodes.iter().any(|n| n.id == "c0/R_x"));
    assert!(u.nodes.iter().any(|n| n.id == "c1/R_z"));
    assert_eq!(u.labels.get("c0/e_0").map(String::as_str), Some("c0/e_0"));
    assert_eq!(u.labels.get("c1/z").map(String::as_str), Some("c1/z"));
    assert!(u.messages.iter().any(|m| m.id == "c0/x_0" && m.source == "c0/S_0"));
}

#[test]
fn n4_components_pinned_lists() {
    assert_eq!(
        n4_components(6).unwrap(),
        vec![Component::N2 { m: 2, w: 3 }, Component::N2 { m: 3, w: 2 }]
    );
    assert_eq!(
        n4_components(27).unwrap(),
        vec![
            Component::N1 { m: 2 },
            Component::N1 { m: 5 },
            Component::N1 { m: 7 },
            Component::N2 { m: 27, w: 1 },
            Component::N3 { m1: 3, m2: 9 },
        ]
    );
    assert_eq!(
        n4_components(100).unwrap(),
        vec![
            Component::N1 { m: 3 },
            Component::N1 { m: 7 },
            Component::N2 { m: 4, w: 25 },
            Component::N2 { m: 25, w: 4 },
            Component::N3 { m1: 2, m2: 50 },
            Component::N3 { m1: 5, m2: 80 },
        ]
    );
    // A prime has the single trivial component.
    assert_eq!(n4_components(7).unwrap(), vec![Component::N2 { m: 7, w: 1 }]);
}

#[test]
fn n4_node_totals_pinned() {
    for (m, total) in [(6u64, 97u64), (27, 256), (100, 1691)] {
        let net = build_n4(m).unwrap();
        validate_network(&net).unwrap();
        assert_eq!(net.nodes.len() as u64, total, "m={m}");
        assert_eq!(node_count("n4", &[m]).unwrap(), total);
        let breakdown = node_count_breakdown(m).unwrap();
        assert_eq!(breakdown.iter().map(|(_, n)| n).sum::<u64>(), total);
    }
    // Per-component splits.
    let b6 = node_count_breakdown(6).unwrap();
    assert_eq!(b6.iter().map(|(_, n)| *n).collect::<Vec<_>>(), vec![53, 44]);
    let b27 = node_count_breakdown(27).unwrap();
    assert_eq!(b27.iter().map(|(_, n)| *n).collect::<Vec<_>>(), vec![15, 27, 35, 119, 60]);
    let b100 = node_count_breakdown(100).unwrap();
    assert_eq!(
        b100.iter().map(|(_, n)| *n).collect::<Vec<_>>(),
        vec![19, 35, 627, 438, 220, 352]
    );
}

#[test]
fn n4_label_keys_carry_component_prefixes() {
    let net = build_n4(6).unwrap();
    assert!(net.labels.contains_key("c0/n2(2,3)/z"), "labels: {:?}", net.labels.keys().take(5));
    assert!(net.labels.contains_key("c1/n2(3,2)/e_1^(1)"));
}

#[test]
fn json_roundtrip_is_byte_identical() {
    for net in [build_n0(2).unwrap(), build_n1(3).unwrap(), build_n2(2, 2).unwrap(), build_n4(6).unwrap()] {
        let json = network_to_json(&net).unwrap();
        let back = network_from_json(&json).unwrap();
        assert_eq!(back, net);
        let again = network_to_json(&back).unwrap();
        assert_eq!(again, json);
    }
}

#[test]
fn validation_rejects_malformed_networks() {
    let mut net = build_n0(1).unwrap();
    net.edges[0].head = "nope".into();
    assert!(validate_network(&net).is_err());

    let mut net = build_n0(1).unwrap();
    // A cycle between two intermediate nodes.
    net.edges.push(ncnet_core::net::network::Edge {
        id: "back".into(),
        tail: "v".into(),
        head: "u".into(),
    });
    assert!(validate_network(&net).is_err());

    let mut net = build_n0(1).unwrap();
    net.demands.push(ncnet_core::net::network::Demand {
        receiver: "R_0".into(),
        message: "ghost".into(),
    });
    assert!(validate_network(&net).is_err());

    // Duplicate edge ids are rejected.
    let mut net = build_n0(1).unwrap();
    let dup = net.edges[0].clone();
    net.edges.push(dup);
    assert!(validate_network(&net).is_err());
}

#[test]
fn dot_export_shapes_and_labels() {
    let net = build_n1(2).unwrap();
    let dot = dot_export(&net);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"S_0\" [shape=box]"));
    assert!(dot.contains("\"R_x\" [shape=doublecircle]"));
    assert!(dot.contains("\"R_1\" [shape=doublecircle]"));
    // Intermediates are circles.
    assert!(dot.contains("\"u_0\" [shape=circle]"));
    // Labeled edges carry their role name.
    assert!(dot.contains("[label=\"e_0\"]"));
    // Every edge line appears.
    assert_eq!(dot.matches(" -> ").count(), net.edges.len());
}
