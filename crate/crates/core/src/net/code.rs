//! Codes: per-edge functions and per-demand decoders over a shared alphabet.
//! Messages are length-k symbol vectors and edges carry length-n vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::alphabet::Alphabet;
use crate::algebra::matrix::RingMatrix;
use crate::error::Result;

/// Dimensions and carrier of a code: messages in `A^k`, edge symbols in `A^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub k: u64,
    pub n: u64,
    pub alphabet: Alphabet,
}

impl CodeParams {
    pub fn scalar(alphabet: Alphabet) -> Self {
        CodeParams { k: 1, n: 1, alphabet }
    }

    /// Rate of the code.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Reference to one input of a function: a message available at the node
/// computing the function, or one of the node's in-edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "from", rename_all = "snake_case")]
pub enum InputRef {
    Message { id: String },
    Edge { id: String },
}

impl InputRef {
    pub fn message(id: impl Into<String>) -> Self {
        InputRef::Message { id: id.into() }
    }

    pub fn edge(id: impl Into<String>) -> Self {
        InputRef::Edge { id: id.into() }
    }

    /// The same reference with its id rewritten through `f`.
    pub fn map_id(&self, f: &impl Fn(&str) -> String) -> InputRef {
        match self {
            InputRef::Message { id } => InputRef::Message { id: f(id) },
            InputRef::Edge { id } => InputRef::Edge { id: f(id) },
        }
    }
}

/// Sum of matrix actions on messages and in-edge vectors over Z_n: message
/// matrices act on k-vectors, edge matrices on n-vectors. Missing keys mean
/// zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct LinearForm {
    pub message_terms: BTreeMap<String, RingMatrix>,
    pub edge_terms: BTreeMap<String, RingMatrix>,
}

/// Arbitrary function of scalar inputs, tabulated. The table is indexed in
/// mixed radix by the input symbols, first input most significant, all digits
/// running over the full alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupTable {
    pub inputs: Vec<InputRef>,
    pub table: Vec<u64>,
}

/// One linear stage of a [`StagedForm`]: a Z_N combination of scalar inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub terms: Vec<(InputRef, u64)>,
}

/// Scalar function factored through linear stages: each stage sums its inputs
/// with coefficients mod N, then one table maps the stage-value tuple (mixed
/// radix, first stage most significant) to the output. Keeps functions of
/// many inputs representable when they only depend on a few modular sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedForm {
    pub stages: Vec<Stage>,
    pub table: Vec<u64>,
}

/// Componentwise function on a product alphabet: symbols split into one digit
/// per factor (mixed radix, first factor most significant) and each component
/// function acts on its factor's digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductForm {
    pub factors: Vec<Alphabet>,
    pub components: Vec<EdgeFunction>,
}

/// A function assigned to an edge or to a receiver's decoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeFunction {
    Linear(LinearForm),
    Table(LookupTable),
    Staged(StagedForm),
    Product(ProductForm),
}

impl EdgeFunction {
    /// Rewrite every message and edge id mentioned by the function through
    /// `f`, recursing into product components. Used when a code built for a
    /// standalone network is re-addressed into a disjoint union.
    pub fn map_ids(&self, f: &impl Fn(&str) -> String) -> EdgeFunction {
        match self {
            EdgeFunction::Linear(form) => EdgeFunction::Linear(LinearForm {
                message_terms: form.message_terms.iter().map(|(k, v)| (f(k), v.clone())).collect(),
                edge_terms: form.edge_terms.iter().map(|(k, v)| (f(k), v.clone())).collect(),
            }),
            EdgeFunction::Table(t) => EdgeFunction::Table(LookupTable {
                inputs: t.inputs.iter().map(|r| r.map_id(f)).collect(),
                table: t.table.clone(),
            }),
            EdgeFunction::Staged(s) => EdgeFunction::Staged(StagedForm {
                stages: s
                    .stages
                    .iter()
                    .map(|stage| Stage {
                        terms: stage.terms.iter().map(|(r, c)| (r.map_id(f), *c)).collect(),
                    })
                    .collect(),
                table: s.table.clone(),
            }),
            EdgeFunction::Product(p) => EdgeFunction::Product(ProductForm {
                factors: p.factors.clone(),
                components: p.components.iter().map(|c| c.map_ids(f)).collect(),
            }),
        }
    }
}

/// Decoder for one demand: a function of the receiver's in-edges producing
/// the demanded message vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoder {
    pub receiver: String,
    pub message: String,
    pub function: EdgeFunction,
}

/// A code for a network: functions for edges that need them (edges leaving a
/// source or a single-in-edge relay default to copying) plus one decoder per
/// demand. Decoders are kept sorted by (receiver, message).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    pub params: CodeParams,
    pub edge_functions: BTreeMap<String, EdgeFunction>,
    pub decoders: Vec<Decoder>,
}

impl Code {
    pub fn new(params: CodeParams) -> Self {
        Code { params, edge_functions: BTreeMap::new(), decoders: Vec::new() }
    }

    pub fn set_edge_function(&mut self, edge: impl Into<String>, f: EdgeFunction) {
        self.edge_functions.insert(edge.into(), f);
    }

    pub fn add_decoder(&mut self, receiver: impl Into<String>, message: impl Into<String>, f: EdgeFunction) {
        self.decoders.push(Decoder {
            receiver: receiver.into(),
            message: message.into(),
            function: f,
        });
        self.decoders.sort_by(|a, b| (&a.receiver, &a.message).cmp(&(&b.receiver, &b.message)));
    }

    pub fn decoder_for(&self, receiver: &str, message: &str) -> Option<&EdgeFunction> {
        self.decoders
            .iter()
            .find(|d| d.receiver == receiver && d.message == message)
            .map(|d| &d.function)
    }
}

/// Serialize a code with stable key order; loading the output and serializing
/// again reproduces the bytes exactly.
pub fn code_to_json(code: &Code) -> Result<String> {
    let mut s = serde_json::to_string_pretty(code)?;
    s.push('\n');
    Ok(s)
}

/// Parse a code from JSON produced by [`code_to_json`].
pub fn code_from_json(json: &str) -> Result<Code> {
    Ok(serde_json::from_str(json)?)
}
