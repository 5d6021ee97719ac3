//! Code evaluation: resolve every edge to a function (explicit or implicit
//! copy), check structural fit against the network, and evaluate assignments.

use std::collections::BTreeMap;

use crate::algebra::alphabet::Alphabet;
use crate::algebra::groups::{mixed_radix_compose, mixed_radix_decompose};
use crate::algebra::matrix::RingMatrix;
use crate::error::{Error, Result};
use crate::net::code::{Code, CodeParams, EdgeFunction, InputRef, LinearForm};
use crate::net::network::{validate_network, NetworkIndex, NetworkSpec, NodeKind};

#[derive(Clone, Copy)]
enum CompRef {
    Message(usize),
    Edge(usize),
}

enum CompiledFn {
    /// Copy a message vector onto an edge, zero-padding length k to length n.
    CopyMessage(usize),
    /// Copy the value of another edge.
    CopyEdge(usize),
    Linear {
        out_dim: usize,
        msg_terms: Vec<(usize, RingMatrix)>,
        edge_terms: Vec<(usize, RingMatrix)>,
    },
    Table {
        inputs: Vec<CompRef>,
        size: u64,
        table: Vec<u64>,
    },
    Staged {
        stages: Vec<Vec<(CompRef, u64)>>,
        modulus: u64,
        table: Vec<u64>,
    },
    Product {
        sizes: Vec<u64>,
        out_dim: usize,
        components: Vec<CompiledFn>,
    },
}

/// Per-thread evaluation buffers.
pub struct EvalScratch {
    edge_values: Vec<Vec<u64>>,
    out: Vec<u64>,
}

/// A code bound to a network, ready for repeated evaluation.
pub struct Evaluator {
    pub index: NetworkIndex,
    k: usize,
    n: usize,
    size: u64,
    edge_order: Vec<usize>,
    compiled: Vec<Option<CompiledFn>>,
    /// Decoders sorted by (receiver id, message id): node and message indices
    /// plus the compiled function.
    decoders: Vec<(usize, usize, CompiledFn)>,
    decoder_names: Vec<(String, String)>,
}

/// Result of decoding one demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedDemand {
    pub receiver: String,
    pub message: String,
    pub value: Vec<u64>,
    pub matches: bool,
}

/// Full evaluation output for one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationReport {
    pub edge_values: BTreeMap<String, Vec<u64>>,
    pub decoded: Vec<DecodedDemand>,
}

struct CompileCtx<'a> {
    net: &'a NetworkSpec,
    params: &'a CodeParams,
    /// Message indices addressable by the function.
    available_messages: Vec<usize>,
    /// Edge indices addressable by the function.
    available_edges: Vec<usize>,
}

impl Evaluator {
    pub fn new(net: &NetworkSpec, code: &Code) -> Result<Evaluator> {
        let index = validate_network(net)?;
        let params = &code.params;
        if params.k < 1 || params.n < 1 {
            return Err(Error::Validation("code dimensions must be positive".into()));
        }
        let size = params.alphabet.size();
        if size < 2 {
            return Err(Error::Validation("alphabet must have at least two symbols".into()));
        }

        for id in code.edge_functions.keys() {
            if !index.edge_index.contains_key(id) {
                return Err(Error::Validation(format!(
                    "code assigns a function to unknown edge {id:?}"
                )));
            }
        }

        // Topological rank of each node gives a valid edge evaluation order.
        let mut rank = vec![0usize; net.nodes.len()];
        for (pos, &v) in index.topo_order.iter().enumerate() {
            rank[v] = pos;
        }
        let mut edge_order: Vec<usize> = (0..net.edges.len()).collect();
        edge_order.sort_by_key(|&e| (rank[index.node_index[&net.edges[e].tail]], e));

        // Resolve edges in evaluation order so implicit copies can be chased
        // when deciding which messages a later function may reference.
        let mut compiled: Vec<Option<CompiledFn>> = (0..net.edges.len()).map(|_| None).collect();
        for &e in &edge_order {
            let edge = &net.edges[e];
            let tail = index.node_index[&edge.tail];
            if let Some(f) = code.edge_functions.get(&edge.id) {
                let ctx = edge_context(net, &index, params, tail, &compiled);
                compiled[e] = Some(compile(f, &ctx, params.n as usize, &params.alphabet)?);
            } else {
                compiled[e] = Some(implicit_copy(net, &index, params, e, tail)?);
            }
        }

        // Decoders must match the demand list exactly.
        let mut wanted: Vec<(String, String)> =
            net.demands.iter().map(|d| (d.receiver.clone(), d.message.clone())).collect();
        wanted.sort();
        let mut got: Vec<(String, String)> =
            code.decoders.iter().map(|d| (d.receiver.clone(), d.message.clone())).collect();
        got.sort();
        if wanted != got {
            return Err(Error::Validation(
                "decoders do not match the network's demands one-to-one".into(),
            ));
        }

        let mut decoder_entries: Vec<(String, String, &EdgeFunction)> = code
            .decoders
            .iter()
            .map(|d| (d.receiver.clone(), d.message.clone(), &d.function))
            .collect();
        decoder_entries.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        let mut decoders = Vec::with_capacity(decoder_entries.len());
        let mut decoder_names = Vec::with_capacity(decoder_entries.len());
        for (receiver, message, f) in decoder_entries {
            let r = index.node_index[&receiver];
            let m = index.message_index[&message];
            let ctx = CompileCtx {
                net,
                params,
                available_messages: Vec::new(),
                available_edges: index.in_edges[r].clone(),
            };
            let compiled_f = compile(f, &ctx, params.k as usize, &params.alphabet)?;
            decoders.push((r, m, compiled_f));
            decoder_names.push((receiver, message));
        }

        Ok(Evaluator {
            index,
            k: params.k as usize,
            n: params.n as usize,
            size,
            edge_order,
            compiled,
            decoders,
            decoder_names,
        })
    }

    pub fn scratch(&self) -> EvalScratch {
        EvalScratch {
            edge_values: vec![Vec::new(); self.compiled.len()],
            out: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> u64 {
        self.size
    }

    pub fn decoder_names(&self) -> &[(String, String)] {
        &self.decoder_names
    }

    /// Evaluate all edge functions for the given assignment (indexed like the
    /// network's message list, each entry a length-k vector).
    pub fn eval_edges(&self, msgs: &[Vec<u64>], scratch: &mut EvalScratch) {
        for &e in &self.edge_order {
            let f = self.compiled[e].as_ref().expect("compiled");
            let mut out = std::mem::take(&mut scratch.edge_values[e]);
            out.clear();
            eval_fn(f, msgs, &scratch.edge_values, self.k, self.n, &mut out);
            scratch.edge_values[e] = out;
        }
    }

    /// Value of an edge after [`Self::eval_edges`].
    pub fn edge_value<'s>(&self, scratch: &'s EvalScratch, edge_id: &str) -> Option<&'s [u64]> {
        let &e = self.index.edge_index.get(edge_id)?;
        Some(&scratch.edge_values[e])
    }

    /// Decode every demand (in (receiver, message) order) and return the
    /// position of the first mismatch, if any. Assumes `eval_edges` ran.
    pub fn first_failure(&self, msgs: &[Vec<u64>], scratch: &mut EvalScratch) -> Option<usize> {
        for (pos, (_, m, f)) in self.decoders.iter().enumerate() {
            let mut out = std::mem::take(&mut scratch.out);
            out.clear();
            eval_fn(f, msgs, &scratch.edge_values, self.k, self.k, &mut out);
            let ok = out == msgs[*m];
            scratch.out = out;
            if !ok {
                return Some(pos);
            }
        }
        None
    }

    /// Decoded value for the decoder at `pos` (sorted order).
    pub fn decode_one(&self, pos: usize, msgs: &[Vec<u64>], scratch: &mut EvalScratch) -> Vec<u64> {
        let (_, _, f) = &self.decoders[pos];
        let mut out = Vec::new();
        eval_fn(f, msgs, &scratch.edge_values, self.k, self.k, &mut out);
        out
    }

    /// Message index a decoder position decodes.
    pub fn decoder_message(&self, pos: usize) -> usize {
        self.decoders[pos].1
    }
}

fn edge_context<'a>(
    net: &'a NetworkSpec,
    index: &NetworkIndex,
    params: &'a CodeParams,
    tail: usize,
    compiled: &[Option<CompiledFn>],
) -> CompileCtx<'a> {
    let mut available_messages = Vec::new();
    if let Some(&m) = index.source_message.get(&tail) {
        available_messages.push(m);
    }
    for &e in &index.in_edges[tail] {
        if let Some(m) = carried_message(compiled, e) {
            available_messages.push(m);
        }
    }
    CompileCtx {
        net,
        params,
        available_messages,
        available_edges: index.in_edges[tail].clone(),
    }
}

/// Message delivered verbatim by an edge, chasing implicit copies.
fn carried_message(compiled: &[Option<CompiledFn>], edge: usize) -> Option<usize> {
    match compiled[edge].as_ref()? {
        CompiledFn::CopyMessage(m) => Some(*m),
        CompiledFn::CopyEdge(e) => carried_message(compiled, *e),
        _ => None,
    }
}

fn implicit_copy(
    net: &NetworkSpec,
    index: &NetworkIndex,
    params: &CodeParams,
    e: usize,
    tail: usize,
) -> Result<CompiledFn> {
    let tail_node = &net.nodes[tail];
    match tail_node.kind {
        NodeKind::Source => {
            if params.k > params.n {
                return Err(Error::Validation(format!(
                    "edge {:?} from source {:?} cannot carry a length-{} message in {} slots \
                     without an explicit function",
                    net.edges[e].id, tail_node.id, params.k, params.n
                )));
            }
            Ok(CompiledFn::CopyMessage(index.source_message[&tail]))
        }
        NodeKind::Intermediate => {
            if index.in_edges[tail].len() == 1 {
                Ok(CompiledFn::CopyEdge(index.in_edges[tail][0]))
            } else {
                Err(Error::Validation(format!(
                    "edge {:?} leaves a node with {} in-edges and needs an explicit function",
                    net.edges[e].id,
                    index.in_edges[tail].len()
                )))
            }
        }
        NodeKind::Receiver => unreachable!("validated: no edges leave receivers"),
    }
}

fn compile(
    f: &EdgeFunction,
    ctx: &CompileCtx,
    out_dim: usize,
    alphabet: &Alphabet,
) -> Result<CompiledFn> {
    let size = alphabet.size();
    match f {
        EdgeFunction::Linear(form) => compile_linear(form, ctx, out_dim, alphabet),
        EdgeFunction::Table(t) => {
            if ctx.params.k != 1 || ctx.params.n != 1 {
                return Err(Error::Validation("lookup tables require a (1,1) code".into()));
            }
            let inputs = t
                .inputs
                .iter()
                .map(|r| resolve_ref(r, ctx))
                .collect::<Result<Vec<_>>>()?;
            let want = (size as u128).pow(inputs.len() as u32);
            if t.table.len() as u128 != want {
                return Err(Error::Validation(format!(
                    "lookup table has {} entries, expected {want}",
                    t.table.len()
                )));
            }
            if t.table.iter().any(|&v| v >= size) {
                return Err(Error::Validation("lookup table entry out of range".into()));
            }
            Ok(CompiledFn::Table { inputs, size, table: t.table.clone() })
        }
        EdgeFunction::Staged(s) => {
            if ctx.params.k != 1 || ctx.params.n != 1 {
                return Err(Error::Validation("staged forms require a (1,1) code".into()));
            }
            let modulus = match alphabet {
                Alphabet::Ring { modulus } => *modulus,
                Alphabet::Field { prime } => *prime,
                _ => {
                    return Err(Error::Validation(
                        "staged forms need a ring or field alphabet".into(),
                    ))
                }
            };
            if s.stages.is_empty() {
                return Err(Error::Validation("staged form needs at least one stage".into()));
            }
            let mut stages = Vec::with_capacity(s.stages.len());
            for stage in &s.stages {
                let mut terms = Vec::with_capacity(stage.terms.len());
                for (r, c) in &stage.terms {
                    terms.push((resolve_ref(r, ctx)?, c % modulus));
                }
                stages.push(terms);
            }
            let want = (size as u128).pow(stages.len() as u32);
            if s.table.len() as u128 != want {
                return Err(Error::Validation(format!(
                    "stage table has {} entries, expected {want}",
                    s.table.len()
                )));
            }
            if s.table.iter().any(|&v| v >= size) {
                return Err(Error::Validation("stage table entry out of range".into()));
            }
            Ok(CompiledFn::Staged { stages, modulus, table: s.table.clone() })
        }
        EdgeFunction::Product(p) => {
            if p.factors.len() != p.components.len() {
                return Err(Error::Validation(
                    "product form needs one component per factor".into(),
                ));
            }
            if p.factors.is_empty() {
                return Err(Error::Validation("product form needs at least one factor".into()));
            }
            let prod: u64 = p.factors.iter().map(|a| a.size()).product();
            if prod != size {
                return Err(Error::Validation(format!(
                    "product factors have total size {prod}, alphabet has {size}"
                )));
            }
            let mut components = Vec::with_capacity(p.components.len());
            for (factor, comp) in p.factors.iter().zip(&p.components) {
                components.push(compile(comp, ctx, out_dim, factor)?);
            }
            Ok(CompiledFn::Product {
                sizes: p.factors.iter().map(|a| a.size()).collect(),
                out_dim,
                components,
            })
        }
    }
}

fn compile_linear(
    form: &LinearForm,
    ctx: &CompileCtx,
    out_dim: usize,
    alphabet: &Alphabet,
) -> Result<CompiledFn> {
    let modulus = match alphabet {
        Alphabet::Ring { modulus } => *modulus,
        Alphabet::Field { prime } => *prime,
        _ => {
            return Err(Error::Validation(
                "linear forms need a ring or field alphabet".into(),
            ))
        }
    };
    let mut msg_terms = Vec::new();
    for (id, m) in &form.message_terms {
        let CompRef::Message(ix) = resolve_ref(&InputRef::message(id.clone()), ctx)? else {
            unreachable!()
        };
        check_matrix(m, out_dim, ctx.params.k as usize, modulus, id)?;
        msg_terms.push((ix, m.clone()));
    }
    let mut edge_terms = Vec::new();
    for (id, m) in &form.edge_terms {
        let CompRef::Edge(ix) = resolve_ref(&InputRef::edge(id.clone()), ctx)? else {
            unreachable!()
        };
        check_matrix(m, out_dim, ctx.params.n as usize, modulus, id)?;
        edge_terms.push((ix, m.clone()));
    }
    Ok(CompiledFn::Linear { out_dim, msg_terms, edge_terms })
}

fn check_matrix(m: &RingMatrix, rows: usize, cols: usize, modulus: u64, id: &str) -> Result<()> {
    if m.modulus() != modulus {
        return Err(Error::Validation(format!(
            "matrix for {id:?} has modulus {}, alphabet has {modulus}",
            m.modulus()
        )));
    }
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::Validation(format!(
            "matrix for {id:?} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn resolve_ref(r: &InputRef, ctx: &CompileCtx) -> Result<CompRef> {
    match r {
        InputRef::Message { id } => {
            for &m in &ctx.available_messages {
                if ctx.net.messages[m].id == *id {
                    return Ok(CompRef::Message(m));
                }
            }
            Err(Error::Validation(format!(
                "message {id:?} is not available to this function"
            )))
        }
        InputRef::Edge { id } => {
            for &e in &ctx.available_edges {
                if ctx.net.edges[e].id == *id {
                    return Ok(CompRef::Edge(e));
                }
            }
            Err(Error::Validation(format!(
                "edge {id:?} is not an in-edge of this function's node"
            )))
        }
    }
}

fn scalar_of(r: CompRef, msgs: &[Vec<u64>], edges: &[Vec<u64>]) -> u64 {
    match r {
        CompRef::Message(m) => msgs[m][0],
        CompRef::Edge(e) => edges[e][0],
    }
}

fn eval_fn(
    f: &CompiledFn,
    msgs: &[Vec<u64>],
    edges: &[Vec<u64>],
    k: usize,
    out_dim_hint: usize,
    out: &mut Vec<u64>,
) {
    match f {
        CompiledFn::CopyMessage(m) => {
            out.extend_from_slice(&msgs[*m]);
            out.resize(out_dim_hint.max(msgs[*m].len()), 0);
        }
        CompiledFn::CopyEdge(e) => {
            out.extend_from_slice(&edges[*e]);
        }
        CompiledFn::Linear { out_dim, msg_terms, edge_terms } => {
            out.resize(*out_dim, 0);
            let mut modulus = 0;
            for (m, mat) in msg_terms {
                modulus = mat.modulus();
                accumulate(mat, &msgs[*m], out);
            }
            for (e, mat) in edge_terms {
                modulus = mat.modulus();
                accumulate(mat, &edges[*e], out);
            }
            if modulus > 0 {
                for v in out.iter_mut() {
                    *v %= modulus;
                }
            }
        }
        CompiledFn::Table { inputs, size, table } => {
            let mut ix = 0u64;
            for &r in inputs {
                ix = ix * size + scalar_of(r, msgs, edges);
            }
            out.push(table[ix as usize]);
        }
        CompiledFn::Staged { stages, modulus, table } => {
            let size = *modulus;
            let mut ix = 0u64;
            for stage in stages {
                let mut acc = 0u64;
                for &(r, c) in stage {
                    acc = (acc + scalar_of(r, msgs, edges) * c) % modulus;
                }
                ix = ix * size + acc;
            }
            out.push(table[ix as usize]);
        }
        CompiledFn::Product { sizes, out_dim, components } => {
            let mut per_component: Vec<Vec<u64>> = Vec::with_capacity(components.len());
            for (c, comp) in components.iter().enumerate() {
                let msgs_c: Vec<Vec<u64>> =
                    msgs.iter().map(|v| v.iter().map(|&s| digit(sizes, s, c)).collect()).collect();
                let edges_c: Vec<Vec<u64>> = edges
                    .iter()
                    .map(|v| v.iter().map(|&s| digit(sizes, s, c)).collect())
                    .collect();
                let mut buf = Vec::new();
                eval_fn(comp, &msgs_c, &edges_c, k, *out_dim, &mut buf);
                per_component.push(buf);
            }
            out.resize(*out_dim, 0);
            let mut digits = vec![0u64; components.len()];
            for (j, slot) in out.iter_mut().enumerate() {
                for (c, comp_out) in per_component.iter().enumerate() {
                    digits[c] = comp_out[j];
                }
                *slot = mixed_radix_compose(sizes, &digits);
            }
        }
    }
}

fn digit(sizes: &[u64], value: u64, c: usize) -> u64 {
    mixed_radix_decompose(sizes, value)[c]
}

fn accumulate(mat: &RingMatrix, v: &[u64], out: &mut [u64]) {
    let modulus = mat.modulus();
    for r in 0..mat.rows() {
        let mut acc = out[r];
        for c in 0..mat.cols() {
            let coeff = mat.get(r, c);
            if coeff != 0 {
                acc = (acc + (coeff as u128 * v[c] as u128 % modulus as u128) as u64) % modulus;
            }
        }
        out[r] = acc;
    }
}

/// Evaluate a code on one assignment (message id to length-k vector) and
/// report every edge value and decoded demand.
pub fn evaluate_code(
    net: &NetworkSpec,
    code: &Code,
    assignment: &BTreeMap<String, Vec<u64>>,
) -> Result<EvaluationReport> {
    let ev = Evaluator::new(net, code)?;
    let size = ev.alphabet_size();
    let mut msgs = vec![Vec::new(); net.messages.len()];
    for (i, m) in net.messages.iter().enumerate() {
        let Some(v) = assignment.get(&m.id) else {
            return Err(Error::Evaluation(format!("assignment misses message {:?}", m.id)));
        };
        if v.len() != ev.k() {
            return Err(Error::Evaluation(format!(
                "message {:?} needs {} symbols, got {}",
                m.id,
                ev.k(),
                v.len()
            )));
        }
        if v.iter().any(|&s| s >= size) {
            return Err(Error::Evaluation(format!("symbol out of range for {:?}", m.id)));
        }
        msgs[i] = v.clone();
    }
    for id in assignment.keys() {
        if !ev.index.message_index.contains_key(id) {
            return Err(Error::Evaluation(format!("assignment names unknown message {id:?}")));
        }
    }

    let mut scratch = ev.scratch();
    ev.eval_edges(&msgs, &mut scratch);
    let mut edge_values = BTreeMap::new();
    for (i, e) in net.edges.iter().enumerate() {
        edge_values.insert(e.id.clone(), scratch.edge_values[i].clone());
    }
    let mut decoded = Vec::new();
    for (pos, (receiver, message)) in ev.decoder_names().iter().enumerate() {
        let value = ev.decode_one(pos, &msgs, &mut scratch);
        let expected = &msgs[ev.decoder_message(pos)];
        decoded.push(DecodedDemand {
            receiver: receiver.clone(),
            message: message.clone(),
            matches: &value == expected,
            value,
        });
    }
    Ok(EvaluationReport { edge_values, decoded })
}
