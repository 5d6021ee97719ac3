//! Whole-code verification: does a code decode every demand for every message
//! assignment?
//!
//! Three strategies are provided. [`verify_exhaustive`] sweeps the full
//! assignment space (subject to a cap). [`verify_linear_basis`] checks only
//! basis assignments and is a complete proof when every edge function and
//! decoder is linear, because then every decoded symbol is a linear function
//! of the message symbols and two linear maps that agree on a basis agree
//! everywhere. [`verify_random`] samples assignments from a counter-based
//! generator; it can find counterexamples but never certifies a solution.
//!
//! Assignment order is canonical and worker-count independent: messages are
//! taken in ascending id order, each contributing `k` base-`size` digits with
//! the first message's first coordinate most significant. A counterexample is
//! always the lexicographically first failing assignment, and within it the
//! first failing demand in (receiver, message) order.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::code::{Code, EdgeFunction};
use crate::net::eval::{EvalScratch, Evaluator};
use crate::net::network::NetworkSpec;
use crate::rng;

/// Default ceiling on the number of assignments any sweep may visit.
pub const DEFAULT_CAP: u64 = 1 << 26;

/// Tuning for verification sweeps.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Maximum number of assignments an exhaustive sweep may visit; larger
    /// spaces report [`Verdict::Capped`] instead of running.
    pub cap: u64,
    /// Worker threads to spread the sweep over (0 and 1 both mean serial).
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cap: DEFAULT_CAP, workers: 1 }
    }
}

/// A failing assignment together with the first demand it breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Message id -> symbol vector of length `k`.
    pub assignment: BTreeMap<String, Vec<u64>>,
    /// Receiver whose decoder failed.
    pub receiver: String,
    /// Message that receiver demanded.
    pub message: String,
    /// What the decoder produced.
    pub decoded: Vec<u64>,
    /// What it should have produced.
    pub expected: Vec<u64>,
}

/// Outcome of a verification sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every visited assignment decoded correctly, and the sweep was complete
    /// enough to certify the code (full space, or basis + linearity).
    Solution { assignments_checked: u64 },
    /// Some assignment fails; `witness` is the canonical first failure.
    CounterExample { witness: Box<Witness>, assignments_checked: u64 },
    /// A sampling sweep saw no failure; this does not certify a solution.
    NoCounterexampleFound { assignments_checked: u64 },
    /// The assignment space exceeds the configured cap; nothing was checked.
    Capped { space: u128, cap: u64 },
}

impl Verdict {
    /// True for verdicts that established the code is a solution.
    pub fn is_solution(&self) -> bool {
        matches!(self, Verdict::Solution { .. })
    }

    /// True when a concrete failing assignment was produced.
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::CounterExample { .. })
    }
}

/// Sorted message ids paired with their index into the network message list.
fn sorted_messages(ev: &Evaluator) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> =
        ev.index.message_index.iter().map(|(id, &ix)| (id.clone(), ix)).collect();
    v.sort();
    v
}

/// Total number of assignments: (size^k)^messages, saturating at u128::MAX.
fn assignment_space(size: u64, k: usize, messages: usize) -> u128 {
    let mut space: u128 = 1;
    for _ in 0..messages * k {
        space = space.saturating_mul(size as u128);
    }
    space
}

/// Decode digit `pos` of assignment `index` (first digit most significant).
fn digits_of_index(index: u64, size: u64, digits: usize, out: &mut [u64]) {
    let mut rest = index;
    for pos in (0..digits).rev() {
        out[pos] = rest % size;
        rest /= size;
    }
    debug_assert_eq!(rest, 0);
}

struct SweepState<'a> {
    ev: &'a Evaluator,
    /// Message slot (network index) and coordinate for each digit position.
    digit_targets: Vec<(usize, usize)>,
    size: u64,
}

impl<'a> SweepState<'a> {
    fn new(ev: &'a Evaluator) -> Self {
        let sorted = sorted_messages(ev);
        let k = ev.k();
        let mut digit_targets = Vec::with_capacity(sorted.len() * k);
        for (_, msg_ix) in &sorted {
            for coord in 0..k {
                digit_targets.push((*msg_ix, coord));
            }
        }
        SweepState { ev, digit_targets, size: ev.alphabet_size() }
    }

    fn digit_count(&self) -> usize {
        self.digit_targets.len()
    }

    fn apply_digits(&self, digits: &[u64], msgs: &mut [Vec<u64>]) {
        for (pos, &(m, c)) in self.digit_targets.iter().enumerate() {
            msgs[m][c] = digits[pos];
        }
    }

    fn fresh_assignment(&self) -> Vec<Vec<u64>> {
        vec![vec![0; self.ev.k()]; self.ev.index.message_index.len()]
    }

    /// Advance `digits` to the next assignment (last digit fastest).
    /// Returns false on wrap-around past the final assignment.
    fn step(&self, digits: &mut [u64]) -> bool {
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < self.size {
                return true;
            }
            digits[pos] = 0;
        }
        false
    }

    fn witness(&self, msgs: &[Vec<u64>], scratch: &mut EvalScratch, demand_pos: usize) -> Witness {
        let decoded = self.ev.decode_one(demand_pos, msgs, scratch);
        let (receiver, message) = self.ev.decoder_names()[demand_pos].clone();
        let expected = msgs[self.ev.decoder_message(demand_pos)].clone();
        let mut assignment = BTreeMap::new();
        for (id, &ix) in &self.ev.index.message_index {
            assignment.insert(id.clone(), msgs[ix].clone());
        }
        Witness { assignment, receiver, message, decoded, expected }
    }

    /// Scan assignments `start..end`; return the first failing index and its
    /// witness, if any. `stop_before` lets workers skip work once another
    /// worker has found an earlier failure.
    fn scan(&self, start: u64, end: u64, stop_before: &AtomicU64) -> Option<(u64, Witness)> {
        if start >= end {
            return None;
        }
        let mut digits = vec![0u64; self.digit_count()];
        digits_of_index(start, self.size, self.digit_count(), &mut digits);
        let mut msgs = self.fresh_assignment();
        let mut scratch = self.ev.scratch();
        let mut index = start;
        loop {
            if index >= stop_before.load(Ordering::Relaxed) {
                return None;
            }
            self.apply_digits(&digits, &mut msgs);
            self.ev.eval_edges(&msgs, &mut scratch);
            if let Some(pos) = self.ev.first_failure(&msgs, &mut scratch) {
                return Some((index, self.witness(&msgs, &mut scratch, pos)));
            }
            index += 1;
            if index >= end || !self.step(&mut digits) {
                return None;
            }
        }
    }
}

/// Run `scan` over `0..total` with the requested worker count and return the
/// earliest failure, if any. The result is independent of the worker count.
fn parallel_scan(state: &SweepState, total: u64, workers: usize) -> Option<(u64, Witness)> {
    let workers = workers.max(1).min(total.max(1) as usize);
    if workers <= 1 {
        let stop = AtomicU64::new(u64::MAX);
        return state.scan(0, total, &stop);
    }
    // More chunks than workers so an early counterexample lets later chunks
    // be skipped cheaply via the shared stop index.
    let chunks = (workers as u64 * 8).min(total);
    let chunk_len = total.div_ceil(chunks);
    let next_chunk = AtomicUsize::new(0);
    let stop = AtomicU64::new(u64::MAX);
    let mut found: Vec<Option<(u64, Witness)>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..workers {
            handles.push(scope.spawn(|| {
                let mut best: Option<(u64, Witness)> = None;
                loop {
                    let c = next_chunk.fetch_add(1, Ordering::Relaxed) as u64;
                    if c >= chunks {
                        break;
                    }
                    let start = c * chunk_len;
                    let end = (start + chunk_len).min(total);
                    if start >= stop.load(Ordering::Relaxed) {
                        continue;
                    }
                    if let Some((ix, w)) = state.scan(start, end, &stop) {
                        stop.fetch_min(ix, Ordering::Relaxed);
                        if best.as_ref().is_none_or(|(b, _)| ix < *b) {
                            best = Some((ix, w));
                        }
                    }
                }
                best
            }));
        }
        for h in handles {
            found.push(h.join().expect("verification worker panicked"));
        }
    });
    found.into_iter().flatten().min_by_key(|(ix, _)| *ix)
}

/// Check every message assignment. Complete but exponential; spaces larger
/// than `opts.cap` return [`Verdict::Capped`] untouched.
pub fn verify_exhaustive(net: &NetworkSpec, code: &Code, opts: &VerifyOptions) -> Result<Verdict> {
    let ev = Evaluator::new(net, code)?;
    let state = SweepState::new(&ev);
    let space = assignment_space(state.size, ev.k(), ev.index.message_index.len());
    if space > opts.cap as u128 {
        return Ok(Verdict::Capped { space, cap: opts.cap });
    }
    let total = space as u64;
    match parallel_scan(&state, total, opts.workers) {
        Some((ix, w)) => {
            Ok(Verdict::CounterExample { witness: Box::new(w), assignments_checked: ix + 1 })
        }
        None => Ok(Verdict::Solution { assignments_checked: total }),
    }
}

/// Check only the basis assignments (one nonzero coordinate at a time).
///
/// Requires every explicitly given edge function and decoder to be linear;
/// implicit copies are linear as well, so agreement on the basis extends to
/// the whole space by additivity and the verdict is a genuine certificate.
pub fn verify_linear_basis(net: &NetworkSpec, code: &Code) -> Result<Verdict> {
    for (edge, f) in &code.edge_functions {
        if !matches!(f, EdgeFunction::Linear(_)) {
            return Err(Error::Precondition(format!(
                "basis verification requires linear edge functions, but `{edge}` is not linear"
            )));
        }
    }
    for d in &code.decoders {
        if !matches!(d.function, EdgeFunction::Linear(_)) {
            return Err(Error::Precondition(format!(
                "basis verification requires linear decoders, but receiver `{}` uses a non-linear \
                 decoder for `{}`",
                d.receiver, d.message
            )));
        }
    }
    let ev = Evaluator::new(net, code)?;
    let state = SweepState::new(&ev);
    let mut msgs = state.fresh_assignment();
    let mut scratch = ev.scratch();

    // One basis vector per (message, coordinate). Linear maps fix the zero
    // assignment, so it needs no separate check.
    let mut checked = 0u64;
    for pos in 0..state.digit_count() {
        let (m, c) = state.digit_targets[pos];
        msgs[m][c] = 1 % state.size;
        ev.eval_edges(&msgs, &mut scratch);
        checked += 1;
        if let Some(fail) = ev.first_failure(&msgs, &mut scratch) {
            let w = state.witness(&msgs, &mut scratch, fail);
            return Ok(Verdict::CounterExample {
                witness: Box::new(w),
                assignments_checked: checked,
            });
        }
        msgs[m][c] = 0;
    }
    Ok(Verdict::Solution { assignments_checked: checked })
}

/// Check `samples` pseudo-random assignments drawn from `seed`.
///
/// Sample `s` assigns digit `d` the value `rng::sample(seed, s*D + d) % size`,
/// so the stream is reproducible and the earliest failing sample index is
/// reported regardless of worker count. Never returns [`Verdict::Solution`].
pub fn verify_random(
    net: &NetworkSpec,
    code: &Code,
    samples: u64,
    seed: u64,
    opts: &VerifyOptions,
) -> Result<Verdict> {
    let ev = Evaluator::new(net, code)?;
    let state = SweepState::new(&ev);
    let digits = state.digit_count() as u64;

    let scan_samples = |start: u64, end: u64, stop: &AtomicU64| -> Option<(u64, Witness)> {
        let mut msgs = state.fresh_assignment();
        let mut scratch = state.ev.scratch();
        let mut buf = vec![0u64; digits as usize];
        for s in start..end {
            if s >= stop.load(Ordering::Relaxed) {
                return None;
            }
            for (d, slot) in buf.iter_mut().enumerate() {
                *slot = rng::sample(seed, s * digits + d as u64) % state.size;
            }
            state.apply_digits(&buf, &mut msgs);
            state.ev.eval_edges(&msgs, &mut scratch);
            if let Some(pos) = state.ev.first_failure(&msgs, &mut scratch) {
                return Some((s, state.witness(&msgs, &mut scratch, pos)));
            }
        }
        None
    };

    let workers = opts.workers.max(1).min(samples.max(1) as usize);
    let hit = if workers <= 1 {
        let stop = AtomicU64::new(u64::MAX);
        scan_samples(0, samples, &stop)
    } else {
        let chunks = (workers as u64 * 8).min(samples);
        let chunk_len = samples.div_ceil(chunks);
        let next_chunk = AtomicUsize::new(0);
        let stop = AtomicU64::new(u64::MAX);
        let mut found: Vec<Option<(u64, Witness)>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for _ in 0..workers {
                handles.push(scope.spawn(|| {
                    let mut best: Option<(u64, Witness)> = None;
                    loop {
                        let c = next_chunk.fetch_add(1, Ordering::Relaxed) as u64;
                        if c >= chunks {
                            break;
                        }
                        let start = c * chunk_len;
                        let end = (start + chunk_len).min(samples);
                        if start >= stop.load(Ordering::Relaxed) {
                            continue;
                        }
                        if let Some((ix, w)) = scan_samples(start, end, &stop) {
                            stop.fetch_min(ix, Ordering::Relaxed);
                            if best.as_ref().is_none_or(|(b, _)| ix < *b) {
                                best = Some((ix, w));
                            }
                        }
                    }
                    best
                }));
            }
            for h in handles {
                found.push(h.join().expect("verification worker panicked"));
            }
        });
        found.into_iter().flatten().min_by_key(|(ix, _)| *ix)
    };

    match hit {
        Some((ix, w)) => {
            Ok(Verdict::CounterExample { witness: Box::new(w), assignments_checked: ix + 1 })
        }
        None => Ok(Verdict::NoCounterexampleFound { assignments_checked: samples }),
    }
}

/// Re-evaluate a witness assignment against a code and confirm it still
/// fails the demand named in the witness.
pub fn confirm_witness(net: &NetworkSpec, code: &Code, witness: &Witness) -> Result<bool> {
    let ev = Evaluator::new(net, code)?;
    let mut msgs = vec![vec![0; ev.k()]; ev.index.message_index.len()];
    for (id, value) in &witness.assignment {
        let Some(&ix) = ev.index.message_index.get(id) else {
            return Err(Error::Validation(format!("witness names unknown message `{id}`")));
        };
        if value.len() != ev.k() {
            return Err(Error::Validation(format!(
                "witness value for `{id}` has length {}, expected {}",
                value.len(),
                ev.k()
            )));
        }
        msgs[ix] = value.clone();
    }
    let mut scratch = ev.scratch();
    ev.eval_edges(&msgs, &mut scratch);
    let pos = ev
        .decoder_names()
        .iter()
        .position(|(r, m)| *r == witness.receiver && *m == witness.message)
        .ok_or_else(|| {
            Error::Validation(format!(
                "witness names demand ({}, {}) not present in the network",
                witness.receiver, witness.message
            ))
        })?;
    let decoded = ev.decode_one(pos, &msgs, &mut scratch);
    Ok(decoded != msgs[ev.decoder_message(pos)])
}
