//! Shared options and outcome types for the bounded searches.

use crate::net::verify::DEFAULT_CAP;

/// Tuning for bounded searches.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Ceiling on the candidate-space size; larger spaces return
    /// [`SearchOutcome::Capped`] without scanning anything.
    pub cap: u64,
    /// Worker threads for the largest sweeps (0 and 1 both mean serial).
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: DEFAULT_CAP, workers: 1 }
    }
}

/// Result of a bounded search over an explicitly sized candidate space.
///
/// Candidate order is fixed and documented by each search, so `Found` always
/// reports the lexicographically least hit regardless of worker count, and
/// `Exhausted` is a genuine nonexistence proof for the searched space.
#[derive(Clone, Debug)]
pub enum SearchOutcome<T> {
    /// The first hit in candidate order.
    Found {
        value: T,
        /// Canonical work count: candidates at or before the hit, in
        /// enumeration order (scheduling-independent).
        tested: u64,
        /// Total size of the candidate space.
        space: u128,
    },
    /// The whole candidate space was scanned without a hit.
    Exhausted { space: u128 },
    /// The candidate space exceeds the cap; nothing was scanned.
    Capped { space: u128, cap: u64 },
}

impl<T> SearchOutcome<T> {
    /// True when the search produced a hit.
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    /// True when the whole space was scanned without a hit.
    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::Exhausted { .. })
    }

    /// The found value, if any.
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found { value, .. } => Some(value),
            _ => None,
        }
    }
}
