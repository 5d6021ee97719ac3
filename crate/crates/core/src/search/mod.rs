//! Bounded, deterministic searches over code spaces.
//!
//! Three searches are provided, in increasing order of generality and cost:
//!
//! * [`search_scalar_linear`]: scalar linear codes over a ring or field, with
//!   the encoder side normalized down to a handful of unit weights.
//! * [`search_p_structured`]: scalar codes with the group-translate shape on
//!   every gadget, which is the shape every solvable small instance exhibits.
//! * [`enumerate_all_codes`]: the full function space of a tiny instance, as
//!   an independent oracle for the structured search.
//!
//! [`find_p_witness`] goes the other way: given a concrete single-gadget
//! code, it recovers a group-translate presentation if one exists.
//!
//! All candidate spaces are enumerated in a documented lexicographic order;
//! worker threads only split the scan, never change which candidate is
//! reported first.

pub mod all_codes;
pub mod outcome;
pub mod scalar;
pub mod structured;

pub use all_codes::{enumerate_all_codes, EnumerationOutcome};
pub use outcome::{SearchOptions, SearchOutcome};
pub use scalar::search_scalar_linear;
pub use structured::{find_p_witness, search_p_structured};

use std::sync::atomic::{AtomicU64, Ordering};

/// Below this many candidates a scan stays serial regardless of `workers`.
const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// Contiguous, non-empty index ranges covering `0..total`, one per worker.
fn split_ranges(total: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = (workers.max(1) as u64).min(total.max(1));
    let chunk = total.div_ceil(workers);
    let mut out = Vec::new();
    let mut lo = 0;
    while lo < total {
        let hi = (lo + chunk).min(total);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Least index in `0..total` satisfying `pred`, or `None`.
///
/// `init` builds one scratch state per worker; `pred` may use it freely. The
/// result is the global minimum whatever the worker count: each worker scans
/// a contiguous chunk from its low end (so its first hit is its chunk's
/// minimum) and abandons the chunk once a smaller global hit is known.
pub(crate) fn scan_first<S, FS, FP>(total: u64, workers: usize, init: FS, pred: FP) -> Option<u64>
where
    S: Send,
    FS: Fn() -> S + Sync,
    FP: Fn(u64, &mut S) -> bool + Sync,
{
    if workers <= 1 || total < PARALLEL_THRESHOLD {
        let mut state = init();
        return (0..total).find(|&t| pred(t, &mut state));
    }
    let best = AtomicU64::new(u64::MAX);
    std::thread::scope(|scope| {
        for (lo, hi) in split_ranges(total, workers) {
            let best = &best;
            let init = &init;
            let pred = &pred;
            scope.spawn(move || {
                let mut state = init();
                for t in lo..hi {
                    if t % 1024 == 0 && best.load(Ordering::Relaxed) < t {
                        return;
                    }
                    if pred(t, &mut state) {
                        best.fetch_min(t, Ordering::Relaxed);
                        return;
                    }
                }
            });
        }
    });
    match best.load(Ordering::Relaxed) {
        u64::MAX => None,
        t => Some(t),
    }
}

/// All indices in `0..total` satisfying `pred`, ascending.
///
/// Workers scan disjoint contiguous chunks and results are concatenated in
/// chunk order, so the output is identical for every worker count.
pub(crate) fn scan_collect<S, FS, FP>(total: u64, workers: usize, init: FS, pred: FP) -> Vec<u64>
where
    S: Send,
    FS: Fn() -> S + Sync,
    FP: Fn(u64, &mut S) -> bool + Sync,
{
    if workers <= 1 || total < PARALLEL_THRESHOLD {
        let mut state = init();
        return (0..total).filter(|&t| pred(t, &mut state)).collect();
    }
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (lo, hi) in split_ranges(total, workers) {
            let init = &init;
            let pred = &pred;
            handles.push(scope.spawn(move || {
                let mut state = init();
                (lo..hi).filter(|&t| pred(t, &mut state)).collect::<Vec<u64>>()
            }));
        }
        let mut out = Vec::new();
        for h in handles {
            out.extend(h.join().expect("scan worker panicked"));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_first_is_worker_count_independent() {
        let pred = |t: u64, _: &mut ()| t % 7919 == 0 && t > 0;
        for workers in [1, 2, 5] {
            assert_eq!(scan_first(100_000, workers, || (), pred), Some(7919));
        }
        assert_eq!(scan_first(100, 4, || (), |_, _: &mut ()| false), None);
    }

    #[test]
    fn scan_collect_is_worker_count_independent() {
        let pred = |t: u64, _: &mut ()| t % 9973 == 0;
        let serial = scan_collect(60_000, 1, || (), pred);
        let parallel = scan_collect(60_000, 3, || (), pred);
        assert_eq!(serial, parallel);
        assert_eq!(serial, vec![0, 9973, 19946, 29919, 39892, 49865, 59838]);
    }

    #[test]
    fn split_ranges_covers_everything() {
        for (total, workers) in [(10u64, 3usize), (7, 7), (1, 4), (100, 1)] {
            let ranges = split_ranges(total, workers);
            let mut next = 0;
            for (lo, hi) in ranges {
                assert_eq!(lo, next);
                assert!(hi > lo);
                next = hi;
            }
            assert_eq!(next, total);
        }
    }
}
