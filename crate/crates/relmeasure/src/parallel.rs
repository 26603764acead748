//! Deterministic parallel scan helpers.
//!
//! Scans over `1..=n_max` are cut at checkpoint boundaries and further into
//! fixed-size chunks. Chunks are evaluated in parallel, collected in index
//! order and merged sequentially, so the output is identical for every
//! thread count.

use rayon::prelude::*;

/// Default chunk length for range scans.
pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// Geometrically spaced checkpoints ending exactly at `n_max`.
///
/// The first checkpoint is at least 2 and consecutive checkpoints are
/// strictly increasing, so the count may come out below `count` for tiny
/// ranges.
pub fn geometric_checkpoints(n_max: u64, count: usize) -> Vec<u64> {
    assert!(n_max >= 2 && count >= 2);
    let mut cps = Vec::with_capacity(count);
    let log_max = (n_max as f64).ln();
    for i in 1..=count {
        let t = log_max * (i as f64) / (count as f64);
        let n = t.exp().round() as u64;
        let n = n.clamp(2, n_max);
        if cps.last().map_or(true, |&last| n > last) {
            cps.push(n);
        }
    }
    if *cps.last().unwrap() != n_max {
        cps.push(n_max);
    }
    cps
}

/// Half-open ranges `[a, b)` covering `[lo, hi)`, cut at every boundary in
/// `cuts` and at multiples of `chunk`.
pub fn segment_ranges(lo: u64, hi: u64, cuts: &[u64], chunk: u64) -> Vec<(u64, u64)> {
    assert!(chunk > 0);
    let mut out = Vec::new();
    let mut a = lo;
    let mut cut_iter = cuts.iter().copied().filter(|&c| c > lo && c < hi).peekable();
    while a < hi {
        let next_cut = cut_iter.peek().copied().unwrap_or(hi);
        let b = (a + chunk).min(next_cut).min(hi);
        out.push((a, b));
        if b == next_cut {
            cut_iter.next();
        }
        a = b;
    }
    out
}

/// Map every range in parallel, preserving range order in the output.
pub fn par_map_ranges<T: Send>(
    ranges: &[(u64, u64)],
    f: impl Fn(u64, u64) -> T + Sync,
) -> Vec<T> {
    ranges.par_iter().map(|&(a, b)| f(a, b)).collect()
}
