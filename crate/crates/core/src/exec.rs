//! Data-parallel driver for the exhaustive sweeps.
//!
//! The hot loops in this crate iterate a dense index space (adjacency masks,
//! sample indices) and fold per-item results into an accumulator. With the
//! `parallel` feature the fold runs on rayon; without it the same closure
//! arguments run in a plain loop. `fold_range_seq` is always available so the
//! bench suite can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential fold over `0..len`.
pub fn fold_range_seq<A, F, M>(len: u64, make: impl Fn() -> A, fold: F, _merge: M) -> A
where
    F: Fn(A, u64) -> A,
    M: Fn(A, A) -> A,
{
    (0..len).fold(make(), fold)
}

/// Folds `0..len`, in parallel when the `parallel` feature is enabled.
///
/// `merge` must be associative and agree with `fold` so that the result does
/// not depend on the chunking; deterministic callers additionally make it
/// commutative (e.g. min/max with total tie-breaks).
#[cfg(feature = "parallel")]
pub fn fold_range<A, F, M>(len: u64, make: impl Fn() -> A + Sync, fold: F, merge: M) -> A
where
    A: Send,
    F: Fn(A, u64) -> A + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    // Chunked so each rayon task amortises the accumulator setup.
    let chunk: u64 = 1 << 16;
    let chunks = len.div_ceil(chunk).max(1);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(len);
            (lo..hi).fold(make(), &fold)
        })
        .reduce(&make, merge)
}

#[cfg(not(feature = "parallel"))]
pub fn fold_range<A, F, M>(len: u64, make: impl Fn() -> A, fold: F, merge: M) -> A
where
    F: Fn(A, u64) -> A,
    M: Fn(A, A) -> A,
{
    fold_range_seq(len, make, fold, merge)
}

/// Maps `f` over a slice, in parallel when enabled, preserving input order.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}
