//! Canonical forms and isomorph-free exhaustive generation for small graphs.
//!
//! The canonical key of a graph on `n <= 16` vertices is the lexicographically
//! greatest upper-triangle bit sequence (column-major, the graph6 order) over
//! all vertex orderings, packed into a `u128`. It is computed by a
//! prefix-pruned backtracking search; candidate ordering by adjacency to the
//! placed prefix makes the first leaf a good incumbent so most branches prune
//! immediately.

use crate::graph::Graph;
use std::collections::HashSet;
use thiserror::Error;

pub const MAX_CANON_N: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("canonical forms support at most {MAX_CANON_N} vertices, got {0}")]
    TooLarge(usize),
    #[error("search budget of {limit} nodes exhausted")]
    BudgetExhausted { limit: u64 },
}

/// Canonical key: vertex count plus the packed maximal bit sequence.
/// Sequence position `p` (0-based) is stored at u128 bit `127 - p`, so the
/// integer order on `bits` is the lexicographic order on sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey {
    pub n: usize,
    pub bits: u128,
}

struct CanonSearch {
    n: usize,
    rows: [u16; MAX_CANON_N],
    best: u128,
    have_best: bool,
}

impl CanonSearch {
    /// Explores orderings; `placed` maps position -> vertex, `used` is a mask.
    /// `ofs` is the number of sequence bits already emitted, `cur` the packed
    /// prefix, `tied` whether `cur` equals the incumbent prefix.
    /// Returns true if the incumbent was replaced somewhere below.
    fn dfs(&mut self, placed: &mut Vec<usize>, used: u16, ofs: usize, cur: u128, tied: bool) -> bool {
        let k = placed.len();
        if k == self.n {
            if !tied || !self.have_best {
                self.best = cur;
                self.have_best = true;
                return true;
            }
            return false;
        }
        // Candidates sorted by column value descending: the greedy-max child
        // first, so the incumbent converges fast.
        let mut cands: Vec<(u16, usize)> = (0..self.n)
            .filter(|v| used & (1 << v) == 0)
            .map(|v| {
                let mut col: u16 = 0;
                for (pos, &p) in placed.iter().enumerate() {
                    if self.rows[v] & (1 << p) != 0 {
                        col |= 1 << (k - 1 - pos);
                    }
                }
                (col, v)
            })
            .collect();
        cands.sort_unstable_by(|a, b| b.cmp(a));

        let mut tied = tied;
        let mut updated = false;
        for (col, v) in cands {
            let shifted = if k == 0 { 0u128 } else { (col as u128) << (128 - ofs - k) };
            let child_tied;
            if tied && self.have_best {
                let mask = if k == 0 { 0 } else { ((1u128 << k) - 1) << (128 - ofs - k) };
                let best_seg = self.best & mask;
                if shifted < best_seg {
                    // Columns are sorted descending: all later ones prune too.
                    break;
                }
                child_tied = shifted == best_seg;
            } else {
                child_tied = false;
            }
            placed.push(v);
            if self.dfs(placed, used | (1 << v), ofs + k, cur | shifted, child_tied) {
                tied = true;
                updated = true;
            }
            placed.pop();
        }
        updated
    }
}

/// Computes the canonical key of `g` (n <= 16).
pub fn canonical_key(g: &Graph) -> Result<CanonKey, CanonError> {
    let n = g.n();
    if n > MAX_CANON_N {
        return Err(CanonError::TooLarge(n));
    }
    let mut rows = [0u16; MAX_CANON_N];
    for v in 0..n {
        for u in g.neighbors(v) {
            rows[v] |= 1 << u;
        }
    }
    let mut search = CanonSearch { n, rows, best: 0, have_best: false };
    search.dfs(&mut Vec::with_capacity(n), 0, 0, 0, true);
    Ok(CanonKey { n, bits: search.best })
}

/// The canonically relabelled graph itself.
pub fn canonical_form(g: &Graph) -> Result<Graph, CanonError> {
    let key = canonical_key(g)?;
    let mut out = Graph::new(key.n);
    let mut pos = 0usize;
    for j in 1..key.n {
        for i in 0..j {
            // Column j emits bits for placed positions 0..j in order; bit for
            // position i sits at sequence offset j(j-1)/2 + i.
            if key.bits >> (127 - pos) & 1 == 1 {
                out.add_edge(i, j);
            }
            pos += 1;
        }
    }
    Ok(out)
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool, CanonError> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_key(a)? == canonical_key(b)?)
}

/// Isomorph-free generation of all graphs on exactly `n` vertices whose every
/// induced prefix satisfies `keep` (which must be hereditary for exhaustive
/// coverage). Returns one canonical representative per isomorphism class.
/// `budget` is decremented once per extension considered.
pub fn enumerate_classes(
    n: usize,
    keep: &dyn Fn(&Graph) -> bool,
    budget: &mut u64,
) -> Result<Vec<Graph>, CanonError> {
    let levels = enumerate_levels(n, keep, budget)?;
    Ok(levels.into_iter().next_back().unwrap_or_default())
}

/// As `enumerate_classes` but returns every level `0..=n`.
pub fn enumerate_levels(
    n: usize,
    keep: &dyn Fn(&Graph) -> bool,
    budget: &mut u64,
) -> Result<Vec<Vec<Graph>>, CanonError> {
    if n > MAX_CANON_N {
        return Err(CanonError::TooLarge(n));
    }
    let mut levels: Vec<Vec<Graph>> = vec![vec![Graph::new(0)]];
    for k in 0..n {
        let mut seen: HashSet<CanonKey> = HashSet::new();
        let mut next: Vec<Graph> = Vec::new();
        for parent in &levels[k] {
            for mask in 0u32..(1u32 << k) {
                if *budget == 0 {
                    return Err(CanonError::BudgetExhausted { limit: 0 });
                }
                *budget -= 1;
                let mut child = extend(parent, k, mask);
                if !keep(&child) {
                    continue;
                }
                let key = canonical_key(&child)?;
                if seen.insert(key) {
                    child = canonical_form(&child)?;
                    next.push(child);
                }
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

fn extend(parent: &Graph, k: usize, mask: u32) -> Graph {
    let mut child = Graph::new(k + 1);
    for (u, v) in parent.edges() {
        child.add_edge(u, v);
    }
    for u in 0..k {
        if mask >> u & 1 == 1 {
            child.add_edge(u, k);
        }
    }
    child
}
