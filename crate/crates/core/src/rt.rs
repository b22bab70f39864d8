//! Exact computation of RT(n, m, K_t) for small n, closed-form density
//! evaluators, and a persisted record catalog.
//!
//! Two independent routes compute the same quantity: `rt_exact` enumerates
//! isomorphism classes with canonical-form pruning and certified feasibility
//! checks, while `rt_oracle` walks every labelled graph with brute-force
//! subset enumeration. They are cross-checked against each other in the
//! acceptance suite.

use crate::canon::{self, CanonKey};
use crate::certify::{self, Budget, CertKind};
use crate::exec;
use crate::graph::Graph;
use crate::io;
use crate::ratio::{self, Ratio};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Default exact-search vertex limit (full enumeration regime).
pub const DEFAULT_EXACT_LIMIT: usize = 10;
/// Hard vertex limit of the brute-force oracle.
pub const ORACLE_LIMIT: usize = 8;
/// How many extremal witnesses a record retains.
pub const MAX_WITNESSES: usize = 4;

#[derive(Debug, Error)]
pub enum RtError {
    #[error("query outside supported range: {0}")]
    Domain(String),
    #[error(transparent)]
    Certify(#[from] certify::CertifyError),
    #[error("catalog conflict for key {key}: stored value {stored}, new value {new}")]
    CatalogConflict { key: String, stored: String, new: String },
    #[error("catalog witness failed re-certification: {0}")]
    BadWitness(String),
    #[error("catalog io: {0}")]
    CatalogIo(String),
}

/// An RT query: `n` vertices, independence threshold `m` (strict: the
/// admissible graphs have alpha(G) < m), forbidden clique order `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtQuery {
    pub n: usize,
    #[serde(with = "ratio::serde_ratio")]
    pub m: Ratio,
    pub t: usize,
}

impl RtQuery {
    pub fn new(n: usize, m: Ratio, t: usize) -> Result<Self, RtError> {
        use num::Zero;
        if t < 2 {
            return Err(RtError::Domain(format!("t must be at least 2, got {t}")));
        }
        if m <= Ratio::zero() {
            return Err(RtError::Domain("m must be positive".into()));
        }
        Ok(RtQuery { n, m, t })
    }

    pub fn key(&self) -> String {
        format!("n={},m={},t={}", self.n, ratio::to_string(&self.m), self.t)
    }
}

/// "empty" is a first-class status: no graph satisfies the constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RtValue {
    Empty,
    Edges(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RtStats {
    pub nodes: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtRecord {
    pub query: RtQuery,
    pub value: RtValue,
    /// False when the node budget ran out; `value` is then only the best
    /// lower bound found.
    pub exact: bool,
    /// Extremal witnesses in graph6, canonical under `rt_exact`.
    pub witnesses: Vec<String>,
    pub stats: RtStats,
}

fn alpha_lt_m(alpha: usize, m: &Ratio) -> bool {
    ratio::from_usize(alpha) < *m
}

// ---------------------------------------------------------------------------
// Exact solver: isomorphism-class enumeration with feasibility pruning
// ---------------------------------------------------------------------------

struct ExactSearch<'a> {
    query: &'a RtQuery,
    budget: &'a mut Budget,
    seen: Vec<HashSet<CanonKey>>,
    best: Option<usize>,
    witnesses: BTreeSet<CanonKey>,
    skip_alpha: bool,
}

impl<'a> ExactSearch<'a> {
    fn feasible(&mut self, g: &Graph) -> Result<bool, RtError> {
        if certify::has_clique(g, self.query.t, self.budget)?.kind == CertKind::Clique {
            return Ok(false);
        }
        if self.skip_alpha {
            return Ok(true);
        }
        let (alpha, _) = certify::independence_number(g, self.budget)?;
        Ok(alpha_lt_m(alpha, &self.query.m))
    }

    fn record(&mut self, g: &Graph, key: CanonKey) {
        let e = g.edge_count();
        match self.best {
            Some(b) if e < b => {}
            Some(b) if e == b => {
                self.witnesses.insert(key);
                while self.witnesses.len() > MAX_WITNESSES {
                    let last = *self.witnesses.iter().next_back().unwrap();
                    self.witnesses.remove(&last);
                }
            }
            _ => {
                self.best = Some(e);
                self.witnesses.clear();
                self.witnesses.insert(key);
            }
        }
    }

    fn dfs(&mut self, g: &Graph, k: usize) -> Result<(), RtError> {
        if k == self.query.n {
            return Ok(());
        }
        for mask in 0u32..(1u32 << k) {
            self.budget.used += 1;
            if self.budget.used > self.budget.limit {
                return Err(certify::CertifyError::Inconclusive {
                    limit: self.budget.limit,
                    used: self.budget.used,
                }
                .into());
            }
            let mut child = Graph::new(k + 1);
            for (u, v) in g.edges() {
                child.add_edge(u, v);
            }
            for u in 0..k {
                if mask >> u & 1 == 1 {
                    child.add_edge(u, k);
                }
            }
            if !self.feasible(&child)? {
                continue;
            }
            let key = canon::canonical_key(&child).expect("n <= 16 in exact search");
            if !self.seen[k + 1].insert(key) {
                continue;
            }
            if k + 1 == self.query.n {
                self.record(&child, key);
            }
            self.dfs(&child, k + 1)?;
        }
        Ok(())
    }
}

/// Exact RT(n, m, K_t) by isomorph-free vertex-by-vertex extension with
/// feasibility pruning on the clique bound and the running independence
/// number (both constraints are hereditary under taking induced subgraphs).
///
/// Orders up to [`DEFAULT_EXACT_LIMIT`] are the comfortable full-enumeration
/// regime; anything up to the canonical-form limit is accepted but may need
/// a large budget.
pub fn rt_exact(query: &RtQuery, budget: &mut Budget) -> Result<RtRecord, RtError> {
    if query.n > canon::MAX_CANON_N {
        return Err(RtError::Domain(format!(
            "exact search supports n <= {}, got {}",
            canon::MAX_CANON_N,
            query.n
        )));
    }
    let started = std::time::Instant::now();
    // When m > n the independence constraint is vacuous.
    let skip_alpha = query.m > ratio::from_usize(query.n);
    let mut search = ExactSearch {
        query,
        budget,
        seen: (0..=query.n).map(|_| HashSet::new()).collect(),
        best: None,
        witnesses: BTreeSet::new(),
        skip_alpha,
    };
    let empty = Graph::new(0);
    let mut exact = true;
    let mut outcome = if query.n == 0 {
        search.best = Some(0);
        Ok(())
    } else {
        search.dfs(&empty, 0)
    };
    if query.n == 0 {
        // The 0-vertex graph vacuously satisfies both constraints.
        outcome = Ok(());
    }
    match outcome {
        Ok(()) => {}
        Err(RtError::Certify(certify::CertifyError::Inconclusive { .. })) => exact = false,
        Err(e) => return Err(e),
    }
    let witnesses: Vec<String> = if query.n == 0 {
        vec![io::to_graph6(&Graph::new(0))]
    } else {
        search
            .witnesses
            .iter()
            .map(|key| {
                let g = Graph::from_triangle_bits(key.n, &unpack_key(key));
                io::to_graph6(&g)
            })
            .collect()
    };
    let value = match search.best {
        Some(e) => RtValue::Edges(e),
        None => RtValue::Empty,
    };
    Ok(RtRecord {
        query: query.clone(),
        value,
        exact,
        witnesses: if value == RtValue::Empty { Vec::new() } else { witnesses },
        stats: RtStats { nodes: budget.used, wall_ms: started.elapsed().as_millis() as u64 },
    })
}

fn unpack_key(key: &CanonKey) -> Vec<u64> {
    let m = key.n * key.n.saturating_sub(1) / 2;
    let mut packed = vec![0u64; crate::bits::words_for(m).max(1)];
    for p in 0..m {
        if key.bits >> (127 - p) & 1 == 1 {
            crate::bits::set_bit(&mut packed, p);
        }
    }
    packed
}

// ---------------------------------------------------------------------------
// Brute-force oracle: every labelled graph, subset-enumeration invariants
// ---------------------------------------------------------------------------

/// Clique number and independence number of a labelled adjacency-mask graph,
/// by enumerating all vertex subsets.
fn naive_omega_alpha(rows: &[u32], n: usize) -> (usize, usize) {
    let mut omega = 0usize;
    let mut alpha = 0usize;
    for subset in 0u32..(1u32 << n) {
        let size = subset.count_ones() as usize;
        if size <= omega && size <= alpha {
            continue;
        }
        let mut clique = true;
        let mut indep = true;
        let mut m = subset;
        while m != 0 && (clique || indep) {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let others = subset & !(1u32 << v);
            if others & !rows[v] != 0 {
                clique = false;
            }
            if others & rows[v] != 0 {
                indep = false;
            }
        }
        if clique && size > omega {
            omega = size;
        }
        if indep && size > alpha {
            alpha = size;
        }
    }
    (omega, alpha)
}

#[derive(Clone)]
struct OracleAcc {
    best: Option<usize>,
    masks: Vec<u64>,
    nodes: u64,
}

/// RT(n, m, K_t) by unpruned enumeration over all 2^(n(n-1)/2) labelled
/// graphs. Deliberately naive: this is the independent cross-check for
/// `rt_exact`.
pub fn rt_oracle(query: &RtQuery) -> Result<RtRecord, RtError> {
    let n = query.n;
    if n > ORACLE_LIMIT {
        return Err(RtError::Domain(format!("oracle supports n <= {ORACLE_LIMIT}, got {n}")));
    }
    let started = std::time::Instant::now();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let bits = pairs.len() as u32;
    let m = query.m.clone();
    let t = query.t;
    let pairs_ref = &pairs;

    let fold = |mut acc: OracleAcc, mask: u64| {
        let mut rows = [0u32; ORACLE_LIMIT];
        for (b, &(u, v)) in pairs_ref.iter().enumerate() {
            if mask >> b & 1 == 1 {
                rows[u] |= 1 << v;
                rows[v] |= 1 << u;
            }
        }
        acc.nodes += 1;
        let (omega, alpha) = naive_omega_alpha(&rows[..n.max(1)], n);
        if omega >= t || !alpha_lt_m(alpha, &m) {
            return acc;
        }
        let e = mask.count_ones() as usize;
        match acc.best {
            Some(b) if e < b => {}
            Some(b) if e == b => {
                if acc.masks.len() < MAX_WITNESSES {
                    acc.masks.push(mask);
                }
            }
            _ => {
                acc.best = Some(e);
                acc.masks = vec![mask];
            }
        }
        acc
    };
    let merge = |mut a: OracleAcc, mut b: OracleAcc| {
        let nodes = a.nodes + b.nodes;
        let mut out = match (a.best, b.best) {
            (None, _) => b,
            (_, None) => a,
            (Some(x), Some(y)) if x > y => a,
            (Some(x), Some(y)) if y > x => b,
            _ => {
                a.masks.append(&mut b.masks);
                a.masks.sort_unstable();
                a.masks.truncate(MAX_WITNESSES);
                a
            }
        };
        out.nodes = nodes;
        out
    };
    let acc = exec::fold_range(
        1u64 << bits,
        || OracleAcc { best: None, masks: Vec::new(), nodes: 0 },
        fold,
        merge,
    );
    let witnesses = acc
        .masks
        .iter()
        .map(|&mask| {
            let mut g = Graph::new(n);
            for (b, &(u, v)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            io::to_graph6(&g)
        })
        .collect();
    Ok(RtRecord {
        query: query.clone(),
        value: match acc.best {
            Some(e) => RtValue::Edges(e),
            None => RtValue::Empty,
        },
        exact: true,
        witnesses: if acc.best.is_none() { Vec::new() } else { witnesses },
        stats: RtStats { nodes: acc.nodes, wall_ms: started.elapsed().as_millis() as u64 },
    })
}

// ---------------------------------------------------------------------------
// Closed-form density evaluators
// ---------------------------------------------------------------------------

fn check_delta(delta: &Ratio) -> Result<(), RtError> {
    use num::{One, Zero};
    if *delta <= Ratio::zero() || *delta >= Ratio::one() {
        return Err(RtError::Domain(format!("delta must lie in (0,1), got {}", delta)));
    }
    Ok(())
}

/// Density formula for even cliques K_{2r}: (3r-5)/(3r-2) + delta - delta^2.
pub fn f_even(r: usize, delta: &Ratio) -> Result<Ratio, RtError> {
    if r < 2 {
        return Err(RtError::Domain(format!("f_even needs r >= 2, got {r}")));
    }
    check_delta(delta)?;
    Ok(ratio::frac(3 * r as i64 - 5, 3 * r as i64 - 2) + delta.clone()
        - delta.clone() * delta.clone())
}

/// Density formula for odd cliques K_{2r+1}: (r-1)/r + delta.
pub fn f_odd(r: usize, delta: &Ratio) -> Result<Ratio, RtError> {
    if r < 1 {
        return Err(RtError::Domain("f_odd needs r >= 1".into()));
    }
    check_delta(delta)?;
    Ok(ratio::frac(r as i64 - 1, r as i64) + delta.clone())
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// Append-only JSON-lines store of RT records keyed by (n, m, t).
pub struct Catalog {
    path: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorruptLine {
    pub line: usize,
    pub error: String,
}

impl Catalog {
    pub fn at(path: impl AsRef<Path>) -> Self {
        Catalog { path: path.as_ref().to_path_buf() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Loads all records, reporting corrupt lines by number; the store stays
    /// usable around them.
    pub fn load(&self) -> Result<(Vec<RtRecord>, Vec<CorruptLine>), RtError> {
        let mut records = Vec::new();
        let mut corrupt = Vec::new();
        let content = match std::fs::read_to_string(&self.path) {
            Ok(c) => c,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((records, corrupt)),
            Err(e) => return Err(RtError::CatalogIo(e.to_string())),
        };
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<RtRecord>(line) {
                Ok(r) => records.push(r),
                Err(e) => corrupt.push(CorruptLine { line: i + 1, error: e.to_string() }),
            }
        }
        Ok((records, corrupt))
    }

    /// Re-certifies a record's witnesses against its query: K_t-free,
    /// alpha < m, edge count equal to the recorded value.
    pub fn recertify(record: &RtRecord, budget: &mut Budget) -> Result<(), RtError> {
        for w in &record.witnesses {
            let g =
                io::from_graph6(w).map_err(|e| RtError::BadWitness(format!("{w}: {e}")))?;
            if certify::has_clique(&g, record.query.t, budget)?.kind == CertKind::Clique {
                return Err(RtError::BadWitness(format!("{w} contains K_{}", record.query.t)));
            }
            let (alpha, _) = certify::independence_number(&g, budget)?;
            if !alpha_lt_m(alpha, &record.query.m) {
                return Err(RtError::BadWitness(format!("{w} has alpha {alpha}")));
            }
            if RtValue::Edges(g.edge_count()) != record.value {
                return Err(RtError::BadWitness(format!(
                    "{w} has {} edges, record says {:?}",
                    g.edge_count(),
                    record.value
                )));
            }
        }
        Ok(())
    }

    /// Validates the record's witnesses, rejects key conflicts, then appends.
    /// Re-putting an identical value is a no-op.
    pub fn put(&self, record: &RtRecord, budget: &mut Budget) -> Result<(), RtError> {
        if record.exact {
            Self::recertify(record, budget)?;
        }
        let (existing, _) = self.load()?;
        for r in &existing {
            if r.query == record.query {
                if r.value != record.value || r.exact != record.exact {
                    return Err(RtError::CatalogConflict {
                        key: record.query.key(),
                        stored: format!("{:?}", r.value),
                        new: format!("{:?}", record.value),
                    });
                }
                return Ok(());
            }
        }
        let line = serde_json::to_string(record).map_err(|e| RtError::CatalogIo(e.to_string()))?;
        let mut f = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| RtError::CatalogIo(e.to_string()))?;
        writeln!(f, "{line}").map_err(|e| RtError::CatalogIo(e.to_string()))?;
        Ok(())
    }

    pub fn get(&self, query: &RtQuery) -> Result<Option<RtRecord>, RtError> {
        let (records, _) = self.load()?;
        Ok(records.into_iter().find(|r| &r.query == query))
    }
}
