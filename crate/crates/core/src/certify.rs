//! Exact certification kernels: clique number, independence number, short
//! odd cycles, saturation, and the saturated-graph property report.
//!
//! Every search is exact. A witness is always re-checkable against the
//! adjacency structure; an absence answer is only produced by a search that
//! ran to completion. Exceeding the node budget is an explicit inconclusive
//! error, never a silent fallback.

use crate::bits;
use crate::graph::Graph;
use crate::ratio::{self, Ratio};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error("inconclusive: node budget of {limit} exhausted after {used} nodes")]
    Inconclusive { limit: u64, used: u64 },
    #[error("input already contains a K_{t}")]
    AlreadyHasClique { t: usize },
}

/// Node budget shared across a search; ticks are counted per branching step.
#[derive(Debug, Clone)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    #[inline(always)]
    fn tick(&mut self) -> Result<(), CertifyError> {
        self.used += 1;
        if self.used > self.limit {
            Err(CertifyError::Inconclusive { limit: self.limit, used: self.used })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    Clique,
    IndependentSet,
    OddCycle,
    Absence,
}

/// A verified witness (or exhaustive-absence token) for a queried property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub vertices: Vec<usize>,
    /// Search nodes explored while producing this certificate.
    pub statistic: u64,
    /// The property queried, e.g. `clique>=4` or `odd-cycle<=7`.
    pub target: String,
}

/// Re-validates a witness against the adjacency structure. This is the
/// independent validator: it never consults the search that produced the
/// certificate.
pub fn validate_certificate(g: &Graph, cert: &Certificate) -> bool {
    let vs = &cert.vertices;
    if vs.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut sorted = vs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vs.len() {
        return false;
    }
    match cert.kind {
        CertKind::Clique => {
            (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| g.has_edge(vs[i], vs[j])))
        }
        CertKind::IndependentSet => {
            (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| !g.has_edge(vs[i], vs[j])))
        }
        CertKind::OddCycle => {
            let l = vs.len();
            matches!(l, 3 | 5 | 7) && (0..l).all(|i| g.has_edge(vs[i], vs[(i + 1) % l]))
        }
        CertKind::Absence => vs.is_empty(),
    }
}

// ---------------------------------------------------------------------------
// Clique search
// ---------------------------------------------------------------------------

struct CliqueSearch<'a> {
    g: &'a Graph,
    words: usize,
    best: Vec<usize>,
    current: Vec<usize>,
    /// Stop as soon as a clique of this size is found.
    target: Option<usize>,
    budget: &'a mut Budget,
}

impl<'a> CliqueSearch<'a> {
    /// Greedy sequential colouring of the candidate set, returned sorted by
    /// colour number (1-based). The colour number of a vertex bounds the
    /// largest clique containing it within the candidates.
    fn color_order(&self, cands: &[u64]) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(bits::count_ones(cands));
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for v in bits::iter_ones(cands) {
            let mut placed = false;
            for (c, class) in classes.iter_mut().enumerate() {
                if bits::is_disjoint(class, self.g.row(v)) {
                    bits::set_bit(class, v);
                    out.push((c + 1, v));
                    placed = true;
                    break;
                }
            }
            if !placed {
                let mut class = vec![0u64; self.words];
                bits::set_bit(&mut class, v);
                classes.push(class);
                out.push((classes.len(), v));
            }
        }
        out.sort_unstable();
        out
    }

    fn goal(&self) -> usize {
        match self.target {
            Some(t) => t,
            None => self.best.len() + 1,
        }
    }

    fn expand(&mut self, cands: &mut Vec<u64>) -> Result<bool, CertifyError> {
        self.budget.tick()?;
        if let Some(t) = self.target {
            if self.current.len() >= t {
                self.best = self.current.clone();
                return Ok(true);
            }
        }
        if bits::is_empty(cands) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return Ok(false);
        }
        let colored = self.color_order(cands);
        // Largest colours first; once the bound fails it fails for the rest.
        for &(color, v) in colored.iter().rev() {
            if self.current.len() + color < self.goal() {
                return Ok(false);
            }
            self.current.push(v);
            let mut next = vec![0u64; self.words];
            bits::and_into(&mut next, cands, self.g.row(v));
            let done = self.expand(&mut next)?;
            self.current.pop();
            if done {
                return Ok(true);
            }
            bits::clear_bit(cands, v);
        }
        Ok(false)
    }

    fn run(&mut self, order: &[usize]) -> Result<(), CertifyError> {
        let n = self.g.n();
        let mut later = vec![0u64; self.words];
        bits::fill_upto(&mut later, n);
        for &v in order {
            bits::clear_bit(&mut later, v);
            if 1 + bits::count_ones(&later) < self.goal() {
                break;
            }
            self.current.push(v);
            let mut cands = vec![0u64; self.words];
            bits::and_into(&mut cands, &later, self.g.row(v));
            let done = self.expand(&mut cands)?;
            self.current.pop();
            if done {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut remaining: Vec<u64> = vec![0; g.words()];
    bits::fill_upto(&mut remaining, n);
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = bits::iter_ones(&remaining)
            .min_by_key(|&v| (bits::intersection_count(g.row(v), &remaining), v))
            .expect("remaining non-empty");
        order.push(v);
        bits::clear_bit(&mut remaining, v);
    }
    order
}

fn clique_kernel(
    g: &Graph,
    target: Option<usize>,
    budget: &mut Budget,
) -> Result<Vec<usize>, CertifyError> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    if target == Some(1) {
        return Ok(vec![0]);
    }
    let order = degeneracy_order(g);
    let mut search = CliqueSearch {
        g,
        words: g.words(),
        best: vec![order[0]],
        current: Vec::new(),
        target,
        budget,
    };
    search.run(&order)?;
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

/// Exact clique number with a witness clique, by branch and bound with
/// greedy-colouring upper bounds over bitset candidate rows.
pub fn max_clique(g: &Graph, budget: &mut Budget) -> Result<(usize, Certificate), CertifyError> {
    let witness = clique_kernel(g, None, budget)?;
    let cert = Certificate {
        kind: CertKind::Clique,
        vertices: witness.clone(),
        statistic: budget.used,
        target: "max-clique".into(),
    };
    debug_assert!(validate_certificate(g, &cert));
    Ok((witness.len(), cert))
}

/// Decision form: a clique certificate of size `t`, or an exhaustive absence
/// certificate.
pub fn has_clique(g: &Graph, t: usize, budget: &mut Budget) -> Result<Certificate, CertifyError> {
    assert!(t >= 1, "clique order must be positive");
    let witness = clique_kernel(g, Some(t), budget)?;
    let target = format!("clique>={t}");
    if witness.len() >= t {
        let cert = Certificate {
            kind: CertKind::Clique,
            vertices: witness[..t].to_vec(),
            statistic: budget.used,
            target,
        };
        debug_assert!(validate_certificate(g, &cert));
        Ok(cert)
    } else {
        Ok(Certificate { kind: CertKind::Absence, vertices: Vec::new(), statistic: budget.used, target })
    }
}

/// Exact independence number via clique search on the complement.
pub fn independence_number(
    g: &Graph,
    budget: &mut Budget,
) -> Result<(usize, Certificate), CertifyError> {
    let (size, cert) = max_clique(&g.complement(), budget)?;
    let cert = Certificate {
        kind: CertKind::IndependentSet,
        vertices: cert.vertices,
        statistic: cert.statistic,
        target: "alpha".into(),
    };
    debug_assert!(validate_certificate(g, &cert));
    Ok((size, cert))
}

// ---------------------------------------------------------------------------
// Short odd cycles
// ---------------------------------------------------------------------------

fn bfs(g: &Graph, source: usize) -> (Vec<usize>, Vec<usize>) {
    const INF: usize = usize::MAX;
    let mut dist = vec![INF; g.n()];
    let mut parent = vec![INF; g.n()];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if dist[v] == INF {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Splits a closed odd walk (listed without the repeated endpoint) into a
/// simple odd cycle of no greater length.
fn reduce_walk_to_cycle(mut walk: Vec<usize>) -> Vec<usize> {
    loop {
        let l = walk.len();
        let mut seen = std::collections::HashMap::new();
        let mut split = None;
        for (i, &v) in walk.iter().enumerate() {
            if let Some(&j) = seen.get(&v) {
                split = Some((j, i));
                break;
            }
            seen.insert(v, i);
        }
        let Some((i, j)) = split else {
            return walk;
        };
        // Two closed walks of lengths (j - i) and (l - (j - i)); exactly one
        // of them is odd because the total is odd.
        let inner: Vec<usize> = walk[i..j].to_vec();
        if inner.len() % 2 == 1 {
            walk = inner;
        } else {
            let mut outer: Vec<usize> = walk[..i].to_vec();
            outer.extend_from_slice(&walk[j..]);
            walk = outer;
        }
        assert!(walk.len() >= 3 && walk.len() % 2 == 1 && walk.len() < l);
    }
}

/// Finds a C3, C5, or C7 (shortest first) or reports exhaustive absence.
///
/// BFS from each vertex tracks parity-annotated distances; an edge joining
/// two vertices at equal parity closes an odd walk through the source, and
/// the minimum such length over all sources is the odd girth.
pub fn find_short_odd_cycle(g: &Graph) -> Certificate {
    let n = g.n();
    let edges = g.edges();
    let mut best: Option<(usize, usize, (usize, usize))> = None;
    let mut work: u64 = 0;
    for s in 0..n {
        let (dist, _) = bfs(g, s);
        work += n as u64;
        for &(u, v) in &edges {
            if dist[u] == usize::MAX || dist[v] == usize::MAX {
                continue;
            }
            if (dist[u] + dist[v]) % 2 == 0 {
                let len = dist[u] + dist[v] + 1;
                if best.is_none_or(|(b, _, _)| len < b) {
                    best = Some((len, s, (u, v)));
                }
            }
        }
    }
    let target = "odd-cycle<=7".to_string();
    match best {
        Some((len, s, (u, v))) if len <= 7 => {
            let (_, parent) = bfs(g, s);
            let path_to = |mut x: usize| {
                let mut p = vec![x];
                while x != s {
                    x = parent[x];
                    p.push(x);
                }
                p.reverse();
                p
            };
            let mut walk = path_to(u);
            let back = path_to(v);
            for &x in back.iter().skip(1).rev() {
                walk.push(x);
            }
            let cycle = reduce_walk_to_cycle(walk);
            debug_assert_eq!(cycle.len(), len);
            let cert =
                Certificate { kind: CertKind::OddCycle, vertices: cycle, statistic: work, target };
            debug_assert!(validate_certificate(g, &cert));
            cert
        }
        _ => Certificate { kind: CertKind::Absence, vertices: Vec::new(), statistic: work, target },
    }
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

/// Deterministic orderings of the vertex pairs attempted by `saturate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairOrder {
    Lex,
    Seeded(u64),
}

/// Adds edges in the given pair order until the graph is edge-maximal
/// K_t-free. Rejects inputs that already contain a K_t.
///
/// A single pass suffices: once an edge would close a K_t it stays unsafe in
/// every supergraph.
pub fn saturate(
    g: &Graph,
    t: usize,
    order: PairOrder,
    budget: &mut Budget,
) -> Result<Graph, CertifyError> {
    assert!(t >= 2, "clique order must be at least 2");
    if has_clique(g, t, budget)?.kind == CertKind::Clique {
        return Err(CertifyError::AlreadyHasClique { t });
    }
    let n = g.n();
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    if let PairOrder::Seeded(seed) = order {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        pairs.shuffle(&mut rng);
    }
    let mut out = g.clone();
    let mut common = vec![0u64; out.words()];
    for (u, v) in pairs {
        if out.has_edge(u, v) {
            continue;
        }
        bits::and_into(&mut common, out.row(u), out.row(v));
        let creates = if t == 2 {
            true
        } else {
            let members = bits::to_vec(&common);
            let (sub, _) = out.induced(&members).expect("members in range");
            has_clique(&sub, t - 2, budget)?.kind == CertKind::Clique
        };
        if !creates {
            out.add_edge(u, v);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Saturated-graph property report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ClauseReport {
    pub name: String,
    pub holds: bool,
    pub vacuous: bool,
    pub witness: Option<Vec<usize>>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub clauses: Vec<ClauseReport>,
}

impl SaturationReport {
    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }
}

/// Largest induced K_s-free subgraph, by include/exclude search with a
/// size bound. Decides whether every large vertex subset induces a K_s.
fn max_ks_free_subset(
    g: &Graph,
    s: usize,
    budget: &mut Budget,
) -> Result<Vec<usize>, CertifyError> {
    fn dfs(
        g: &Graph,
        s: usize,
        v: usize,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<(), CertifyError> {
        budget.tick()?;
        if chosen.len() + (g.n() - v) <= best.len() {
            return Ok(());
        }
        if v == g.n() {
            if chosen.len() > best.len() {
                *best = chosen.clone();
            }
            return Ok(());
        }
        let keeps_free = if s == 1 {
            false
        } else {
            chosen.push(v);
            let (sub, _) = g.induced(chosen).expect("in range");
            let free = has_clique(&sub, s, budget)?.kind == CertKind::Absence;
            chosen.pop();
            free
        };
        if keeps_free {
            chosen.push(v);
            dfs(g, s, v + 1, chosen, best, budget)?;
            chosen.pop();
        }
        dfs(g, s, v + 1, chosen, best, budget)
    }
    let mut best = Vec::new();
    let mut chosen = Vec::new();
    dfs(g, s, 0, &mut chosen, &mut best, budget)?;
    Ok(best)
}

/// Checks the three structural properties of saturated K_{2r+1}-free graphs
/// with large minimum degree: a maximum-degree cap, clique-richness of every
/// large vertex subset, and a codegree lower bound for edges whose endpoints
/// do not dominate the graph. Reports, never aborts.
pub fn check_saturated_properties(
    g: &Graph,
    r: usize,
    delta: &Ratio,
    budget: &mut Budget,
) -> Result<SaturationReport, CertifyError> {
    assert!(r >= 1);
    let n = g.n();
    let nr = ratio::from_usize(n);
    let mut clauses = Vec::new();

    // (i) max degree below ((r-1)/r + 2r*delta) n.
    let cap = (ratio::frac(r as i64 - 1, r as i64) + ratio::int(2 * r as i64) * delta.clone())
        * nr.clone();
    let (max_deg, argmax) = (0..n).map(|v| (g.degree(v), v)).max().unwrap_or((0, 0));
    let holds_i = ratio::from_usize(max_deg) < cap;
    clauses.push(ClauseReport {
        name: "max-degree".into(),
        holds: holds_i,
        vacuous: false,
        witness: if holds_i { None } else { Some(vec![argmax]) },
        detail: format!("max degree {max_deg}, bound {}", ratio::to_f64(&cap)),
    });

    // (ii) every Q with |Q| >= ((2r-3)/(2r) + r*delta) n induces a K_{2r-2}.
    let threshold = (ratio::frac(2 * r as i64 - 3, 2 * r as i64)
        + ratio::int(r as i64) * delta.clone())
        * nr.clone();
    let q_min = ratio::usize_of(&threshold.ceil().to_integer()).unwrap_or(usize::MAX);
    if q_min > n || 2 * r <= 2 {
        clauses.push(ClauseReport {
            name: "large-sets-have-clique".into(),
            holds: true,
            vacuous: true,
            witness: None,
            detail: format!("no subset of required size {q_min} exists (n = {n})"),
        });
    } else {
        let free = max_ks_free_subset(g, 2 * r - 2, budget)?;
        let holds = free.len() < q_min.max(1);
        clauses.push(ClauseReport {
            name: "large-sets-have-clique".into(),
            holds,
            vacuous: false,
            witness: if holds { None } else { Some(free.clone()) },
            detail: format!(
                "largest K_{}-free subset has {} vertices, threshold {}",
                2 * r - 2,
                free.len(),
                q_min
            ),
        });
    }

    // (iii) edges xy with N(x) ∪ N(y) != V satisfy
    // |N(x) ∩ N(y)| >= d(x)+d(y) - ((r-1)/r + 8r*delta) n.
    let slack =
        (ratio::frac(r as i64 - 1, r as i64) + ratio::int(8 * r as i64) * delta.clone()) * nr;
    let mut witness_iii = None;
    let mut union_row = vec![0u64; g.words()];
    for (u, v) in g.edges() {
        for w in 0..g.words() {
            union_row[w] = g.row(u)[w] | g.row(v)[w];
        }
        let covers = (0..n).all(|x| x == u || x == v || bits::test_bit(&union_row, x));
        if covers {
            continue;
        }
        let codeg = bits::intersection_count(g.row(u), g.row(v));
        let bound = ratio::from_usize(g.degree(u) + g.degree(v)) - slack.clone();
        if ratio::from_usize(codeg) < bound {
            witness_iii = Some(vec![u, v]);
            break;
        }
    }
    clauses.push(ClauseReport {
        name: "codegree-of-non-dominating-edges".into(),
        holds: witness_iii.is_none(),
        vacuous: false,
        witness: witness_iii,
        detail: "codegree >= d(x)+d(y) - ((r-1)/r + 8r*delta) n".into(),
    });

    Ok(SaturationReport { clauses })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn cliques_on_known_graphs() {
        let mut b = budget();
        assert_eq!(max_clique(&Graph::complete(5), &mut b).unwrap().0, 5);
        assert_eq!(max_clique(&Graph::cycle(5), &mut b).unwrap().0, 2);
        assert_eq!(max_clique(&Graph::petersen(), &mut b).unwrap().0, 2);
        assert_eq!(max_clique(&Graph::new(0), &mut b).unwrap().0, 0);
        assert_eq!(max_clique(&Graph::new(3), &mut b).unwrap().0, 1);
    }

    #[test]
    fn independence_on_known_graphs() {
        let mut b = budget();
        assert_eq!(independence_number(&Graph::cycle(5), &mut b).unwrap().0, 2);
        assert_eq!(independence_number(&Graph::petersen(), &mut b).unwrap().0, 4);
        let blown = Graph::cycle(5).blow_up(3).unwrap();
        let (alpha, cert) = independence_number(&blown, &mut b).unwrap();
        assert_eq!(alpha, 6);
        assert!(validate_certificate(&blown, &cert));
    }

    #[test]
    fn blow_up_preserves_clique_and_scales_alpha() {
        let mut b = Budget::new(u64::MAX);
        for g in [Graph::cycle(5), Graph::complete(4), Graph::petersen()] {
            let w0 = max_clique(&g, &mut b).unwrap().0;
            let a0 = independence_number(&g, &mut b).unwrap().0;
            for t in 1..=3 {
                let gt = g.blow_up(t).unwrap();
                assert_eq!(max_clique(&gt, &mut b).unwrap().0, w0);
                assert_eq!(independence_number(&gt, &mut b).unwrap().0, t * a0);
                assert_eq!(gt.edge_count(), t * t * g.edge_count());
            }
        }
    }

    #[test]
    fn blow_up_invariants_exhaustive_small() {
        // e(G_t) = t^2 e(G) and clique number preserved, for all graphs on
        // up to 6 vertices and t <= 3.
        let mut cb = u64::MAX;
        let levels = canon::enumerate_levels(6, &|_| true, &mut cb).unwrap();
        let mut b = Budget::new(u64::MAX);
        for level in &levels {
            for g in level {
                let w = max_clique(g, &mut b).unwrap().0;
                for t in 1..=3 {
                    let gt = g.blow_up(t).unwrap();
                    assert_eq!(gt.edge_count(), t * t * g.edge_count());
                    assert_eq!(max_clique(&gt, &mut b).unwrap().0, w);
                }
            }
        }
    }

    #[test]
    fn has_clique_examples() {
        let mut b = budget();
        let c5 = Graph::cycle(5);
        assert_eq!(has_clique(&c5, 3, &mut b).unwrap().kind, CertKind::Absence);
        let j = Graph::join_complete(&[c5.clone(), c5]).unwrap();
        assert_eq!(has_clique(&j, 5, &mut b).unwrap().kind, CertKind::Absence);
        let four = has_clique(&j, 4, &mut b).unwrap();
        assert_eq!(four.kind, CertKind::Clique);
        assert!(validate_certificate(&j, &four));
        assert_eq!(max_clique(&j, &mut b).unwrap().0, 4);
        let blown = Graph::complete(3).blow_up(2).unwrap();
        assert_eq!(has_clique(&blown, 4, &mut b).unwrap().kind, CertKind::Absence);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let g = Graph::complete(12);
        let mut b = Budget::new(3);
        assert!(matches!(max_clique(&g, &mut b), Err(CertifyError::Inconclusive { .. })));
    }

    #[test]
    fn exact_kernels_match_naive_enumeration_small() {
        // Oracle equivalence over every graph on up to 7 vertices; the n = 8
        // sweep lives in the integration suite.
        let mut cb = u64::MAX;
        let levels = canon::enumerate_levels(7, &|_| true, &mut cb).unwrap();
        let mut b = Budget::new(u64::MAX);
        for level in &levels {
            for g in level {
                assert_eq!(max_clique(g, &mut b).unwrap().0, naive::max_clique_size(g));
                assert_eq!(independence_number(g, &mut b).unwrap().0, naive::alpha(g));
            }
        }
    }

    #[test]
    fn odd_cycle_detection_on_known_graphs() {
        let c7 = find_short_odd_cycle(&Graph::cycle(7));
        assert_eq!(c7.kind, CertKind::OddCycle);
        assert_eq!(c7.vertices.len(), 7);
        assert_eq!(find_short_odd_cycle(&Graph::complete_bipartite(3, 3)).kind, CertKind::Absence);
        assert_eq!(find_short_odd_cycle(&Graph::cycle(9)).kind, CertKind::Absence);
        // Petersen has girth 5, so the shortest odd cycle is a C5.
        let pet = find_short_odd_cycle(&Graph::petersen());
        assert_eq!(pet.vertices.len(), 5);
        assert!(validate_certificate(&Graph::petersen(), &pet));
    }

    #[test]
    fn odd_cycle_matches_trace_oracle_exhaustive_small() {
        let mut cb = u64::MAX;
        let levels = canon::enumerate_levels(6, &|_| true, &mut cb).unwrap();
        for level in &levels {
            for g in level {
                let cert = find_short_odd_cycle(g);
                assert_eq!(
                    cert.kind == CertKind::OddCycle,
                    naive::has_short_odd_cycle(g),
                    "graph {:?}",
                    g.edges()
                );
            }
        }
    }

    #[test]
    fn odd_cycle_matches_trace_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..300 {
            let n = rng.random_range(1..=10usize);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.3) {
                        g.add_edge(u, v);
                    }
                }
            }
            let cert = find_short_odd_cycle(&g);
            let found = cert.kind == CertKind::OddCycle;
            assert_eq!(found, naive::has_short_odd_cycle(&g), "graph {:?}", g.edges());
            if found {
                assert!(validate_certificate(&g, &cert));
            }
        }
    }

    #[test]
    fn saturate_postconditions() {
        let mut b = budget();
        // Saturating the empty graph on 4 vertices against triangles yields
        // an edge-maximal triangle-free graph.
        let sat = saturate(&Graph::new(4), 3, PairOrder::Lex, &mut b).unwrap();
        assert_eq!(has_clique(&sat, 3, &mut b).unwrap().kind, CertKind::Absence);
        for u in 0..4 {
            for v in (u + 1)..4 {
                if !sat.has_edge(u, v) {
                    let mut g2 = sat.clone();
                    g2.add_edge(u, v);
                    assert_eq!(has_clique(&g2, 3, &mut b).unwrap().kind, CertKind::Clique);
                }
            }
        }
        // K4 is already saturated for t = 5.
        let k4 = Graph::complete(4);
        assert_eq!(saturate(&k4, 5, PairOrder::Lex, &mut b).unwrap(), k4);
        // Every chord of C5 closes a triangle.
        let c5 = Graph::cycle(5);
        assert_eq!(saturate(&c5, 3, PairOrder::Lex, &mut b).unwrap(), c5);
        assert!(matches!(
            saturate(&Graph::complete(3), 3, PairOrder::Lex, &mut b),
            Err(CertifyError::AlreadyHasClique { t: 3 })
        ));
    }

    #[test]
    fn saturate_seeded_order_is_maximal_too() {
        let mut b = budget();
        for seed in 0..5 {
            let sat = saturate(&Graph::new(6), 4, PairOrder::Seeded(seed), &mut b).unwrap();
            assert_eq!(has_clique(&sat, 4, &mut b).unwrap().kind, CertKind::Absence);
            for u in 0..6 {
                for v in (u + 1)..6 {
                    if !sat.has_edge(u, v) {
                        let mut g2 = sat.clone();
                        g2.add_edge(u, v);
                        assert_eq!(has_clique(&g2, 4, &mut b).unwrap().kind, CertKind::Clique);
                    }
                }
            }
        }
    }

    #[test]
    fn saturated_property_report_on_composite() {
        let mut b = budget();
        let c5 = Graph::cycle(5);
        let j = Graph::join_complete(&[c5.clone(), c5]).unwrap();
        let report = check_saturated_properties(&j, 2, &ratio::frac(3, 10), &mut b).unwrap();
        // Max degree 7 against bound (1/2 + 2*2*3/10)*10 = 17.
        assert!(report.clauses[0].holds);
        assert!(report.clauses[0].detail.contains("max degree 7"));
    }

    #[test]
    fn saturated_report_vacuous_clause() {
        let mut b = budget();
        let g = Graph::cycle(5);
        let report = check_saturated_properties(&g, 2, &ratio::frac(9, 10), &mut b).unwrap();
        assert!(report.clauses[1].vacuous && report.clauses[1].holds);
    }

    #[test]
    fn saturated_report_on_random_saturated_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut b = Budget::new(u64::MAX);
        for _ in 0..10 {
            let n = rng.random_range(6..=10usize);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.3) {
                        g.add_edge(u, v);
                    }
                }
            }
            let r = 2;
            if has_clique(&g, 2 * r + 1, &mut b).unwrap().kind == CertKind::Clique {
                continue;
            }
            let sat = saturate(&g, 2 * r + 1, PairOrder::Lex, &mut b).unwrap();
            // The report must evaluate every clause without panicking; clause
            // truth depends on the hypothesis parameters.
            let rep = check_saturated_properties(&sat, r, &ratio::frac(1, 4), &mut b).unwrap();
            assert_eq!(rep.clauses.len(), 3);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Saturation contract on arbitrary K_t-free inputs: the result is
            // a K_t-free supergraph and every remaining non-edge closes a K_t.
            #[test]
            fn saturate_is_maximal(seed in any::<u64>(), n in 1usize..8, t in 3usize..6) {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut g = Graph::new(n);
                for u in 0..n {
                    for v in (u + 1)..n {
                        if rng.random_bool(0.25) {
                            g.add_edge(u, v);
                        }
                    }
                }
                let mut b = Budget::new(u64::MAX);
                prop_assume!(has_clique(&g, t, &mut b).unwrap().kind == CertKind::Absence);
                let sat = saturate(&g, t, PairOrder::Seeded(seed), &mut b).unwrap();
                prop_assert_eq!(has_clique(&sat, t, &mut b).unwrap().kind, CertKind::Absence);
                for (u, v) in g.edges() {
                    prop_assert!(sat.has_edge(u, v), "saturation must not drop edges");
                }
                for u in 0..n {
                    for v in (u + 1)..n {
                        if !sat.has_edge(u, v) {
                            let mut g2 = sat.clone();
                            g2.add_edge(u, v);
                            prop_assert_eq!(
                                has_clique(&g2, t, &mut b).unwrap().kind,
                                CertKind::Clique
                            );
                        }
                    }
                }
            }

            // Witnesses returned by the kernels always re-validate.
            #[test]
            fn witnesses_revalidate(seed in any::<u64>(), n in 0usize..9) {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut g = Graph::new(n);
                for u in 0..n {
                    for v in (u + 1)..n {
                        if rng.random_bool(0.5) {
                            g.add_edge(u, v);
                        }
                    }
                }
                let mut b = Budget::new(u64::MAX);
                let (_, clique) = max_clique(&g, &mut b).unwrap();
                prop_assert!(validate_certificate(&g, &clique));
                let (_, indep) = independence_number(&g, &mut b).unwrap();
                prop_assert!(validate_certificate(&g, &indep));
                let cyc = find_short_odd_cycle(&g);
                prop_assert!(validate_certificate(&g, &cyc));
            }
        }
    }

    #[test]
    fn certificates_serialize_to_contract_shape() {
        let mut b = budget();
        let (_, cert) = max_clique(&Graph::complete(3), &mut b).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["kind"], "clique");
        assert!(json["vertices"].is_array());
        assert!(json["statistic"].is_u64());
        assert!(json["target"].is_string());
    }

    #[test]
    fn validator_rejects_corrupt_witnesses() {
        let g = Graph::cycle(5);
        let bad = Certificate {
            kind: CertKind::Clique,
            vertices: vec![0, 2],
            statistic: 0,
            target: "x".into(),
        };
        assert!(!validate_certificate(&g, &bad));
        let dup = Certificate {
            kind: CertKind::IndependentSet,
            vertices: vec![0, 0],
            statistic: 0,
            target: "x".into(),
        };
        assert!(!validate_certificate(&g, &dup));
        let empty_absence = Certificate {
            kind: CertKind::Absence,
            vertices: vec![],
            statistic: 0,
            target: "x".into(),
        };
        assert!(validate_certificate(&g, &empty_absence));
    }
}
