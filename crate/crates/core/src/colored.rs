//! Coloured complete graphs with edge weights in {0, 1, 2} (green / blue /
//! red), the forbidden-pattern family, Zykov symmetrisation, the weighted
//! edge-count bound, and the constructive anchor partition.
//!
//! The degree of a vertex is the sum of its incident weights and e(G) is half
//! the degree sum, so a red edge counts twice as much as a blue one.

use crate::certify::{Budget, CertifyError};
use crate::ratio::{self, Ratio};
use rand::Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const GREEN: u8 = 0;
pub const BLUE: u8 = 1;
pub const RED: u8 = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoredError {
    #[error("weight {0} out of range (must be 0, 1, or 2)")]
    BadWeight(u8),
    #[error("expected {expected} upper-triangle weights for n = {n}, got {got}")]
    BadLength { n: usize, expected: usize, got: usize },
    #[error(transparent)]
    Budget(#[from] CertifyError),
    #[error("family parameter r must be at least 2, got {0}")]
    BadFamily(usize),
}

/// Complete graph with a symmetric {0,1,2} weight function, zero diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    w: Vec<u8>,
}

impl std::fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ColoredGraph(n={}, e={})", self.n, self.weighted_edges())
    }
}

impl ColoredGraph {
    pub fn new(n: usize) -> Self {
        ColoredGraph { n, w: vec![GREEN; n * n] }
    }

    /// Complete graph with every pair set to `weight`.
    pub fn uniform(n: usize, weight: u8) -> Self {
        assert!(weight <= 2);
        let mut c = ColoredGraph::new(n);
        for x in 0..n {
            for y in (x + 1)..n {
                c.set(x, y, weight);
            }
        }
        c
    }

    #[inline(always)]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline(always)]
    pub fn weight(&self, x: usize, y: usize) -> u8 {
        self.w[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, weight: u8) {
        assert!(weight <= 2 && x != y);
        self.w[x * self.n + y] = weight;
        self.w[y * self.n + x] = weight;
    }

    /// Weighted degree: sum of incident edge weights.
    pub fn degree(&self, x: usize) -> usize {
        (0..self.n).map(|y| self.weight(x, y) as usize).sum()
    }

    /// Half the degree sum, i.e. the total weight over unordered pairs.
    pub fn weighted_edges(&self) -> usize {
        let total: usize = (0..self.n).map(|x| self.degree(x)).sum();
        total / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|x| self.degree(x)).min().unwrap_or(0)
    }

    /// Upper-triangle weights in lexicographic pair order (0,1), (0,2), ...
    pub fn upper_triangle(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                out.push(self.weight(x, y));
            }
        }
        out
    }

    pub fn from_upper_triangle(n: usize, weights: &[u8]) -> Result<Self, ColoredError> {
        let expected = n * n.saturating_sub(1) / 2;
        if weights.len() != expected {
            return Err(ColoredError::BadLength { n, expected, got: weights.len() });
        }
        let mut c = ColoredGraph::new(n);
        let mut idx = 0;
        for x in 0..n {
            for y in (x + 1)..n {
                let w = weights[idx];
                if w > 2 {
                    return Err(ColoredError::BadWeight(w));
                }
                c.set(x, y, w);
                idx += 1;
            }
        }
        Ok(c)
    }
}

/// JSON form: `{n, weights}` with the upper triangle in pair-lex order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoredGraphJson {
    pub n: usize,
    pub weights: Vec<u8>,
}

impl From<&ColoredGraph> for ColoredGraphJson {
    fn from(c: &ColoredGraph) -> Self {
        ColoredGraphJson { n: c.n, weights: c.upper_triangle() }
    }
}

impl TryFrom<ColoredGraphJson> for ColoredGraph {
    type Error = ColoredError;
    fn try_from(j: ColoredGraphJson) -> Result<Self, Self::Error> {
        ColoredGraph::from_upper_triangle(j.n, &j.weights)
    }
}

// ---------------------------------------------------------------------------
// Forbidden patterns
// ---------------------------------------------------------------------------

/// The pattern G_{a+b,b}: `a` vertices, no green pairs, red pairs forming
/// exactly a K_b. With `a == b` this is the red clique RK_b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenPattern {
    pub a: usize,
    pub b: usize,
}

impl ForbiddenPattern {
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a >= b && b >= 1, "need a >= b >= 1");
        ForbiddenPattern { a, b }
    }

    pub fn red_clique(b: usize) -> Self {
        Self::new(b, b)
    }

    pub fn name(&self) -> String {
        if self.a == self.b {
            format!("RK_{}", self.b)
        } else {
            format!("G_{{{},{}}}", self.a + self.b, self.b)
        }
    }
}

/// The family F_{2r} = { G_{2r,1}, ..., G_{2r,r} }; G_{2r,k} has 2r - k
/// vertices of which k form the red clique.
pub fn family(r: usize) -> Result<Vec<ForbiddenPattern>, ColoredError> {
    if r < 2 {
        return Err(ColoredError::BadFamily(r));
    }
    Ok((1..=r).map(|k| ForbiddenPattern::new(2 * r - k, k)).collect())
}

/// F_{2r}^+ = F_{2r} plus the red clique RK_{r-1}.
pub fn family_plus(r: usize) -> Result<Vec<ForbiddenPattern>, ColoredError> {
    let mut f = family(r)?;
    f.push(ForbiddenPattern::red_clique(r - 1));
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    /// The `a` vertices whose induced weights dominate the pattern.
    pub vertices: Vec<usize>,
    /// The `b` of them that are pairwise red.
    pub red_core: Vec<usize>,
}

struct PatternSearch<'a> {
    c: &'a ColoredGraph,
    pattern: ForbiddenPattern,
    budget: &'a mut Budget,
}

impl<'a> PatternSearch<'a> {
    fn tick(&mut self) -> Result<(), ColoredError> {
        self.budget.used += 1;
        if self.budget.used > self.budget.limit {
            return Err(CertifyError::Inconclusive {
                limit: self.budget.limit,
                used: self.budget.used,
            }
            .into());
        }
        Ok(())
    }

    /// Stage 1: grow the red core; stage 2: extend with pairwise non-green
    /// vertices compatible with everything chosen. The red core is chosen
    /// first because b <= r keeps the expensive stage small.
    fn grow_red(&mut self, core: &mut Vec<usize>, start: usize) -> Result<Option<PatternWitness>, ColoredError> {
        self.tick()?;
        if core.len() == self.pattern.b {
            let red_core = core.clone();
            let mut extras = Vec::new();
            return self.grow_pos(core, &red_core, &mut extras, 0);
        }
        for v in start..self.c.n() {
            if core.iter().all(|&u| self.c.weight(u, v) == RED) {
                core.push(v);
                if let Some(w) = self.grow_red(core, v + 1)? {
                    return Ok(Some(w));
                }
                core.pop();
            }
        }
        Ok(None)
    }

    fn grow_pos(
        &mut self,
        chosen: &mut Vec<usize>,
        red_core: &[usize],
        extras: &mut Vec<usize>,
        start: usize,
    ) -> Result<Option<PatternWitness>, ColoredError> {
        self.tick()?;
        if chosen.len() == self.pattern.a {
            return Ok(Some(PatternWitness {
                vertices: chosen.clone(),
                red_core: red_core.to_vec(),
            }));
        }
        for v in start..self.c.n() {
            if chosen.contains(&v) {
                continue;
            }
            if chosen.iter().all(|&u| self.c.weight(u, v) >= BLUE) {
                chosen.push(v);
                extras.push(v);
                if let Some(w) = self.grow_pos(chosen, red_core, extras, v + 1)? {
                    return Ok(Some(w));
                }
                chosen.pop();
                extras.pop();
            }
        }
        Ok(None)
    }
}

/// Finds a vertex subset whose induced weights dominate the pattern (all
/// pairs non-green, a `b`-subset pairwise red), or reports exhaustive
/// absence via `None`.
pub fn contains_pattern(
    c: &ColoredGraph,
    pattern: ForbiddenPattern,
    budget: &mut Budget,
) -> Result<Option<PatternWitness>, ColoredError> {
    if pattern.a > c.n() {
        return Ok(None);
    }
    let mut search = PatternSearch { c, pattern, budget };
    let mut core = Vec::new();
    search.grow_red(&mut core, 0)
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberVerdict {
    pub pattern: ForbiddenPattern,
    pub name: String,
    pub witness: Option<PatternWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub r: usize,
    pub include_red_clique: bool,
    pub members: Vec<MemberVerdict>,
}

impl FamilyReport {
    pub fn is_free(&self) -> bool {
        self.members.iter().all(|m| m.witness.is_none())
    }
}

/// Per-member verdicts for F_{2r} (optionally F_{2r}^+), with witnesses.
pub fn is_family_free(
    c: &ColoredGraph,
    r: usize,
    include_red_clique: bool,
    budget: &mut Budget,
) -> Result<FamilyReport, ColoredError> {
    let members = if include_red_clique { family_plus(r)? } else { family(r)? };
    let mut verdicts = Vec::new();
    for pattern in members {
        let witness = contains_pattern(c, pattern, budget)?;
        verdicts.push(MemberVerdict { pattern, name: pattern.name(), witness });
    }
    Ok(FamilyReport { r, include_red_clique, members: verdicts })
}

// ---------------------------------------------------------------------------
// Zykov symmetrisation
// ---------------------------------------------------------------------------

/// One symmetrisation step: the first pair (u, v) in lexicographic order with
/// w(u, v) = 0 and differing degrees has its lower-degree member replaced by
/// a twin of the other. Returns the (source, overwritten) vertices, or None
/// at a fixed point.
pub fn zykov_step(c: &ColoredGraph) -> (ColoredGraph, Option<(usize, usize)>) {
    let n = c.n();
    for u in 0..n {
        for v in (u + 1)..n {
            if c.weight(u, v) != GREEN {
                continue;
            }
            let (du, dv) = (c.degree(u), c.degree(v));
            if du == dv {
                continue;
            }
            let (src, dst) = if du > dv { (u, v) } else { (v, u) };
            let mut out = c.clone();
            for x in 0..n {
                if x != src && x != dst {
                    out.set(dst, x, c.weight(src, x));
                }
            }
            out.set(src, dst, GREEN);
            return (out, Some((src, dst)));
        }
    }
    (c.clone(), None)
}

/// Iterates `zykov_step` to a fixed point, capped at n^2 steps.
pub fn zykov_symmetrize(c: &ColoredGraph) -> (ColoredGraph, usize) {
    let cap = c.n() * c.n();
    let mut current = c.clone();
    for step in 0..cap {
        let (next, changed) = zykov_step(&current);
        if changed.is_none() {
            return (next, step);
        }
        current = next;
    }
    (current, cap)
}

// ---------------------------------------------------------------------------
// Weighted edge bound for F+ -free graphs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct EdgeBoundReport {
    pub applicable: bool,
    pub free_violations: Vec<String>,
    pub edges: usize,
    pub bound: ratio::RatioRepr,
    pub holds: Option<bool>,
}

/// Checks e(G) <= (r-2)/(r-1) n^2 for F_{2r}^+-free coloured graphs. If the
/// freeness precondition fails the report is marked not applicable.
pub fn check_edge_bound(
    c: &ColoredGraph,
    r: usize,
    budget: &mut Budget,
) -> Result<EdgeBoundReport, ColoredError> {
    let free = is_family_free(c, r, true, budget)?;
    let n = ratio::from_usize(c.n());
    let bound = ratio::frac(r as i64 - 2, r as i64 - 1) * n.clone() * n;
    if !free.is_free() {
        return Ok(EdgeBoundReport {
            applicable: false,
            free_violations: free
                .members
                .iter()
                .filter(|m| m.witness.is_some())
                .map(|m| m.name.clone())
                .collect(),
            edges: c.weighted_edges(),
            bound: ratio::RatioRepr::of(&bound),
            holds: None,
        });
    }
    let e = c.weighted_edges();
    Ok(EdgeBoundReport {
        applicable: true,
        free_violations: Vec::new(),
        edges: e,
        bound: ratio::RatioRepr::of(&bound),
        holds: Some(ratio::from_usize(e) <= bound),
    })
}

// ---------------------------------------------------------------------------
// Constructive anchor partition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct AnchorPartition {
    /// Blocks W_0, W_1, ..., W_r (W_0 first).
    pub blocks: Vec<Vec<usize>>,
    /// The anchors v_1, ..., v_r; v_1 v_2 is the blue pair.
    pub anchors: Vec<usize>,
    /// Whether the weighted min-degree hypothesis held (diagnostic).
    pub min_degree_ok: bool,
    /// q(x) >= 6 for all x.
    pub q_lower_bound_holds: bool,
    /// q(x) = 6 exactly on W_1 ∪ ... ∪ W_r.
    pub q_equality_matches: bool,
    /// |W_0| <= alpha * n.
    pub w0_small: bool,
    /// All weights inside W_1..W_r are green.
    pub blocks_green_inside: bool,
    /// No red weight between W_1 and W_2.
    pub no_red_w1_w2: bool,
}

#[derive(Debug, Clone, Serialize)]
pub enum AnchorOutcome {
    Partition(AnchorPartition),
    /// No red K_{r-1} exists; per the dichotomy the edge count must then
    /// stay below the bound, and we attach that check.
    NoRedClique { edges: usize, bound: ratio::RatioRepr, exceeds_bound: bool },
    /// No vertex has the near-full anchor profile (one blue, rest red).
    NoSecondAnchor { red_core: Vec<usize> },
}

/// Runs the constructive partition: locate a red K_{r-1}, find the second
/// anchor with exactly one blue slot, and classify every vertex by its exact
/// weight profile against the anchors. Inputs violating the min-degree
/// hypothesis are processed in diagnostic mode with `min_degree_ok = false`.
pub fn extract_anchor_partition(
    c: &ColoredGraph,
    r: usize,
    alpha: &Ratio,
    budget: &mut Budget,
) -> Result<AnchorOutcome, ColoredError> {
    if r < 2 {
        return Err(ColoredError::BadFamily(r));
    }
    let n = c.n();
    let nr = ratio::from_usize(n);
    let min_deg_bound = (ratio::int(2 * (3 * r as i64 - 5)) - alpha.clone())
        / ratio::int(3 * r as i64 - 2)
        * nr.clone();
    let min_degree_ok = ratio::from_usize(c.min_degree()) >= min_deg_bound;

    let Some(red) = contains_pattern(c, ForbiddenPattern::red_clique(r - 1), budget)? else {
        let e = c.weighted_edges();
        let bound = ratio::frac(r as i64 - 2, r as i64 - 1) * nr.clone() * nr;
        let exceeds = ratio::from_usize(e) > bound;
        return Ok(AnchorOutcome::NoRedClique {
            edges: e,
            bound: ratio::RatioRepr::of(&bound),
            exceeds_bound: exceeds,
        });
    };
    let core = red.red_core;

    // Second anchor: exactly one blue slot towards the core, red elsewhere.
    let mut v2 = None;
    'outer: for x in 0..n {
        if core.contains(&x) {
            continue;
        }
        let mut blues = 0;
        for &v in &core {
            match c.weight(x, v) {
                BLUE => blues += 1,
                RED => {}
                _ => continue 'outer,
            }
        }
        if blues == 1 {
            v2 = Some(x);
            break;
        }
    }
    let Some(v2) = v2 else {
        return Ok(AnchorOutcome::NoSecondAnchor { red_core: core });
    };
    let v1 = *core.iter().find(|&&v| c.weight(v2, v) == BLUE).expect("one blue slot");

    // anchors[0] = v_1, anchors[1] = v_2, then the rest of the core.
    let mut anchors = vec![v1, v2];
    anchors.extend(core.iter().copied().filter(|&v| v != v1));

    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); r + 1];
    let mut q_values = Vec::with_capacity(n);
    for x in 0..n {
        let mut q = 2 * (3 * r as i64 - 2);
        q -= 2 * (c.weight(anchors[0], x) as i64 + c.weight(anchors[1], x) as i64);
        for &v in &anchors[2..] {
            q -= 3 * c.weight(v, x) as i64;
        }
        q_values.push(q);
        let mut placed = false;
        for i in 0..r {
            if (0..r).all(|j| c.weight(x, anchors[j]) == c.weight(anchors[i], anchors[j])) {
                blocks[i + 1].push(x);
                placed = true;
                break;
            }
        }
        if !placed {
            blocks[0].push(x);
        }
    }

    let q_lower_bound_holds = q_values.iter().all(|&q| q >= 6);
    let in_blocks: std::collections::HashSet<usize> =
        blocks[1..].iter().flatten().copied().collect();
    let q_equality_matches = (0..n).all(|x| (q_values[x] == 6) == in_blocks.contains(&x));
    let w0_small = ratio::from_usize(blocks[0].len()) <= alpha.clone() * ratio::from_usize(n);

    let blocks_green_inside = blocks[1..].iter().all(|block| {
        block
            .iter()
            .enumerate()
            .all(|(i, &x)| block[i + 1..].iter().all(|&y| c.weight(x, y) == GREEN))
    });
    let no_red_w1_w2 = blocks[1]
        .iter()
        .all(|&x| blocks[2].iter().all(|&y| c.weight(x, y) != RED));

    Ok(AnchorOutcome::Partition(AnchorPartition {
        blocks,
        anchors,
        min_degree_ok,
        q_lower_bound_holds,
        q_equality_matches,
        w0_small,
        blocks_green_inside,
        no_red_w1_w2,
    }))
}

// ---------------------------------------------------------------------------
// Layered instance generator
// ---------------------------------------------------------------------------

/// Random coloured graph in the layered shape known to avoid F_{2r}^+:
/// at most r-2 red-complete super-blocks, each split into blue-joined
/// green-inside cells with cell counts summing to at most 2r-1-m.
/// For r = 2 the only such graph is empty.
pub fn random_layered_free(r: usize, max_block: usize, seed: u64) -> ColoredGraph {
    assert!(r >= 2);
    if r == 2 {
        return ColoredGraph::new(0);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=(r - 2));
    let cell_budget = 2 * r - 1 - m;
    // Split the cell budget across super-blocks, at least one cell each.
    let mut cells_per = vec![1usize; m];
    let mut left = cell_budget - m;
    for slot in cells_per.iter_mut().take(m - 1) {
        let take = rng.random_range(0..=left);
        *slot += take;
        left -= take;
    }
    cells_per[m - 1] += left;

    let mut cell_sizes: Vec<Vec<usize>> = Vec::new();
    for &cells in &cells_per {
        cell_sizes.push((0..cells).map(|_| rng.random_range(0..=max_block)).collect());
    }
    let n: usize = cell_sizes.iter().flatten().sum();
    let mut c = ColoredGraph::new(n);
    // Assign vertex ranges.
    let mut idx = 0usize;
    let mut block_of = Vec::with_capacity(n);
    let mut cell_of = Vec::with_capacity(n);
    for (bi, cells) in cell_sizes.iter().enumerate() {
        for (ci, &size) in cells.iter().enumerate() {
            for _ in 0..size {
                block_of.push(bi);
                cell_of.push((bi, ci));
                idx += 1;
            }
        }
    }
    debug_assert_eq!(idx, n);
    for x in 0..n {
        for y in (x + 1)..n {
            let w = if block_of[x] != block_of[y] {
                RED
            } else if cell_of[x] != cell_of[y] {
                BLUE
            } else {
                GREEN
            };
            if w != GREEN {
                c.set(x, y, w);
            }
        }
    }
    c
}

/// The ideal instance for the anchor partition: green inside the planted
/// blocks, red across, blue between blocks 1 and 2. Block sizes follow the
/// canonical proportions 2:2:3:...:3 scaled by `unit`.
pub fn ideal_anchor_instance(r: usize, unit: usize) -> (ColoredGraph, Vec<Vec<usize>>) {
    assert!(r >= 2 && unit >= 1);
    let mut sizes = vec![2 * unit, 2 * unit];
    sizes.extend(std::iter::repeat_n(3 * unit, r - 2));
    let n: usize = sizes.iter().sum();
    let mut blocks = Vec::new();
    let mut start = 0;
    for &s in &sizes {
        blocks.push((start..start + s).collect::<Vec<_>>());
        start += s;
    }
    let mut c = ColoredGraph::new(n);
    let block_of = |v: usize| blocks.iter().position(|b| b.contains(&v)).unwrap();
    for x in 0..n {
        for y in (x + 1)..n {
            let (bx, by) = (block_of(x), block_of(y));
            if bx == by {
                continue;
            }
            let w = if (bx == 0 && by == 1) || (bx == 1 && by == 0) { BLUE } else { RED };
            c.set(x, y, w);
        }
    }
    (c, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::new(u64::MAX)
    }

    /// Naive pattern containment: try every a-subset and every b-subset.
    fn naive_contains(c: &ColoredGraph, p: ForbiddenPattern) -> bool {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for v in start..n {
                    cur.push(v);
                    rec(v + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        for vs in subsets(c.n(), p.a) {
            let all_pos = vs
                .iter()
                .enumerate()
                .all(|(i, &x)| vs[i + 1..].iter().all(|&y| c.weight(x, y) >= BLUE));
            if !all_pos {
                continue;
            }
            for core in subsets(vs.len(), p.b) {
                if core
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| core[i + 1..].iter().all(|&y| c.weight(vs[x], vs[y]) == RED))
                {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn invariants_of_weights() {
        let mut c = ColoredGraph::new(4);
        c.set(0, 1, RED);
        c.set(1, 2, BLUE);
        assert_eq!(c.weight(1, 0), RED);
        assert_eq!(c.degree(1), 3);
        assert_eq!(c.weighted_edges(), 3);
        let json = ColoredGraphJson::from(&c);
        let back = ColoredGraph::try_from(json).unwrap();
        assert_eq!(back, c);
        assert!(ColoredGraph::from_upper_triangle(3, &[0, 1]).is_err());
        assert!(ColoredGraph::from_upper_triangle(3, &[0, 1, 7]).is_err());
    }

    #[test]
    fn family_members_have_expected_shapes() {
        let f6 = family(3).unwrap();
        assert_eq!(f6.len(), 3);
        assert_eq!(f6[0], ForbiddenPattern { a: 5, b: 1 });
        assert_eq!(f6[2], ForbiddenPattern { a: 3, b: 3 }); // RK_3
        assert_eq!(f6[2].name(), "RK_3");
        let f6p = family_plus(3).unwrap();
        assert_eq!(f6p.last().unwrap(), &ForbiddenPattern { a: 2, b: 2 }); // RK_2
        assert!(family(1).is_err());
    }

    #[test]
    fn pattern_containment_examples() {
        let mut b = budget();
        // An all-red K_r contains RK_{r-1}.
        let red4 = ColoredGraph::uniform(4, RED);
        assert!(contains_pattern(&red4, ForbiddenPattern::red_clique(3), &mut b)
            .unwrap()
            .is_some());
        // An all-blue K_5 contains G_{6,1} (a=5, b=1).
        let blue5 = ColoredGraph::uniform(5, BLUE);
        assert!(contains_pattern(&blue5, ForbiddenPattern::new(5, 1), &mut b)
            .unwrap()
            .is_some());
        // An all-blue K_4 is F_6^+-free (r = 3).
        let blue4 = ColoredGraph::uniform(4, BLUE);
        assert!(is_family_free(&blue4, 3, true, &mut b).unwrap().is_free());
        // The empty graph is free for every family.
        assert!(is_family_free(&ColoredGraph::new(0), 4, true, &mut b).unwrap().is_free());
        // All-green graphs are F_{2r}-free for every r.
        let green9 = ColoredGraph::new(9);
        assert!(is_family_free(&green9, 2, false, &mut b).unwrap().is_free());
        assert!(is_family_free(&green9, 3, false, &mut b).unwrap().is_free());
    }

    #[test]
    fn pattern_search_matches_naive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut b = budget();
        for _ in 0..200 {
            let n = rng.random_range(0..=6usize);
            let mut c = ColoredGraph::new(n);
            for x in 0..n {
                for y in (x + 1)..n {
                    c.set(x, y, rng.random_range(0..=2u8));
                }
            }
            for a in 1..=5usize.min(n.max(1)) {
                for bb in 1..=a {
                    let p = ForbiddenPattern::new(a, bb);
                    let found = contains_pattern(&c, p, &mut b).unwrap();
                    assert_eq!(found.is_some(), naive_contains(&c, p), "n={n} a={a} b={bb}");
                    if let Some(w) = found {
                        assert!(w.vertices.len() == a && w.red_core.len() == bb);
                        for (i, &x) in w.vertices.iter().enumerate() {
                            for &y in &w.vertices[i + 1..] {
                                assert!(c.weight(x, y) >= BLUE);
                            }
                        }
                        for (i, &x) in w.red_core.iter().enumerate() {
                            for &y in &w.red_core[i + 1..] {
                                assert_eq!(c.weight(x, y), RED);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zykov_step_monotone_and_fixed_points() {
        // A graph already in layered shape is a fixed point.
        let layered = random_layered_free(4, 3, 5);
        let (after, changed) = zykov_step(&layered);
        assert!(changed.is_none());
        assert_eq!(after, layered);

        // Two green-joined vertices with unequal degrees trigger a twin copy
        // and e(G) does not decrease.
        let mut c = ColoredGraph::new(3);
        c.set(0, 1, RED); // degree(0)=2, degree(2)=0, w(0,2)=0
        let before = c.weighted_edges();
        let (after, changed) = zykov_step(&c);
        assert!(changed.is_some());
        assert!(after.weighted_edges() >= before);
    }

    #[test]
    fn zykov_never_decreases_edges_all_small_graphs() {
        // All 3^6 coloured graphs on 4 vertices.
        let mut b = budget();
        for code in 0..3u32.pow(6) {
            let mut weights = Vec::with_capacity(6);
            let mut c = code;
            for _ in 0..6 {
                weights.push((c % 3) as u8);
                c /= 3;
            }
            let g = ColoredGraph::from_upper_triangle(4, &weights).unwrap();
            let (next, _) = zykov_step(&g);
            assert!(next.weighted_edges() >= g.weighted_edges());
            for r in [2usize, 3] {
                let free_before = is_family_free(&g, r, true, &mut b).unwrap().is_free();
                if free_before {
                    assert!(
                        is_family_free(&next, r, true, &mut b).unwrap().is_free(),
                        "freeness destroyed for r={r}: {:?} -> {:?}",
                        g.upper_triangle(),
                        next.upper_triangle()
                    );
                }
            }
        }
    }

    #[test]
    fn symmetrize_terminates() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(1..=8usize);
            let mut c = ColoredGraph::new(n);
            for x in 0..n {
                for y in (x + 1)..n {
                    c.set(x, y, rng.random_range(0..=2u8));
                }
            }
            let before = c.weighted_edges();
            let (fixed, _steps) = zykov_symmetrize(&c);
            assert!(fixed.weighted_edges() >= before);
            let (_, more) = zykov_step(&fixed);
            assert!(more.is_none());
        }
    }

    #[test]
    fn edge_bound_examples() {
        let mut b = budget();
        // r = 2: any non-empty graph contains RK_1, so only n = 0 applies.
        let empty = ColoredGraph::new(0);
        let rep = check_edge_bound(&empty, 2, &mut b).unwrap();
        assert_eq!(rep.holds, Some(true));
        let one = ColoredGraph::new(1);
        assert!(!check_edge_bound(&one, 2, &mut b).unwrap().applicable);
        // r = 3, all-blue K4: e = 6 <= (1/2) * 16.
        let blue4 = ColoredGraph::uniform(4, BLUE);
        let rep = check_edge_bound(&blue4, 3, &mut b).unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.edges, 6);
        assert_eq!(rep.holds, Some(true));
    }

    #[test]
    fn edge_bound_on_layered_instances() {
        let mut b = budget();
        for seed in 0..50 {
            for r in [3usize, 4] {
                let c = random_layered_free(r, 4, seed);
                let rep = check_edge_bound(&c, r, &mut b).unwrap();
                assert!(rep.applicable, "layered instance must be free (r={r}, seed={seed})");
                assert_eq!(rep.holds, Some(true));
            }
        }
    }

    #[test]
    fn anchor_partition_recovers_planted_blocks() {
        let mut b = budget();
        for r in [2usize, 3, 4] {
            let (c, planted) = ideal_anchor_instance(r, 2);
            let out = extract_anchor_partition(&c, r, &ratio::frac(1, 10), &mut b).unwrap();
            let AnchorOutcome::Partition(p) = out else {
                panic!("expected a partition for r={r}");
            };
            assert!(p.min_degree_ok);
            assert!(p.q_lower_bound_holds);
            assert!(p.q_equality_matches);
            assert!(p.blocks[0].is_empty(), "W_0 must be empty on ideal instances");
            assert!(p.w0_small);
            assert!(p.blocks_green_inside);
            assert!(p.no_red_w1_w2);
            // Blocks match the planted partition as sets (order may differ
            // beyond the first two, which are pinned by the blue pair).
            let mut got: Vec<Vec<usize>> = p.blocks[1..].to_vec();
            let mut want = planted.clone();
            for b in got.iter_mut() {
                b.sort_unstable();
            }
            for b in want.iter_mut() {
                b.sort_unstable();
            }
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn anchor_partition_without_red_clique() {
        let mut b = budget();
        // All-blue K6 has no RK_2, triggering the dichotomy branch for r = 3.
        let blue6 = ColoredGraph::uniform(6, BLUE);
        let out = extract_anchor_partition(&blue6, 3, &ratio::frac(1, 10), &mut b).unwrap();
        match out {
            AnchorOutcome::NoRedClique { edges, exceeds_bound, .. } => {
                assert_eq!(edges, 15);
                assert!(!exceeds_bound); // 15 <= (1/2) * 36
            }
            other => panic!("expected NoRedClique, got {other:?}"),
        }
    }

    #[test]
    fn anchor_partition_diagnostic_on_low_degree() {
        let mut b = budget();
        // A lone red K2 inside an otherwise green graph: min-degree fails but
        // the extraction still runs for r = 3.
        let mut c = ColoredGraph::new(8);
        c.set(0, 1, RED);
        c.set(2, 3, BLUE);
        let out = extract_anchor_partition(&c, 3, &ratio::frac(1, 2), &mut b).unwrap();
        match out {
            AnchorOutcome::Partition(p) => assert!(!p.min_degree_ok),
            AnchorOutcome::NoSecondAnchor { .. } => {}
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
