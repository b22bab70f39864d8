//! Undirected simple graphs on bitset adjacency rows.
//!
//! Supports at least 512 vertices; every search kernel in the crate works on
//! row intersections, so adjacency is stored as `n` rows of `words` 64-bit
//! words each. Vertex labels are carried in a parallel array and never affect
//! adjacency.

use crate::bits;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for graph on {n} vertices")]
    OutOfRange { v: usize, n: usize },
    #[error("blow-up factor must be at least 1")]
    ZeroBlowUp,
    #[error("join requires at least one part")]
    EmptyParts,
    #[error("self-loops are not allowed (vertex {0})")]
    SelfLoop(usize),
}

/// Undirected simple graph with per-vertex neighbour bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = bits::words_for(n).max(1);
        Graph { n, words, adj: vec![0; n * words], labels: None }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        } else if n == 2 {
            g.add_edge(0, 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// The Petersen graph: outer C5, inner 5-cycle with step 2, spokes.
    pub fn petersen() -> Self {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
            g.add_edge(i, 5 + i);
        }
        g
    }

    #[inline(always)]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline(always)]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline(always)]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline(always)]
    fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline(always)]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test_bit(self.row(u), v)
    }

    /// Adds edge `uv`; panics on out-of-range or loop (construction-time use).
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge ({u},{v}) for n={}", self.n);
        bits::set_bit(self.row_mut(u), v);
        bits::set_bit(self.row_mut(v), u);
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::OutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::OutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_edge(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        bits::clear_bit(self.row_mut(u), v);
        bits::clear_bit(self.row_mut(v), u);
    }

    #[inline(always)]
    pub fn degree(&self, v: usize) -> usize {
        bits::count_ones(self.row(v))
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|v| self.degree(v)).sum();
        total / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits::iter_ones(self.row(v))
    }

    /// All edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Number of edges with both ends in `set` (given as a bitset row).
    pub fn edges_within(&self, set: &[u64]) -> usize {
        let mut twice = 0usize;
        for v in bits::iter_ones(set) {
            twice += bits::intersection_count(self.row(v), set);
        }
        twice / 2
    }

    /// Number of edges between the disjoint bitset rows `a` and `b`.
    pub fn edges_between(&self, a: &[u64], b: &[u64]) -> usize {
        bits::iter_ones(a).map(|v| bits::intersection_count(self.row(v), b)).sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.n, "label count must equal vertex count");
        self.labels = Some(labels);
    }

    pub fn clear_labels(&mut self) {
        self.labels = None;
    }

    /// Replaces every vertex by `t` independent twins; copies `u_a`, `v_b`
    /// are adjacent iff `uv` was an edge. Copies of vertex `v` occupy indices
    /// `v*t .. v*t+t-1`.
    pub fn blow_up(&self, t: usize) -> Result<Graph, GraphError> {
        if t == 0 {
            return Err(GraphError::ZeroBlowUp);
        }
        let mut g = Graph::new(self.n * t);
        for (u, v) in self.edges() {
            for a in 0..t {
                for b in 0..t {
                    g.add_edge(u * t + a, v * t + b);
                }
            }
        }
        if let Some(labels) = &self.labels {
            let mut out = Vec::with_capacity(self.n * t);
            for l in labels {
                for _ in 0..t {
                    out.push(l.clone());
                }
            }
            g.labels = Some(out);
        }
        Ok(g)
    }

    /// Disjoint union of `parts` with every cross pair joined. Labels record
    /// the part of origin (`p0`, `p1`, ... unless the part carries labels).
    pub fn join_complete(parts: &[Graph]) -> Result<Graph, GraphError> {
        if parts.is_empty() {
            return Err(GraphError::EmptyParts);
        }
        let n: usize = parts.iter().map(|p| p.n).sum();
        let mut g = Graph::new(n);
        let mut labels = Vec::with_capacity(n);
        let mut offset = 0;
        let mut block_starts = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            block_starts.push(offset);
            for (u, v) in p.edges() {
                g.add_edge(offset + u, offset + v);
            }
            for v in 0..p.n {
                match &p.labels {
                    Some(ls) => labels.push(ls[v].clone()),
                    None => labels.push(format!("p{i}")),
                }
            }
            offset += p.n;
        }
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                for u in block_starts[i]..block_starts[i] + parts[i].n {
                    for v in block_starts[j]..block_starts[j] + parts[j].n {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g.labels = self.labels.clone();
        g
    }

    /// Induced subgraph on `s`; vertices are relabelled `0..s.len()` in the
    /// order given, and the mapping new -> old is returned alongside.
    pub fn induced(&self, s: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        for &v in s {
            if v >= self.n {
                return Err(GraphError::OutOfRange { v, n: self.n });
            }
        }
        let mut g = Graph::new(s.len());
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                if self.has_edge(s[i], s[j]) {
                    g.add_edge(i, j);
                }
            }
        }
        if let Some(labels) = &self.labels {
            g.labels = Some(s.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok((g, s.to_vec()))
    }

    /// Packed upper-triangle adjacency bits in column-major (graph6) order:
    /// pair `(i, j)`, `i < j`, appears at position `j(j-1)/2 + i`.
    pub fn triangle_bits(&self) -> Vec<u64> {
        let m = self.n * self.n.saturating_sub(1) / 2;
        let mut out = vec![0u64; bits::words_for(m).max(1)];
        let mut idx = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    bits::set_bit(&mut out, idx);
                }
                idx += 1;
            }
        }
        out
    }

    /// Rebuilds a graph from `triangle_bits` output.
    pub fn from_triangle_bits(n: usize, packed: &[u64]) -> Graph {
        let mut g = Graph::new(n);
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if bits::test_bit(packed, idx) {
                    g.add_edge(i, j);
                }
                idx += 1;
            }
        }
        g
    }

    /// True if some edge has both ends inside the neighbourhood of another
    /// vertex, i.e. the graph contains a triangle.
    pub fn has_triangle(&self) -> bool {
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u && !bits::is_disjoint(self.row(u), self.row(v)) {
                    return true;
                }
            }
        }
        false
    }
}

/// Ordered list of disjoint vertex blocks covering V(G). Block order is
/// significant: blocks 0 and 1 play the halved-density roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("vertex {0} appears in more than one block")]
    Overlap(usize),
    #[error("vertex {0} is missing from the partition")]
    Missing(usize),
    #[error("blocks are empty")]
    NoBlocks,
}

impl VertexPartition {
    /// Validates that the blocks are disjoint and cover `0..n` exactly,
    /// where `n` is the total size.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        if blocks.is_empty() {
            return Err(PartitionError::NoBlocks);
        }
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut seen = vec![false; n];
        for block in &blocks {
            for &v in block {
                if v >= n {
                    return Err(PartitionError::Missing(v));
                }
                if seen[v] {
                    return Err(PartitionError::Overlap(v));
                }
                seen[v] = true;
            }
        }
        Ok(VertexPartition { blocks, n })
    }

    /// Contiguous partition with the given block sizes.
    pub fn contiguous(sizes: &[usize]) -> Self {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        VertexPartition { blocks, n: start }
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&v))
            .expect("vertex covered by partition")
    }

    /// Moves vertex `v` to block `to`; keeps the invariants intact.
    pub fn move_vertex(&mut self, v: usize, to: usize) {
        let from = self.block_of(v);
        if from == to {
            return;
        }
        self.blocks[from].retain(|&x| x != v);
        self.blocks[to].push(v);
        self.blocks[to].sort_unstable();
    }

    /// Per-block bitset rows of the given word width.
    pub fn rows(&self, words: usize) -> Vec<Vec<u64>> {
        self.blocks.iter().map(|b| bits::from_indices(words, b)).collect()
    }
}

impl TryFrom<Vec<Vec<usize>>> for VertexPartition {
    type Error = PartitionError;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self, Self::Error> {
        VertexPartition::new(blocks)
    }
}

impl From<VertexPartition> for Vec<Vec<usize>> {
    fn from(p: VertexPartition) -> Self {
        p.blocks
    }
}

/// JSON form of a graph: `{n, edges, labels?}`.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson { n: g.n(), edges: g.edges(), labels: g.labels.clone() }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        let mut g = Graph::from_edges(j.n, &j.edges)?;
        if let Some(labels) = j.labels {
            if labels.len() != j.n {
                return Err(GraphError::OutOfRange { v: labels.len(), n: j.n });
            }
            g.labels = Some(labels);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = Graph::petersen();
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 15);
        let total: usize = (0..10).map(|v| g.degree(v)).sum();
        assert_eq!(total, 30);
    }

    #[test]
    fn blow_up_identity_and_edge_scaling() {
        let c5 = Graph::cycle(5);
        let same = c5.blow_up(1).unwrap();
        assert_eq!(same.edges(), c5.edges());
        let doubled = c5.blow_up(2).unwrap();
        assert_eq!(doubled.n(), 10);
        assert_eq!(doubled.edge_count(), 20);
        assert!(c5.blow_up(0).is_err());
    }

    #[test]
    fn blow_up_copy_indexing() {
        // Copies of v occupy v*t..v*t+t-1 and are pairwise non-adjacent.
        let c5 = Graph::cycle(5);
        let g = c5.blow_up(3).unwrap();
        for v in 0..5 {
            for a in 0..3 {
                for b in (a + 1)..3 {
                    assert!(!g.has_edge(v * 3 + a, v * 3 + b));
                }
            }
        }
        assert!(g.has_edge(0, 3)); // copies of 0 and 1, adjacent originals
        assert!(!g.has_edge(0, 6)); // copies of 0 and 2, non-adjacent originals
    }

    #[test]
    fn join_complete_shapes() {
        let k1 = Graph::new(1);
        let k2 = Graph::join_complete(&[k1.clone(), k1]).unwrap();
        assert_eq!(k2.edge_count(), 1);

        let c5 = Graph::cycle(5);
        let j = Graph::join_complete(&[c5.clone(), c5]).unwrap();
        assert_eq!(j.n(), 10);
        assert_eq!(j.edge_count(), 35);
        assert_eq!(j.labels().unwrap()[0], "p0");
        assert_eq!(j.labels().unwrap()[9], "p1");
        assert!(Graph::join_complete(&[]).is_err());
    }

    #[test]
    fn join_complete_degree_law() {
        let parts = [Graph::cycle(5), Graph::path(4), Graph::new(3)];
        let total: usize = parts.iter().map(|p| p.n()).sum();
        let j = Graph::join_complete(&parts).unwrap();
        let mut offset = 0;
        for p in &parts {
            for v in 0..p.n() {
                assert_eq!(j.degree(offset + v), p.degree(v) + (total - p.n()));
            }
            offset += p.n();
        }
    }

    #[test]
    fn complement_basics() {
        let k5 = Graph::complete(5);
        assert_eq!(k5.complement().edge_count(), 0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.random_range(1..12);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            let c = g.complement();
            assert_eq!(g.edge_count() + c.edge_count(), n * (n - 1) / 2);
            assert_eq!(c.complement(), g);
        }
    }

    #[test]
    fn induced_subgraphs() {
        let k5 = Graph::complete(5);
        let (k3, map) = k5.induced(&[0, 2, 4]).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(map, vec![0, 2, 4]);

        let c5 = Graph::cycle(5);
        let (p3, _) = c5.induced(&[0, 1, 2]).unwrap();
        assert_eq!(p3.edge_count(), 2);
        assert!(c5.induced(&[0, 9]).is_err());
    }

    #[test]
    fn induced_edge_count_matches_pair_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let n = rng.random_range(2..14);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let k = rng.random_range(1..=n);
            let mut s: Vec<usize> = (0..n).collect();
            for i in (1..s.len()).rev() {
                let j = rng.random_range(0..=i);
                s.swap(i, j);
            }
            s.truncate(k);
            let (h, map) = g.induced(&s).unwrap();
            let mut direct = 0;
            for i in 0..k {
                for j in (i + 1)..k {
                    if g.has_edge(map[i], map[j]) {
                        direct += 1;
                    }
                }
            }
            assert_eq!(h.edge_count(), direct);
        }
    }

    #[test]
    fn triangle_bits_roundtrip() {
        let g = Graph::petersen();
        let packed = g.triangle_bits();
        let back = Graph::from_triangle_bits(10, &packed);
        assert_eq!(back, g);
    }

    #[test]
    fn graphs_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Graph>();
        assert_send_sync::<VertexPartition>();
    }

    #[test]
    fn partition_validation() {
        let p = VertexPartition::new(vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(p.r(), 2);
        assert_eq!(p.block_of(3), 1);
        assert_eq!(
            VertexPartition::new(vec![vec![0, 1], vec![1]]),
            Err(PartitionError::Overlap(1))
        );
        assert_eq!(
            VertexPartition::new(vec![vec![0, 3], vec![1]]),
            Err(PartitionError::Missing(3))
        );
        let mut q = VertexPartition::contiguous(&[3, 2]);
        q.move_vertex(0, 1);
        assert_eq!(q.block(1), &[0, 3, 4]);
        let json = serde_json::to_string(&q).unwrap();
        let back: VertexPartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn wide_graphs_cross_word_boundaries() {
        let mut g = Graph::new(130);
        g.add_edge(0, 129);
        g.add_edge(63, 64);
        g.add_edge(64, 128);
        assert!(g.has_edge(129, 0));
        assert_eq!(g.degree(64), 2);
        assert_eq!(g.edge_count(), 3);
    }
}
