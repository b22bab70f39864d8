//! Pair-density verification (quasirandom and one-sided dense pairs) and the
//! recursive clique embedding in dense multipartite structures.
//!
//! For a fixed `X` the subset `Y` maximising the deviation of `e(X, Y)` from
//! `d|X||Y|` is the greedy set of vertices whose `X`-degree beats (or falls
//! short of) `d|X|`, so exhaustive verdicts only enumerate one side. Sampled
//! verdicts can certify violations but never certify density; reports carry
//! an explicit mode tag so downstream consumers know the verdict strength.

use crate::bits;
use crate::certify::{validate_certificate, Certificate, CertKind};
use crate::colored::{ColoredGraph, BLUE, GREEN, RED};
use crate::graph::{Graph, VertexPartition};
use crate::ratio::{self, Ratio, RatioRepr};
use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_EXHAUSTIVE_CAP: u128 = 1 << 26;
pub const DEFAULT_SAMPLE_PAIRS: u64 = 1000;

#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    #[error("A and B must be disjoint and non-empty")]
    BadSets,
    #[error("exhaustive check needs 2^|A| * 2^|B| = {need} <= cap {cap}")]
    ExhaustiveTooLarge { need: u128, cap: u128 },
    #[error("bad embedding spec: {0}")]
    BadSpec(String),
    #[error("embedding failed at level {level}: {clause}")]
    EmbedFailed { level: usize, clause: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMode {
    Exhaustive,
    Sampled,
}

/// How deviations are scored: `OneSided` measures only shortfalls
/// d|X||Y| - e(X,Y) (the "dense pair" definition), `TwoSided` the absolute
/// deviation (the quasirandom definition).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    OneSided,
    TwoSided,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDensityReport {
    /// Observed density e(A,B) / (|A||B|).
    pub observed: RatioRepr,
    /// The reference density `d` the deviation is measured against.
    pub reference: RatioRepr,
    /// Allowed deviation `delta`.
    pub allowed: RatioRepr,
    pub side: Side,
    pub mode: DensityMode,
    /// Largest deviation found, normalised by |A||B|. In sampled mode this
    /// is only a lower bound on the true deviation.
    pub worst_deviation: RatioRepr,
    pub worst_x: Vec<usize>,
    pub worst_y: Vec<usize>,
    pub samples: u64,
    /// Exhaustive mode: exact verdict. Sampled mode: "no violation found".
    pub satisfied: bool,
}

struct PairContext<'a> {
    g: &'a Graph,
    b: Vec<usize>,
    /// d = p/q as integers for the hot loops.
    p: i128,
    q: i128,
}

impl<'a> PairContext<'a> {
    /// X-degrees of every b-vertex, for X given as a bitset row.
    fn x_degrees(&self, x_row: &[u64]) -> Vec<i128> {
        self.b
            .iter()
            .map(|&v| bits::intersection_count(self.g.row(v), x_row) as i128)
            .collect()
    }

    /// Greedy extremal Y for the fixed X: positive side picks b-vertices with
    /// q*deg - p|X| > 0; negative side the reverse. Returns the deviation
    /// numerator (non-negative, denominator q) and the chosen Y.
    fn greedy(&self, degs: &[i128], x_size: i128, positive: bool) -> (i128, Vec<usize>) {
        let mut total = 0i128;
        let mut y = Vec::new();
        for (i, &deg) in degs.iter().enumerate() {
            let margin = self.q * deg - self.p * x_size;
            let gain = if positive { margin } else { -margin };
            if gain > 0 {
                total += gain;
                y.push(self.b[i]);
            }
        }
        (total, y)
    }

    /// Exact deviation numerator for a specific (X, Y): q*e(X,Y) - p|X||Y|.
    fn pair_margin(&self, x_row: &[u64], y: &[usize], x_size: i128) -> i128 {
        let e: i128 = y
            .iter()
            .map(|&v| bits::intersection_count(self.g.row(v), x_row) as i128)
            .sum();
        self.q * e - self.p * x_size * y.len() as i128
    }
}

fn build_context<'a>(
    g: &'a Graph,
    a: &[usize],
    b: &[usize],
    d: &Ratio,
) -> Result<PairContext<'a>, DensityError> {
    if a.is_empty() || b.is_empty() || a.iter().any(|v| b.contains(v)) {
        return Err(DensityError::BadSets);
    }
    let p = d.numer().to_i128().ok_or(DensityError::BadSpec("density numerator too large".into()))?;
    let q = d.denom().to_i128().ok_or(DensityError::BadSpec("density denominator too large".into()))?;
    Ok(PairContext { g, b: b.to_vec(), p, q })
}

pub fn observed_density(g: &Graph, a: &[usize], b: &[usize]) -> Ratio {
    let words = g.words();
    let a_row = bits::from_indices(words, a);
    let b_row = bits::from_indices(words, b);
    let e = g.edges_between(&a_row, &b_row);
    ratio::from_usize(e) / ratio::from_usize(a.len() * b.len())
}

fn run_engine(
    g: &Graph,
    a: &[usize],
    b: &[usize],
    delta: &Ratio,
    d: &Ratio,
    side: Side,
    mode: DensityMode,
    seed: u64,
    cap: u128,
) -> Result<PairDensityReport, DensityError> {
    let ctx = build_context(g, a, b, d)?;
    let words = g.words();
    let norm = ratio::from_usize(a.len() * b.len());
    // worst deviation tracked as numerator over denominator q, then divided
    // by |A||B| at the end.
    let mut worst: i128 = 0;
    let mut worst_x: Vec<usize> = Vec::new();
    let mut worst_y: Vec<usize> = Vec::new();
    let mut samples: u64 = 0;

    let consider_x = |x_members: &[usize], worst: &mut i128, wx: &mut Vec<usize>, wy: &mut Vec<usize>| {
        let x_row = bits::from_indices(words, x_members);
        let degs = ctx.x_degrees(&x_row);
        let x_size = x_members.len() as i128;
        let sides: &[bool] = match side {
            Side::OneSided => &[false],
            Side::TwoSided => &[false, true],
        };
        for &positive in sides {
            let (dev, y) = ctx.greedy(&degs, x_size, positive);
            if dev > *worst {
                *worst = dev;
                *wx = x_members.to_vec();
                *wy = y;
            }
        }
    };

    match mode {
        DensityMode::Exhaustive => {
            let need: u128 = (1u128 << a.len().min(100)) * (1u128 << b.len().min(100));
            if a.len() >= 64 || b.len() >= 64 || need > cap {
                return Err(DensityError::ExhaustiveTooLarge { need, cap });
            }
            let mut members = Vec::with_capacity(a.len());
            for mask in 0u64..(1u64 << a.len()) {
                members.clear();
                for (i, &v) in a.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        members.push(v);
                    }
                }
                consider_x(&members, &mut worst, &mut worst_x, &mut worst_y);
                samples += 1;
            }
        }
        DensityMode::Sampled => {
            // Singletons (their greedy Y is the neighbourhood slice), the
            // full set, then seeded uniform subset pairs.
            for &v in a {
                consider_x(&[v], &mut worst, &mut worst_x, &mut worst_y);
                samples += 1;
            }
            consider_x(a, &mut worst, &mut worst_x, &mut worst_y);
            samples += 1;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..DEFAULT_SAMPLE_PAIRS {
                let x: Vec<usize> = a.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
                let y: Vec<usize> = b.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
                samples += 1;
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                let x_row = bits::from_indices(words, &x);
                let margin = ctx.pair_margin(&x_row, &y, x.len() as i128);
                let dev = match side {
                    Side::OneSided => -margin,
                    Side::TwoSided => margin.abs(),
                };
                if dev > worst {
                    worst = dev;
                    worst_x = x;
                    worst_y = y;
                }
            }
        }
    }

    let worst_ratio = Ratio::new(worst.into(), ctx.q.into()) / norm;
    let satisfied = worst_ratio <= *delta;
    Ok(PairDensityReport {
        observed: RatioRepr::of(&observed_density(g, a, b)),
        reference: RatioRepr::of(d),
        allowed: RatioRepr::of(delta),
        side,
        mode,
        worst_deviation: RatioRepr::of(&worst_ratio),
        worst_x,
        worst_y,
        samples,
        satisfied,
    })
}

/// One-sided (delta, d)-dense check: e(X,Y) >= d|X||Y| - delta|A||B| for all
/// X ⊆ A, Y ⊆ B.
pub fn check_pair_dense(
    g: &Graph,
    a: &[usize],
    b: &[usize],
    delta: &Ratio,
    d: &Ratio,
    mode: DensityMode,
    seed: u64,
) -> Result<PairDensityReport, DensityError> {
    run_engine(g, a, b, delta, d, Side::OneSided, mode, seed, DEFAULT_EXHAUSTIVE_CAP)
}

/// Two-sided (delta, d)-quasirandom check; `d` defaults to the observed
/// density when not supplied.
pub fn check_pair_quasirandom(
    g: &Graph,
    a: &[usize],
    b: &[usize],
    delta: &Ratio,
    d: Option<&Ratio>,
    mode: DensityMode,
    seed: u64,
) -> Result<PairDensityReport, DensityError> {
    let observed;
    let d = match d {
        Some(d) => d,
        None => {
            observed = observed_density(g, a, b);
            &observed
        }
    };
    run_engine(g, a, b, delta, d, Side::TwoSided, mode, seed, DEFAULT_EXHAUSTIVE_CAP)
}

// ---------------------------------------------------------------------------
// Clique embedding
// ---------------------------------------------------------------------------

/// Parameters of the dense-multipartite embedding: `a` parts, target clique
/// order `a + b`, density floor `theta`. The derived constants xi and delta
/// follow the closed forms (theta^2/4)^(a-1) and (theta/2)^(a-1).
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingSpec {
    pub a: usize,
    pub b: usize,
    #[serde(with = "ratio::serde_ratio")]
    pub theta: Ratio,
    pub parts: Vec<Vec<usize>>,
    /// Observed pairwise densities d_ij (i < j), recorded for reporting.
    pub densities: Vec<Vec<RatioRepr>>,
}

impl EmbeddingSpec {
    pub fn new(
        a: usize,
        b: usize,
        theta: Ratio,
        parts: Vec<Vec<usize>>,
        g: &Graph,
    ) -> Result<Self, DensityError> {
        use num::{One, Zero};
        if !(1 <= b && b <= a) {
            return Err(DensityError::BadSpec(format!("need a >= b >= 1, got a={a} b={b}")));
        }
        if theta <= Ratio::zero() || theta > Ratio::one() {
            return Err(DensityError::BadSpec("theta must lie in (0, 1]".into()));
        }
        if parts.len() != a || parts.iter().any(|p| p.is_empty()) {
            return Err(DensityError::BadSpec(format!("need {a} non-empty parts")));
        }
        let mut densities = Vec::new();
        for i in 0..a {
            let mut row = Vec::new();
            for j in (i + 1)..a {
                row.push(RatioRepr::of(&observed_density(g, &parts[i], &parts[j])));
            }
            densities.push(row);
        }
        Ok(EmbeddingSpec { a, b, theta, parts, densities })
    }

    pub fn xi(&self) -> Ratio {
        pow_ratio(&(self.theta.clone() * self.theta.clone() / ratio::int(4)), self.a - 1)
    }

    pub fn delta(&self) -> Ratio {
        pow_ratio(&(self.theta.clone() / ratio::int(2)), self.a - 1)
    }
}

fn pow_ratio(base: &Ratio, exp: usize) -> Ratio {
    let mut out = ratio::int(1);
    for _ in 0..exp {
        out *= base.clone();
    }
    out
}

/// Finds the lexicographically least edge inside `set`, scanning pairs in
/// id order. This is the default independence oracle: hypothesis (c) only
/// ever needs an edge inside an explicitly named subset.
pub fn direct_edge_finder(g: &Graph) -> impl Fn(&[usize]) -> Option<(usize, usize)> + '_ {
    |set: &[usize]| {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        for i in 0..sorted.len() {
            for j in (i + 1)..sorted.len() {
                if g.has_edge(sorted[i], sorted[j]) {
                    return Some((sorted[i], sorted[j]));
                }
            }
        }
        None
    }
}

/// Constructs a clique of order a + b by the dense-pair recursion: while
/// a > b, pick the least vertex of the last part with large degree into every
/// other part and restrict to its neighbourhoods; when a = b, find an edge
/// among the vertices with above-half degrees and restrict to its common
/// neighbourhood. Failures name the violated clause and recursion level.
pub fn embed_clique(
    spec: &EmbeddingSpec,
    g: &Graph,
    edge_oracle: &dyn Fn(&[usize]) -> Option<(usize, usize)>,
) -> Result<Certificate, DensityError> {
    let mut clique = Vec::new();
    rec(
        g,
        spec.parts.clone(),
        spec.b,
        &spec.theta,
        edge_oracle,
        0,
        &mut clique,
    )?;
    clique.sort_unstable();
    let cert = Certificate {
        kind: CertKind::Clique,
        vertices: clique,
        statistic: 0,
        target: format!("embed-clique:{}", spec.a + spec.b),
    };
    if !validate_certificate(g, &cert) || cert.vertices.len() != spec.a + spec.b {
        return Err(DensityError::EmbedFailed {
            level: 0,
            clause: "constructed set failed clique validation".into(),
        });
    }
    Ok(cert)
}

fn rec(
    g: &Graph,
    parts: Vec<Vec<usize>>,
    b: usize,
    theta: &Ratio,
    edge_oracle: &dyn Fn(&[usize]) -> Option<(usize, usize)>,
    level: usize,
    clique: &mut Vec<usize>,
) -> Result<(), DensityError> {
    let a = parts.len();
    if a == 1 && b == 1 {
        let (u, v) = edge_oracle(&parts[0]).ok_or(DensityError::EmbedFailed {
            level,
            clause: "(c): no edge inside the final part".into(),
        })?;
        clique.push(u);
        clique.push(v);
        return Ok(());
    }
    let last = &parts[a - 1];
    let half = ratio::frac(1, 2);
    if a > b {
        // Avoid every X(i) = { v : |N(v) ∩ V_i| <= (theta/2)|V_i| }.
        let v_star = last
            .iter()
            .copied()
            .find(|&v| {
                (0..a - 1).all(|i| {
                    let deg = count_into(g, v, &parts[i]);
                    ratio::from_usize(deg)
                        > theta.clone() * half.clone() * ratio::from_usize(parts[i].len())
                })
            })
            .ok_or(DensityError::EmbedFailed {
                level,
                clause: "(a): the sets X(i) cover the last part".into(),
            })?;
        let next = restrict(g, &parts[..a - 1], &[v_star], level)?;
        clique.push(v_star);
        rec(g, next, b, theta, edge_oracle, level + 1, clique)
    } else {
        // a = b >= 2: avoid Y(i) = { v : |N(v) ∩ V_i| <= (1/2 + theta/2)|V_i| }.
        let l: Vec<usize> = last
            .iter()
            .copied()
            .filter(|&v| {
                (0..a - 1).all(|i| {
                    let deg = count_into(g, v, &parts[i]);
                    ratio::from_usize(deg)
                        > (half.clone() + theta.clone() * half.clone())
                            * ratio::from_usize(parts[i].len())
                })
            })
            .collect();
        let (v_star, w_star) = edge_oracle(&l).ok_or(DensityError::EmbedFailed {
            level,
            clause: "(c): no edge inside L".into(),
        })?;
        let next = restrict(g, &parts[..a - 1], &[v_star, w_star], level)?;
        clique.push(v_star);
        clique.push(w_star);
        rec(g, next, b - 1, theta, edge_oracle, level + 1, clique)
    }
}

fn count_into(g: &Graph, v: usize, part: &[usize]) -> usize {
    part.iter().filter(|&&u| g.has_edge(v, u)).count()
}

fn restrict(
    g: &Graph,
    parts: &[Vec<usize>],
    anchors: &[usize],
    level: usize,
) -> Result<Vec<Vec<usize>>, DensityError> {
    let mut out = Vec::with_capacity(parts.len());
    for part in parts {
        let slice: Vec<usize> = part
            .iter()
            .copied()
            .filter(|&u| anchors.iter().all(|&x| g.has_edge(u, x)))
            .collect();
        if slice.is_empty() {
            return Err(DensityError::EmbedFailed {
                level,
                clause: "(a)/(b): a neighbourhood slice became empty".into(),
            });
        }
        out.push(slice);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Reduced-graph classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyParams {
    /// Lower density threshold for non-green pairs.
    #[serde(with = "ratio::serde_ratio")]
    pub theta: Ratio,
    /// Quasirandomness accuracy.
    #[serde(with = "ratio::serde_ratio")]
    pub xi: Ratio,
    /// Upper end of the blue interval; defaults to 1/2 + xi. The source
    /// material is ambiguous between theta and xi as the lower threshold, so
    /// both are explicit parameters here.
    #[serde(with = "ratio::serde_ratio")]
    pub blue_upper: Ratio,
    pub mode: DensityMode,
    pub seed: u64,
}

impl ClassifyParams {
    pub fn new(theta: Ratio, xi: Ratio, mode: DensityMode, seed: u64) -> Self {
        let blue_upper = ratio::frac(1, 2) + xi.clone();
        ClassifyParams { theta, xi, blue_upper, mode, seed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedReduction {
    pub colors: crate::colored::ColoredGraphJson,
    pub pair_reports: Vec<((usize, usize), PairDensityReport)>,
    pub notes: Vec<String>,
}

/// Colours the block pairs of a partition: green for irregular-or-sparse
/// pairs, blue for quasirandom pairs of medium density, red for the rest.
pub fn classify_reduced_edges(
    g: &Graph,
    partition: &VertexPartition,
    params: &ClassifyParams,
) -> Result<(ColoredGraph, ClassifiedReduction), DensityError> {
    let r = partition.r();
    let mut colors = ColoredGraph::new(r);
    let mut reports = Vec::new();
    let mut notes = vec![format!(
        "blue interval [{}, {}); lower threshold theta (proof text also admits xi)",
        ratio::to_string(&params.theta),
        ratio::to_string(&params.blue_upper)
    )];
    let sizes: Vec<usize> = partition.blocks().iter().map(|b| b.len()).collect();
    if sizes.len() > 1 && sizes[1..].iter().any(|&s| s != sizes[1]) {
        notes.push("blocks beyond the first are not equal-sized".into());
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let (bi, bj) = (partition.block(i), partition.block(j));
            if bi.is_empty() || bj.is_empty() {
                colors.set(i, j, GREEN);
                continue;
            }
            let report = check_pair_quasirandom(
                g,
                bi,
                bj,
                &params.xi,
                None,
                params.mode,
                params.seed ^ ((i as u64) << 32 | j as u64),
            )?;
            let density = report.observed.to_ratio().expect("observed density is rational");
            let color = if !report.satisfied || density < params.theta {
                GREEN
            } else if density < params.blue_upper {
                BLUE
            } else {
                RED
            };
            colors.set(i, j, color);
            reports.push(((i, j), report));
        }
    }
    let reduction = ClassifiedReduction {
        colors: crate::colored::ColoredGraphJson::from(&colors),
        pair_reports: reports,
        notes,
    };
    Ok((colors, reduction))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive full double enumeration over all (X, Y) pairs.
    fn naive_worst(g: &Graph, a: &[usize], b: &[usize], d: &Ratio, side: Side) -> Ratio {
        use num::Zero;
        let mut worst = Ratio::zero();
        for xm in 0u32..(1 << a.len()) {
            let x: Vec<usize> =
                a.iter().enumerate().filter(|(i, _)| xm >> i & 1 == 1).map(|(_, &v)| v).collect();
            for ym in 0u32..(1 << b.len()) {
                let y: Vec<usize> = b
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| ym >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let e = x
                    .iter()
                    .map(|&u| y.iter().filter(|&&v| g.has_edge(u, v)).count())
                    .sum::<usize>();
                let expected = d.clone() * ratio::from_usize(x.len() * y.len());
                let diff = ratio::from_usize(e) - expected;
                let dev = match side {
                    Side::OneSided => -diff,
                    Side::TwoSided => if diff < Ratio::zero() { -diff } else { diff },
                };
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst / ratio::from_usize(a.len() * b.len())
    }

    #[test]
    fn complete_and_empty_pairs() {
        use num::Zero;
        let g = Graph::complete_bipartite(4, 4);
        let a: Vec<usize> = (0..4).collect();
        let b: Vec<usize> = (4..8).collect();
        let rep = check_pair_dense(
            &g,
            &a,
            &b,
            &Ratio::zero(),
            &ratio::int(1),
            DensityMode::Exhaustive,
            0,
        )
        .unwrap();
        assert!(rep.satisfied, "complete pair is (0,1)-dense");
        let empty = Graph::new(8);
        let rep = check_pair_quasirandom(
            &empty,
            &a,
            &b,
            &Ratio::zero(),
            Some(&Ratio::zero()),
            DensityMode::Exhaustive,
            0,
        )
        .unwrap();
        assert!(rep.satisfied, "empty pair is (0,0)-quasirandom");
    }

    #[test]
    fn engine_matches_naive_double_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314);
        for trial in 0..40 {
            let na = rng.random_range(1..=4usize);
            let nb = rng.random_range(1..=4usize);
            let mut g = Graph::new(na + nb);
            for u in 0..na {
                for v in na..na + nb {
                    if rng.random_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let a: Vec<usize> = (0..na).collect();
            let b: Vec<usize> = (na..na + nb).collect();
            let d = ratio::frac(rng.random_range(0..=4), 4);
            for side in [Side::OneSided, Side::TwoSided] {
                let rep =
                    run_engine(&g, &a, &b, &ratio::frac(1, 100), &d, side, DensityMode::Exhaustive, 0, 1 << 26)
                        .unwrap();
                let naive = naive_worst(&g, &a, &b, &d, side);
                assert_eq!(
                    rep.worst_deviation.to_ratio().unwrap(),
                    naive,
                    "trial {trial} side {side:?}"
                );
            }
        }
    }

    #[test]
    fn sampled_mode_is_a_lower_bound_and_deterministic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3333);
        let mut g = Graph::new(16);
        for u in 0..8 {
            for v in 8..16 {
                if rng.random_bool(0.5) {
                    g.add_edge(u, v);
                }
            }
        }
        let a: Vec<usize> = (0..8).collect();
        let b: Vec<usize> = (8..16).collect();
        let delta = ratio::frac(1, 50);
        let ex = check_pair_quasirandom(&g, &a, &b, &delta, None, DensityMode::Exhaustive, 0)
            .unwrap();
        let s1 =
            check_pair_quasirandom(&g, &a, &b, &delta, None, DensityMode::Sampled, 7).unwrap();
        let s2 =
            check_pair_quasirandom(&g, &a, &b, &delta, None, DensityMode::Sampled, 7).unwrap();
        assert_eq!(s1.worst_deviation.num, s2.worst_deviation.num);
        assert!(
            s1.worst_deviation.to_ratio().unwrap() <= ex.worst_deviation.to_ratio().unwrap(),
            "sampled deviation may not exceed the exhaustive one"
        );
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let g = Graph::new(60);
        let a: Vec<usize> = (0..30).collect();
        let b: Vec<usize> = (30..60).collect();
        assert!(matches!(
            check_pair_dense(&g, &a, &b, &ratio::frac(1, 10), &ratio::frac(1, 2), DensityMode::Exhaustive, 0),
            Err(DensityError::ExhaustiveTooLarge { .. })
        ));
        assert!(matches!(
            check_pair_dense(&g, &[], &b, &ratio::frac(1, 10), &ratio::frac(1, 2), DensityMode::Sampled, 0),
            Err(DensityError::BadSets)
        ));
    }

    #[test]
    fn spec_constants_and_self_similarity() {
        let g = Graph::complete(6);
        let parts = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let spec = EmbeddingSpec::new(3, 2, ratio::frac(1, 2), parts.clone(), &g).unwrap();
        // xi = (theta^2/4)^(a-1), delta = (theta/2)^(a-1).
        assert_eq!(spec.xi(), ratio::frac(1, 256));
        assert_eq!(spec.delta(), ratio::frac(1, 16));
        // One recursion level scales xi by 4/theta^2 and delta by 2/theta.
        let child = EmbeddingSpec::new(2, 2, ratio::frac(1, 2), parts[..2].to_vec(), &g).unwrap();
        assert_eq!(child.xi(), spec.xi() * ratio::int(4) / (spec.theta.clone() * spec.theta.clone()));
        assert_eq!(child.delta(), spec.delta() * ratio::int(2) / spec.theta.clone());
        assert!(EmbeddingSpec::new(1, 2, ratio::frac(1, 2), vec![], &g).is_err());
    }

    #[test]
    fn embed_base_case_returns_edge() {
        let mut g = Graph::new(4);
        g.add_edge(1, 3);
        let spec = EmbeddingSpec::new(1, 1, ratio::int(1), vec![vec![0, 1, 2, 3]], &g).unwrap();
        let finder = direct_edge_finder(&g);
        let cert = embed_clique(&spec, &g, &finder).unwrap();
        assert_eq!(cert.vertices, vec![1, 3]);
    }

    #[test]
    fn embed_k3_on_two_parts() {
        // Two parts completely joined, with one edge inside part 0 available
        // after restriction: a = 2, b = 1 yields a triangle.
        let mut g = Graph::new(6);
        for u in 0..3 {
            for v in 3..6 {
                g.add_edge(u, v);
            }
        }
        g.add_edge(0, 1);
        let spec =
            EmbeddingSpec::new(2, 1, ratio::frac(1, 2), vec![vec![0, 1, 2], vec![3, 4, 5]], &g)
                .unwrap();
        let finder = direct_edge_finder(&g);
        let cert = embed_clique(&spec, &g, &finder).unwrap();
        assert_eq!(cert.vertices.len(), 3);
        assert!(validate_certificate(&g, &cert));
    }

    #[test]
    fn embed_fails_with_structured_clause() {
        // a = b = 2 with independent parts: no edge in L at level 0.
        let mut g = Graph::new(8);
        for u in 0..4 {
            for v in 4..8 {
                g.add_edge(u, v);
            }
        }
        let spec = EmbeddingSpec::new(
            2,
            2,
            ratio::frac(1, 4),
            vec![(0..4).collect(), (4..8).collect()],
            &g,
        )
        .unwrap();
        let finder = direct_edge_finder(&g);
        match embed_clique(&spec, &g, &finder) {
            Err(DensityError::EmbedFailed { level: 0, clause }) => {
                assert!(clause.contains("no edge inside L"), "clause: {clause}");
            }
            other => panic!("expected structured failure, got {other:?}"),
        }
    }

    #[test]
    fn classify_extreme_pairs() {
        // Blocks 0-1 completely joined -> red; 0-2 and 1-2 empty -> green.
        let mut g = Graph::new(12);
        for u in 0..4 {
            for v in 4..8 {
                g.add_edge(u, v);
            }
        }
        let partition = VertexPartition::contiguous(&[4, 4, 4]);
        let params = ClassifyParams::new(
            ratio::frac(1, 10),
            ratio::frac(1, 20),
            DensityMode::Exhaustive,
            0,
        );
        let (colors, reduction) = classify_reduced_edges(&g, &partition, &params).unwrap();
        assert_eq!(colors.weight(0, 1), RED);
        assert_eq!(colors.weight(0, 2), GREEN);
        assert_eq!(colors.weight(1, 2), GREEN);
        assert!(!reduction.notes.is_empty());
    }

    #[test]
    fn classify_is_deterministic_given_mode_and_seed() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let mut g = Graph::new(30);
        for u in 0..30 {
            for v in (u + 1)..30 {
                if rng.random_bool(0.4) {
                    g.add_edge(u, v);
                }
            }
        }
        let partition = VertexPartition::contiguous(&[10, 10, 10]);
        let params =
            ClassifyParams::new(ratio::frac(1, 10), ratio::frac(1, 5), DensityMode::Sampled, 17);
        let (c1, r1) = classify_reduced_edges(&g, &partition, &params).unwrap();
        let (c2, r2) = classify_reduced_edges(&g, &partition, &params).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn classify_half_density_pair_is_blue() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut g = Graph::new(40);
        for u in 0..20 {
            for v in 20..40 {
                if rng.random_bool(0.45) {
                    g.add_edge(u, v);
                }
            }
        }
        let partition = VertexPartition::contiguous(&[20, 20]);
        let params = ClassifyParams::new(
            ratio::frac(1, 10),
            ratio::frac(1, 4),
            DensityMode::Sampled,
            5,
        );
        let (colors, _) = classify_reduced_edges(&g, &partition, &params).unwrap();
        assert_eq!(colors.weight(0, 1), BLUE);
    }
}
