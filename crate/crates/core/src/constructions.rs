//! Explicit lower-bound constructions: Ω-pair witnesses found by exhaustive
//! search, their blow-up closure, the odd-clique composite, a desk-scale
//! two-hemisphere geometric graph, its full-degree modification, and the
//! even-clique composite that stitches the two together.
//!
//! Constructions are deterministic given their seed; certification of the
//! products (clique freeness, independence numbers, odd girth) is done by
//! the exact kernels in `certify`, never assumed.

use crate::canon;
use crate::certify::{self, Budget, CertKind};
use crate::graph::{Graph, VertexPartition};
use crate::ratio::{self, Ratio, RatioRepr};
use num::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Certify(#[from] certify::CertifyError),
    #[error(transparent)]
    Canon(#[from] canon::CanonError),
    #[error("witness failed certification: {0}")]
    BadWitness(String),
}

// ---------------------------------------------------------------------------
// Ω-pairs
// ---------------------------------------------------------------------------

/// A certified member of the pair family: a triangle-free, d-regular graph on
/// n vertices with independence number exactly d.
#[derive(Debug, Clone)]
pub struct OmegaPair {
    pub d: usize,
    pub n: usize,
    pub witness: Graph,
}

impl OmegaPair {
    /// Re-certifies the defining properties with the exact kernels.
    pub fn certify(&self, budget: &mut Budget) -> Result<(), ConstructError> {
        if self.witness.n() != self.n {
            return Err(ConstructError::BadWitness("vertex count mismatch".into()));
        }
        if (0..self.n).any(|v| self.witness.degree(v) != self.d) {
            return Err(ConstructError::BadWitness(format!("not {}-regular", self.d)));
        }
        if certify::has_clique(&self.witness, 3, budget)?.kind == CertKind::Clique {
            return Err(ConstructError::BadWitness("contains a triangle".into()));
        }
        let (alpha, _) = certify::independence_number(&self.witness, budget)?;
        if alpha != self.d {
            return Err(ConstructError::BadWitness(format!(
                "alpha = {alpha}, expected {}",
                self.d
            )));
        }
        Ok(())
    }

    /// The blow-up closure: (d, n) in the family implies (a d, a n) is too.
    pub fn blow_up(&self, a: usize) -> Result<OmegaPair, ConstructError> {
        if a == 0 {
            return Err(ConstructError::BadParams("blow-up factor must be positive".into()));
        }
        Ok(OmegaPair { d: a * self.d, n: a * self.n, witness: self.witness.blow_up(a)? })
    }
}

/// Exhaustively finds all pairs (d, n) with n <= max_n that admit a witness,
/// returning one canonical witness per pair. Limited to the exhaustive
/// regime max_n <= 10.
pub fn find_omega_pairs(max_n: usize, budget: &mut Budget) -> Result<Vec<OmegaPair>, ConstructError> {
    if max_n > 10 {
        return Err(ConstructError::BadParams(format!(
            "exhaustive pair search supports max_n <= 10, got {max_n}"
        )));
    }
    let mut out = Vec::new();
    for n in 2..=max_n {
        for d in 1..n {
            if (d * n) % 2 == 1 || n < 2 * d {
                // Handshake parity; a triangle-free d-regular graph needs
                // n >= 2d since any neighbourhood is independent.
                continue;
            }
            // Hereditary constraints for prefixes: triangle-free, degrees at
            // most d, and every deficit fillable by the vertices still to come.
            let keep = |g: &Graph| {
                let k = g.n();
                !g.has_triangle()
                    && (0..k).all(|v| {
                        let deg = g.degree(v);
                        deg <= d && d - deg <= n - k
                    })
            };
            let mut canon_budget = budget.limit - budget.used.min(budget.limit);
            let classes = canon::enumerate_classes(n, &keep, &mut canon_budget)?;
            budget.used = budget.limit - canon_budget;
            let mut candidates: Vec<&Graph> = classes
                .iter()
                .filter(|g| (0..n).all(|v| g.degree(v) == d))
                .collect();
            candidates.sort_by_key(|g| g.triangle_bits());
            for g in candidates {
                let (alpha, _) = certify::independence_number(g, budget)?;
                if alpha == d {
                    let pair = OmegaPair { d, n, witness: g.clone() };
                    pair.certify(budget)?;
                    out.push(pair);
                    break;
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Odd-clique composite
// ---------------------------------------------------------------------------

/// r classes, each inducing the a-blow-up of the pair witness, all cross
/// pairs joined. The result is K_{2r+1}-free with alpha = a d and edge count
/// ((r-1)/r + d/(r n_*)) (a r n_*)^2 / 2.
pub fn odd_construction(
    r: usize,
    pair: &OmegaPair,
    a: usize,
) -> Result<Graph, ConstructError> {
    if r < 1 || a < 1 {
        return Err(ConstructError::BadParams("need r >= 1 and a >= 1".into()));
    }
    let class = pair.witness.blow_up(a)?;
    let parts: Vec<Graph> = (0..r).map(|_| class.clone()).collect();
    let mut g = Graph::join_complete(&parts)?;
    let labels = (0..r)
        .flat_map(|i| std::iter::repeat_n(format!("V{}", i + 1), a * pair.n))
        .collect();
    g.set_labels(labels);
    Ok(g)
}

/// The closed-form edge count of `odd_construction`, exact.
pub fn odd_construction_edges(r: usize, pair: &OmegaPair, a: usize) -> Ratio {
    let arn = ratio::from_usize(a * r * pair.n);
    let density = ratio::frac(r as i64 - 1, r as i64)
        + ratio::from_usize(pair.d) / (ratio::int(r as i64) * ratio::from_usize(pair.n));
    density * arn.clone() * arn / ratio::int(2)
}

// ---------------------------------------------------------------------------
// Two-hemisphere geometric graph
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereGraphParams {
    /// Ambient dimension k (points live on S^{k-1}).
    pub dim: usize,
    pub points_per_side: usize,
    /// Cross edges require angle < pi/2 - cross_angle_slack.
    pub cross_angle_slack: f64,
    /// Inner edges require angle > pi - inner_angle_slack.
    pub inner_angle_slack: f64,
    pub seed: u64,
}

impl Default for SphereGraphParams {
    fn default() -> Self {
        // Empirical defaults at dim 2; chosen so desk-scale instances pass
        // K4-freeness with odd-cycle-free sides.
        SphereGraphParams {
            dim: 2,
            points_per_side: 100,
            cross_angle_slack: 0.15,
            inner_angle_slack: 0.3,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereInstance {
    #[serde(skip)]
    pub graph: Graph,
    pub params: SphereGraphParams,
    /// Measured cross density e(A, B) / N^2.
    pub cross_density: f64,
    /// Spherical-cap measure of the cross threshold (exact at dim 2:
    /// 1/2 - theta/pi).
    pub cross_target: f64,
}

/// Fraction of the sphere S^{k-1} within angle phi of a fixed point:
/// int_0^phi sin^(k-2) t dt / int_0^pi sin^(k-2) t dt, by Simpson quadrature.
pub fn cap_measure(dim: usize, phi: f64) -> f64 {
    assert!(dim >= 2);
    if dim == 2 {
        return phi / std::f64::consts::PI;
    }
    let f = |t: f64| t.sin().powi(dim as i32 - 2);
    let simpson = |a: f64, b: f64| {
        let steps = 2000;
        let h = (b - a) / steps as f64;
        let mut total = f(a) + f(b);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            total += w * f(a + i as f64 * h);
        }
        total * h / 3.0
    };
    simpson(0.0, phi) / simpson(0.0, std::f64::consts::PI)
}

/// Builds the two-hemisphere graph: the same N seeded unit vectors serve as
/// both sides A and B; two same-side points are adjacent when nearly
/// antipodal, a cross pair when their angle is below pi/2 minus the slack.
/// Labels record the side.
pub fn sphere_graph(params: &SphereGraphParams) -> Result<SphereInstance, ConstructError> {
    let quarter = std::f64::consts::FRAC_PI_4;
    if params.dim < 2
        || params.points_per_side < 1
        || params.cross_angle_slack <= 0.0
        || params.cross_angle_slack >= quarter
        || params.inner_angle_slack <= 0.0
        || params.inner_angle_slack >= quarter
    {
        return Err(ConstructError::BadParams(
            "need dim >= 2, N >= 1, and angle slacks in (0, pi/4)".into(),
        ));
    }
    let n_side = params.points_per_side;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let normal = rand_distr::StandardNormal;
    let mut points = Vec::with_capacity(n_side);
    for _ in 0..n_side {
        loop {
            let p: Vec<f64> = (0..params.dim).map(|_| rng.sample(normal)).collect();
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-9 {
                points.push(p.into_iter().map(|x| x / norm).collect::<Vec<f64>>());
                break;
            }
        }
    }
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>();
    let inner_cut = -params.inner_angle_slack.cos(); // cos(pi - slack)
    let cross_cut = params.cross_angle_slack.sin(); // cos(pi/2 - slack)
    let mut g = Graph::new(2 * n_side);
    for i in 0..n_side {
        for j in (i + 1)..n_side {
            let d = dot(&points[i], &points[j]);
            if d < inner_cut {
                g.add_edge(i, j);
                g.add_edge(n_side + i, n_side + j);
            }
        }
    }
    let mut cross_edges = 0usize;
    for i in 0..n_side {
        for j in 0..n_side {
            if dot(&points[i], &points[j]) > cross_cut {
                g.add_edge(i, n_side + j);
                cross_edges += 1;
            }
        }
    }
    let mut labels = vec!["A".to_string(); n_side];
    labels.extend(std::iter::repeat_n("B".to_string(), n_side));
    g.set_labels(labels);
    let cross_target =
        cap_measure(params.dim, std::f64::consts::FRAC_PI_2 - params.cross_angle_slack);
    Ok(SphereInstance {
        graph: g,
        params: params.clone(),
        cross_density: cross_edges as f64 / (n_side * n_side) as f64,
        cross_target,
    })
}

// ---------------------------------------------------------------------------
// Full-degree modification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FullDegreeInstance {
    #[serde(skip)]
    pub graph: Graph,
    /// The planted set inside side A, now complete to B.
    pub x: Vec<usize>,
    /// The planted set inside side B, now complete to A.
    pub y: Vec<usize>,
    /// round((delta - xi) n), recorded because the rounding convention
    /// (half away from zero) is pinned here.
    pub planted_size: usize,
}

/// Removes all edges incident with random X ⊆ A and Y ⊆ B of size
/// round((delta - xi) n), then joins X to all of B and Y to all of A.
/// Requires a two-side labelling.
pub fn full_degree_modification(
    g: &Graph,
    delta: &Ratio,
    xi: &Ratio,
    seed: u64,
) -> Result<FullDegreeInstance, ConstructError> {
    let labels = g
        .labels()
        .ok_or(ConstructError::BadParams("side labels required".into()))?;
    let mut names: Vec<&String> = labels.iter().collect();
    names.sort();
    names.dedup();
    if names.len() != 2 {
        return Err(ConstructError::BadParams(format!(
            "need exactly two side labels, found {}",
            names.len()
        )));
    }
    let (la, lb) = (names[0].clone(), names[1].clone());
    let side_a: Vec<usize> = (0..g.n()).filter(|&v| labels[v] == la).collect();
    let side_b: Vec<usize> = (0..g.n()).filter(|&v| labels[v] == lb).collect();

    let count_ratio = (delta.clone() - xi.clone()) * ratio::from_usize(g.n());
    let count_int = ratio::round_half_away(&count_ratio);
    let count = count_int
        .to_usize()
        .ok_or(ConstructError::BadParams("(delta - xi) n must be non-negative".into()))?;
    if count > side_a.len() || count > side_b.len() {
        return Err(ConstructError::BadParams(format!(
            "requested set size {count} exceeds a side of size {} / {}",
            side_a.len(),
            side_b.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |side: &[usize]| {
        let mut pool = side.to_vec();
        pool.shuffle(&mut rng);
        pool.truncate(count);
        pool.sort_unstable();
        pool
    };
    let x = pick(&side_a);
    let y = pick(&side_b);

    let mut out = g.clone();
    for &v in x.iter().chain(y.iter()) {
        let neighbors: Vec<usize> = out.neighbors(v).collect();
        for u in neighbors {
            out.remove_edge(v, u);
        }
    }
    for &v in &x {
        for &b in &side_b {
            out.add_edge(v, b);
        }
    }
    for &v in &y {
        for &a in &side_a {
            if a != v {
                out.add_edge(v, a);
            }
        }
    }
    Ok(FullDegreeInstance { graph: out, x, y, planted_size: count })
}

// ---------------------------------------------------------------------------
// Even-clique composite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct EvenParams {
    pub r: usize,
    pub delta: Ratio,
    /// Total vertex count; must be divisible by 3r - 2.
    pub n: usize,
    pub dim: usize,
    pub cross_angle_slack: f64,
    pub inner_angle_slack: f64,
    pub xi: Ratio,
    pub seed: u64,
    /// Pair whose blow-up fills the blocks beyond the first two; required
    /// when r >= 3 and its n must divide 3n/(3r-2).
    pub pair: Option<OmegaPair>,
}

impl EvenParams {
    pub fn desk_scale_r2(n: usize, delta: Ratio, xi: Ratio, seed: u64) -> Self {
        EvenParams {
            r: 2,
            delta,
            n,
            dim: 2,
            cross_angle_slack: 0.15,
            inner_angle_slack: 0.3,
            xi,
            seed,
            pair: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvenInstance {
    pub graph: Graph,
    pub partition: VertexPartition,
    pub params_summary: String,
    /// Exactness accuracy derived from the construction parameters (declared
    /// finite-size slack, not asserted by theory).
    pub derived_eps: Ratio,
    /// (3r-5)/(3r-2) + delta - delta^2, the target edge density.
    pub target_density: Ratio,
    pub planted: FullDegreeInstance,
}

/// Builds the even-clique composite on a partition with |V_1| = |V_2| =
/// 2n/(3r-2) and |V_i| = 3n/(3r-2): the first two blocks carry the modified
/// two-hemisphere graph, later blocks carry pair blow-ups, and all cross
/// pairs other than (V_1, V_2) are complete.
pub fn even_construction(params: &EvenParams) -> Result<EvenInstance, ConstructError> {
    let r = params.r;
    if r < 2 {
        return Err(ConstructError::BadParams("need r >= 2".into()));
    }
    let m = 3 * r - 2;
    if params.n == 0 || !params.n.is_multiple_of(m) {
        return Err(ConstructError::BadParams(format!(
            "n = {} is not divisible by 3r-2 = {m}",
            params.n
        )));
    }
    let unit = params.n / m;
    let small = 2 * unit; // |V_1| = |V_2|
    let big = 3 * unit; // |V_i|, i >= 3

    // The first two blocks: modified two-hemisphere graph. The independence
    // threshold is delta * n in the ambient graph, so the sub-construction
    // sees delta' = delta n / (2 * small).
    let sphere = sphere_graph(&SphereGraphParams {
        dim: params.dim,
        points_per_side: small,
        cross_angle_slack: params.cross_angle_slack,
        inner_angle_slack: params.inner_angle_slack,
        seed: params.seed,
    })?;
    let delta_sub = params.delta.clone() * ratio::from_usize(params.n)
        / ratio::from_usize(2 * small);
    let planted = full_degree_modification(&sphere.graph, &delta_sub, &params.xi, params.seed ^ 0x9e3779b9)?;

    let mut g = Graph::new(params.n);
    // Blocks are contiguous: V_1 = 0..small, V_2 = small..2*small, then big blocks.
    for (u, v) in planted.graph.edges() {
        g.add_edge(u, v);
    }
    let mut sizes = vec![small, small];
    if r >= 3 {
        let pair = params
            .pair
            .as_ref()
            .ok_or(ConstructError::BadParams("r >= 3 requires a pair witness".into()))?;
        if !big.is_multiple_of(pair.n) {
            return Err(ConstructError::BadParams(format!(
                "block size {big} is not a multiple of the pair's n = {}",
                pair.n
            )));
        }
        let a = big / pair.n;
        let class = pair.witness.blow_up(a)?;
        for i in 0..(r - 2) {
            let offset = 2 * small + i * big;
            for (u, v) in class.edges() {
                g.add_edge(offset + u, offset + v);
            }
            sizes.push(big);
        }
    }
    let partition = VertexPartition::contiguous(&sizes);
    // Complete joins between all block pairs except (V_1, V_2).
    for i in 0..r {
        for j in (i + 1)..r {
            if (i, j) == (0, 1) {
                continue;
            }
            for &u in partition.block(i) {
                for &v in partition.block(j) {
                    g.add_edge(u, v);
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(params.n);
    for (i, &s) in sizes.iter().enumerate() {
        labels.extend(std::iter::repeat_n(format!("V{}", i + 1), s));
    }
    g.set_labels(labels);

    // Accuracy the natural partition should satisfy, from the parameters:
    // the planted full-degree sets contribute delta'/2 to the subset clause,
    // the cross threshold shifts density off 1/2, and 1/(2 sqrt N) absorbs
    // sampling noise of the point set. The constants are empirical at desk
    // scale and recorded as such.
    let derived_eps = delta_sub.clone() / ratio::int(2)
        + ratio::frac(3, 100)
        + ratio::frac(1, 2 * (small as f64).sqrt().floor().max(1.0) as i64);
    let target_density = ratio::frac(3 * r as i64 - 5, 3 * r as i64 - 2) + params.delta.clone()
        - params.delta.clone() * params.delta.clone();

    Ok(EvenInstance {
        graph: g,
        partition,
        params_summary: format!(
            "r={r}, n={}, delta={}, xi={}, dim={}, seed={}",
            params.n,
            ratio::to_string(&params.delta),
            ratio::to_string(&params.xi),
            params.dim,
            params.seed
        ),
        derived_eps,
        target_density,
        planted,
    })
}

/// Provenance sidecar attached to every construction artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub construction: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub certified_properties: Vec<(String, bool)>,
}

/// The decimal density rendering used in sidecars, always paired with the
/// exact rational.
pub fn density_repr(edges: usize, n: usize) -> (RatioRepr, f64) {
    let r = ratio::from_usize(2 * edges) / (ratio::from_usize(n) * ratio::from_usize(n));
    let f = ratio::to_f64(&r);
    (RatioRepr::of(&r), f)
}
