//! Synthetic graphs with planted clusters that satisfy the sufficient
//! homogeneity condition: intra-cluster weights in `[w_min, w_max]`, every
//! inter-cluster weight in `(w_max^2 / w_min, 1]`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{strictly_less, NodePartition, UnionFind, WeightedGraph};
use crate::homogeneity::check_sufficient_homogeneity;
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Circles,
    Moons,
    Planted,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Circles => "circles",
            Shape::Moons => "moons",
            Shape::Planted => "planted",
        })
    }
}

/// Knobs of the point-cloud-to-graph construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricOptions {
    /// Candidate edges come from each point's `k` nearest neighbors.
    pub k_neighbors: usize,
    /// Standard deviation of the Gaussian jitter on coordinates.
    pub noise: f64,
    /// Number of inter-cluster edges kept (the closest cross-label pairs).
    pub inter_edges: usize,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        GeometricOptions { k_neighbors: 8, noise: 0.05, inter_edges: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub shape: Shape,
    pub seed: u64,
    pub cluster_sizes: Vec<usize>,
    pub w_min: f64,
    pub w_max: f64,
    pub geometry: Option<GeometricOptions>,
    pub intra_degree: Option<usize>,
    pub inter_edges_per_pair: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: WeightedGraph,
    pub partition: NodePartition,
    pub planted_cut_weights: Vec<f64>,
    pub params: InstanceParams,
    pub positions: Option<Vec<(f64, f64)>>,
}

impl PlantedInstance {
    /// `w_max^2 / w_min`, the bound every inter-cluster weight exceeds.
    pub fn inter_threshold(&self) -> f64 {
        self.params.w_max * self.params.w_max / self.params.w_min
    }
}

fn check_weight_bounds(w_min: f64, w_max: f64) -> Result<f64> {
    if !(w_min > 0.0 && w_min < w_max && w_max <= 1.0) {
        return Err(Error::Infeasible(format!("need 0 < w_min < w_max <= 1, got w_min={w_min}, w_max={w_max}")));
    }
    let threshold = w_max * w_max / w_min;
    if !strictly_less(threshold, 1.0) {
        return Err(Error::Infeasible(format!(
            "w_max^2 / w_min = {threshold} leaves no room for inter-cluster weights in (threshold, 1]"
        )));
    }
    Ok(threshold)
}

/// Uniform in `(threshold, 1]`, kept clear of the boundary.
fn inter_weight(rng: &mut RandomSource, threshold: f64) -> f64 {
    loop {
        let w = 1.0 - rng.uniform() * (1.0 - threshold);
        if strictly_less(threshold, w) {
            return w;
        }
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn check_shape_size(n: usize) -> Result<()> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::Infeasible(format!("n must be even and at least 6, got {n}")));
    }
    Ok(())
}

fn jitter(rng: &mut RandomSource, noise: f64) -> Result<(f64, f64)> {
    if noise == 0.0 {
        return Ok((0.0, 0.0));
    }
    let normal = Normal::new(0.0, noise).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((normal.sample(rng.inner()), normal.sample(rng.inner())))
}

/// Two noisy concentric circles (radii 1 and 0.5), `n / 2` points each.
pub fn generate_circles(seed: u64, n: usize, w_min: f64, w_max: f64) -> Result<PlantedInstance> {
    generate_circles_with(seed, n, w_min, w_max, GeometricOptions::default())
}

pub fn generate_circles_with(
    seed: u64,
    n: usize,
    w_min: f64,
    w_max: f64,
    options: GeometricOptions,
) -> Result<PlantedInstance> {
    check_shape_size(n)?;
    check_weight_bounds(w_min, w_max)?;
    let mut rng = RandomSource::new(seed);
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (label, radius) in [(0, 1.0), (1, 0.5)] {
        for _ in 0..n / 2 {
            let t = 2.0 * PI * rng.uniform();
            let (dx, dy) = jitter(&mut rng, options.noise)?;
            points.push((radius * t.cos() + dx, radius * t.sin() + dy));
            labels.push(label);
        }
    }
    build_geometric(Shape::Circles, seed, &mut rng, points, labels, w_min, w_max, options)
}

/// Two interleaved noisy half-moons, `n / 2` points each.
pub fn generate_moons(seed: u64, n: usize, w_min: f64, w_max: f64) -> Result<PlantedInstance> {
    generate_moons_with(seed, n, w_min, w_max, GeometricOptions::default())
}

pub fn generate_moons_with(
    seed: u64,
    n: usize,
    w_min: f64,
    w_max: f64,
    options: GeometricOptions,
) -> Result<PlantedInstance> {
    check_shape_size(n)?;
    check_weight_bounds(w_min, w_max)?;
    let mut rng = RandomSource::new(seed);
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for label in 0..2 {
        for _ in 0..n / 2 {
            let t = PI * rng.uniform();
            let (dx, dy) = jitter(&mut rng, options.noise)?;
            let (x, y) = if label == 0 { (t.cos(), t.sin()) } else { (1.0 - t.cos(), 0.5 - t.sin()) };
            points.push((x + dx, y + dy));
            labels.push(label);
        }
    }
    build_geometric(Shape::Moons, seed, &mut rng, points, labels, w_min, w_max, options)
}

#[allow(clippy::too_many_arguments)]
fn build_geometric(
    shape: Shape,
    seed: u64,
    rng: &mut RandomSource,
    points: Vec<(f64, f64)>,
    labels: Vec<usize>,
    w_min: f64,
    w_max: f64,
    options: GeometricOptions,
) -> Result<PlantedInstance> {
    if options.k_neighbors == 0 || options.inter_edges == 0 {
        return Err(Error::Infeasible("k_neighbors and inter_edges must be positive".into()));
    }
    let n = points.len();
    let threshold = check_weight_bounds(w_min, w_max)?;

    // k-nearest-neighbor candidates, kept only when both ends share a label
    let mut intra: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| dist(points[i], points[a]).total_cmp(&dist(points[i], points[b])).then(a.cmp(&b)));
        for &j in order.iter().take(options.k_neighbors) {
            if labels[i] == labels[j] {
                intra.insert((i.min(j), i.max(j)));
            }
        }
    }

    // repair each cluster's connectivity with its shortest bridging pairs
    loop {
        let mut uf = UnionFind::new(n);
        for &(u, v) in &intra {
            uf.union(u, v);
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] && uf.find(i) != uf.find(j) {
                    let d = dist(points[i], points[j]);
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                intra.insert((i, j));
            }
            None => break,
        }
    }

    let cluster_count = labels.iter().max().map_or(0, |m| m + 1);
    let mut weighted: Vec<(usize, usize, f64)> = Vec::new();
    for c in 0..cluster_count {
        let mut own: Vec<(f64, usize, usize)> =
            intra.iter().filter(|&&(u, _)| labels[u] == c).map(|&(u, v)| (dist(points[u], points[v]), u, v)).collect();
        own.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        let m = own.len();
        for (rank, &(_, u, v)) in own.iter().enumerate() {
            let frac = if m > 1 { rank as f64 / (m - 1) as f64 } else { 0.0 };
            weighted.push((u, v, w_min + (w_max - w_min) * frac));
        }
    }

    // the closest cross-label pairs become the (sparse) inter-cluster edges
    let mut cross: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if labels[i] != labels[j] {
                cross.push((dist(points[i], points[j]), i, j));
            }
        }
    }
    cross.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut planted_cut_weights = Vec::new();
    for &(_, u, v) in cross.iter().take(options.inter_edges) {
        let w = inter_weight(rng, threshold);
        planted_cut_weights.push(w);
        weighted.push((u, v, w));
    }
    weighted.sort_by_key(|a| (a.0, a.1));

    let graph = WeightedGraph::from_edges(n, &weighted)?;
    let partition = NodePartition::from_labels(&labels);
    let params = InstanceParams {
        shape,
        seed,
        cluster_sizes: partition.sizes(),
        w_min,
        w_max,
        geometry: Some(options),
        intra_degree: None,
        inter_edges_per_pair: None,
    };
    finish(PlantedInstance { graph, partition, planted_cut_weights, params, positions: Some(points) })
}

fn finish(instance: PlantedInstance) -> Result<PlantedInstance> {
    instance.graph.topology().ensure_connected()?;
    if !check_sufficient_homogeneity(&instance.graph, &instance.partition)?.holds {
        return Err(Error::Infeasible("generated instance violates the homogeneity condition".into()));
    }
    Ok(instance)
}

/// `K` random connected clusters joined by `inter_edges_per_pair` edges for
/// every pair of clusters.
pub fn generate_planted_partition(
    seed: u64,
    cluster_sizes: &[usize],
    intra_degree: usize,
    inter_edges_per_pair: usize,
    w_min: f64,
    w_max: f64,
) -> Result<PlantedInstance> {
    let threshold = check_weight_bounds(w_min, w_max)?;
    if cluster_sizes.is_empty() || cluster_sizes.iter().any(|&s| s < 3) {
        return Err(Error::Infeasible("every cluster needs at least 3 nodes".into()));
    }
    if cluster_sizes.len() > 1 && inter_edges_per_pair == 0 {
        return Err(Error::Infeasible("clusters must be linked by at least one edge".into()));
    }
    let mut rng = RandomSource::new(seed);
    let mut offsets = Vec::with_capacity(cluster_sizes.len());
    let mut labels = Vec::new();
    for (c, &size) in cluster_sizes.iter().enumerate() {
        offsets.push(labels.len());
        labels.extend(std::iter::repeat_n(c, size));
    }
    let n = labels.len();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut weighted = Vec::new();
    for (c, &size) in cluster_sizes.iter().enumerate() {
        let base = offsets[c];
        let mut own = BTreeSet::new();
        for j in 1..size {
            let i = rng.below(j);
            own.insert((base + i, base + j));
        }
        let target = (size * intra_degree / 2).min(size * (size - 1) / 2);
        while own.len() < target {
            let (a, b) = (rng.below(size), rng.below(size));
            if a != b {
                own.insert((base + a.min(b), base + a.max(b)));
            }
        }
        for (u, v) in own {
            let w = w_min + (w_max - w_min) * rng.uniform();
            weighted.push((u, v, w));
            edges.insert((u, v));
        }
    }
    let mut planted_cut_weights = Vec::new();
    for a in 0..cluster_sizes.len() {
        for b in a + 1..cluster_sizes.len() {
            if inter_edges_per_pair > cluster_sizes[a] * cluster_sizes[b] {
                return Err(Error::Infeasible(format!(
                    "clusters {a} and {b} cannot host {inter_edges_per_pair} edges"
                )));
            }
            let mut placed = 0;
            while placed < inter_edges_per_pair {
                let u = offsets[a] + rng.below(cluster_sizes[a]);
                let v = offsets[b] + rng.below(cluster_sizes[b]);
                if edges.insert((u, v)) {
                    let w = inter_weight(&mut rng, threshold);
                    planted_cut_weights.push(w);
                    weighted.push((u, v, w));
                    placed += 1;
                }
            }
        }
    }
    weighted.sort_by_key(|a| (a.0, a.1));
    let graph = WeightedGraph::from_edges(n, &weighted)?;
    let params = InstanceParams {
        shape: Shape::Planted,
        seed,
        cluster_sizes: cluster_sizes.to_vec(),
        w_min,
        w_max,
        geometry: None,
        intra_degree: Some(intra_degree),
        inter_edges_per_pair: Some(inter_edges_per_pair),
    };
    finish(PlantedInstance {
        graph,
        partition: NodePartition::from_labels(&labels),
        planted_cut_weights,
        params,
        positions: None,
    })
}
