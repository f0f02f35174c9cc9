//! Metrics, bound calculators, Monte Carlo estimators and exact privacy
//! audits used to check the clustering and privacy guarantees empirically.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    distances_from, has_partitioning_topology, is_homogeneously_separable, subtree_restriction, EdgeId, NodeId,
    NodePartition, SpanningTree, TreeFragment, WeightedGraph,
};
use crate::homogeneity::{check_strong_homogeneity, check_sufficient_homogeneity, DEFAULT_ENUMERATION_CAP};
use crate::mechanism::{
    exponential_mechanism, exponential_probabilities, laplace_density, sanitize_weights, utility_u, PrivacyBudget,
    WeightReleaseParams,
};
use crate::pamst::{exact_output_distribution, pamst};
use crate::rng::RandomSource;

// ---------------------------------------------------------------------------
// partition agreement

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub exact_match: bool,
    pub adjusted_rand_index: f64,
}

fn choose2(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

fn ari_of(a: &[usize], b: &[usize]) -> f64 {
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    let mut rows: HashMap<usize, usize> = HashMap::new();
    let mut cols: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_insert(0) += 1;
        *rows.entry(x).or_insert(0) += 1;
        *cols.entry(y).or_insert(0) += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| choose2(c)).sum();
    let total = choose2(a.len());
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max_index = (sum_a + sum_b) / 2.0;
    let denom = max_index - expected;
    if denom == 0.0 {
        // both partitions trivial in the same way
        return if NodePartition::from_labels(a) == NodePartition::from_labels(b) { 1.0 } else { 0.0 };
    }
    (index - expected) / denom
}

/// Label-permutation-invariant equality and the adjusted Rand index.
pub fn partition_agreement(a: &NodePartition, b: &NodePartition) -> Result<Agreement> {
    if a.node_count() != b.node_count() {
        return Err(Error::SizeMismatch(a.node_count(), b.node_count()));
    }
    Ok(Agreement { exact_match: a == b, adjusted_rand_index: ari_of(a.labels(), b.labels()) })
}

/// ARI restricted to nodes that are not singletons in `predicted`.
pub fn ari_excluding_singletons(truth: &NodePartition, predicted: &NodePartition) -> Result<f64> {
    if truth.node_count() != predicted.node_count() {
        return Err(Error::SizeMismatch(truth.node_count(), predicted.node_count()));
    }
    let sizes = predicted.sizes();
    let keep: Vec<NodeId> = (0..predicted.node_count()).filter(|&n| sizes[predicted.label(n)] > 1).collect();
    if keep.is_empty() {
        return Ok(0.0);
    }
    let a: Vec<usize> = keep.iter().map(|&n| truth.label(n)).collect();
    let b: Vec<usize> = keep.iter().map(|&n| predicted.label(n)).collect();
    Ok(ari_of(&a, &b))
}

// ---------------------------------------------------------------------------
// Monte Carlo summaries

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub std_err: f64,
    /// 95% normal-approximation half-width.
    pub half_width: f64,
}

impl TrialSummary {
    pub fn from_counts(trials: usize, successes: usize) -> Self {
        assert!(successes <= trials && trials > 0);
        let f = successes as f64 / trials as f64;
        let std_err = (f * (1.0 - f) / trials as f64).sqrt();
        TrialSummary { trials, successes, frequency: f, std_err, half_width: 1.96 * std_err }
    }
}

// ---------------------------------------------------------------------------
// partitioning-topology probability bound

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// `ln|E|` inside the exponent's numerator, as in the theorem statement.
    TheoremText,
    /// The proof's per-step `exp(-t)`, giving a `1/|E|` factor per term.
    ProofForm,
}

impl BoundVariant {
    pub fn name(&self) -> &'static str {
        match self {
            BoundVariant::TheoremText => "theorem_text",
            BoundVariant::ProofForm => "proof_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    /// Maximum over all spanning trees, by enumeration.
    Enumerated,
    /// Upper bound `w_max / w_min` of the cluster's intra edges.
    IntraRatioBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterBoundInput {
    pub size: usize,
    pub alpha_bar: f64,
    pub max_weight: f64,
    pub min_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub variant: BoundVariant,
    pub bound_value: f64,
    pub vacuous: bool,
    pub epsilon: f64,
    pub delta_u: f64,
    pub node_count: usize,
    pub edge_count: usize,
    pub alpha_source: AlphaSource,
    pub clusters: Vec<ClusterBoundInput>,
}

/// Per-cluster inputs of the topology bound: size, alpha bar and the
/// extreme intra-cluster weights of the graph.
pub fn cluster_bound_inputs(
    g: &WeightedGraph,
    partition: &NodePartition,
) -> Result<(Vec<ClusterBoundInput>, AlphaSource)> {
    let sufficient = check_sufficient_homogeneity(g, partition)?;
    let (alphas, source): (Vec<Option<f64>>, _) = if g.node_count() <= DEFAULT_ENUMERATION_CAP {
        let report = check_strong_homogeneity(g, partition, DEFAULT_ENUMERATION_CAP)?;
        (report.clusters.iter().map(|c| c.alpha_bar).collect(), AlphaSource::Enumerated)
    } else {
        (sufficient.intra_bounds.iter().map(|b| b.map(|(lo, hi)| hi / lo)).collect(), AlphaSource::IntraRatioBound)
    };
    let sizes = partition.sizes();
    let inputs = (0..partition.cluster_count())
        .map(|i| {
            let (min_weight, max_weight) = sufficient.intra_bounds[i].unwrap_or((0.0, 0.0));
            ClusterBoundInput { size: sizes[i], alpha_bar: alphas[i].unwrap_or(1.0), max_weight, min_weight }
        })
        .collect();
    Ok((inputs, source))
}

/// Lower bound on the probability that PAMST at `epsilon` returns a tree
/// with a partitioning topology.
pub fn topology_bound(
    g: &WeightedGraph,
    partition: &NodePartition,
    epsilon: f64,
    delta_u: f64,
    variant: BoundVariant,
) -> Result<BoundReport> {
    let (clusters, alpha_source) = cluster_bound_inputs(g, partition)?;
    Ok(topology_bound_from_inputs(&clusters, alpha_source, g.node_count(), g.edge_count(), epsilon, delta_u, variant))
}

pub fn topology_bound_from_inputs(
    clusters: &[ClusterBoundInput],
    alpha_source: AlphaSource,
    node_count: usize,
    edge_count: usize,
    epsilon: f64,
    delta_u: f64,
    variant: BoundVariant,
) -> BoundReport {
    let steps = (node_count - 1) as f64;
    let ln_e = (edge_count as f64).ln();
    let mut failure = 0.0;
    for c in clusters {
        if c.size < 2 {
            continue;
        }
        let spread = c.alpha_bar * c.max_weight - c.min_weight;
        let privacy_term = if epsilon.is_infinite() { f64::INFINITY } else { epsilon * spread };
        let term = match variant {
            BoundVariant::TheoremText => (-(privacy_term + ln_e) / (2.0 * delta_u * steps)).exp(),
            BoundVariant::ProofForm => (-privacy_term / (2.0 * delta_u * steps)).exp() / edge_count as f64,
        };
        failure += (c.size - 1) as f64 * term;
    }
    let bound_value = 1.0 - failure;
    BoundReport {
        variant,
        bound_value,
        vacuous: bound_value <= 0.0,
        epsilon,
        delta_u,
        node_count,
        edge_count,
        alpha_source,
        clusters: clusters.to_vec(),
    }
}

/// Fraction of PAMST runs whose tree has a partitioning topology.
pub fn estimate_topology_probability(
    g: &WeightedGraph,
    partition: &NodePartition,
    budget: &PrivacyBudget,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut successes = 0;
    for _ in 0..trials {
        let run = pamst(rng, g, budget)?;
        if has_partitioning_topology(&run.tree, partition)? {
            successes += 1;
        }
    }
    Ok(TrialSummary::from_counts(trials, successes))
}

// ---------------------------------------------------------------------------
// separability after weight release

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityEstimate {
    pub summary: TrialSummary,
    /// One-sided Chebyshev lower bound `1 - V / (V + E^2)`; meaningful only
    /// when the estimated mean of phi is negative.
    pub chebyshev_bound: f64,
    pub vacuous: bool,
    pub phi_mean: f64,
    pub phi_variance: f64,
}

struct ClusterView {
    fragment: TreeFragment,
    cut_positions: Vec<usize>,
    fragment_positions: Vec<usize>,
}

fn cluster_view(tree: &SpanningTree, partition: &NodePartition, cluster: usize) -> Result<ClusterView> {
    if cluster >= partition.cluster_count() {
        return Err(Error::InvalidParameter(format!("no cluster {cluster}")));
    }
    let fragment = subtree_restriction(tree, &partition.members(cluster))?;
    let topo = tree.topology();
    let mut cut_positions = Vec::new();
    let mut fragment_positions = Vec::new();
    for (pos, &e) in tree.edges().iter().enumerate() {
        let (u, v) = topo.endpoints(e);
        let (inside_u, inside_v) = (partition.label(u) == cluster, partition.label(v) == cluster);
        if inside_u && inside_v {
            fragment_positions.push(pos);
        } else if inside_u || inside_v {
            cut_positions.push(pos);
        }
    }
    Ok(ClusterView { fragment, cut_positions, fragment_positions })
}

/// Frequency with which the sanitized restriction of `tree` to `cluster`
/// stays homogeneously separable by each of its incident cut edges, next to
/// the Chebyshev bound computed from `phi_draws` samples of the surrogate
/// `phi = (max Y)^2 - (min Z) * X_out`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_separability_preservation(
    g: &WeightedGraph,
    partition: &NodePartition,
    tree: &SpanningTree,
    cluster: usize,
    params: &WeightReleaseParams,
    trials: usize,
    phi_draws: usize,
    rng: &mut RandomSource,
) -> Result<SeparabilityEstimate> {
    if trials == 0 || phi_draws < 2 {
        return Err(Error::InvalidParameter("need trials >= 1 and phi_draws >= 2".into()));
    }
    let tree = tree.clone().weighted_by(g);
    let raw = tree.weights().expect("weighted").to_vec();
    let view = cluster_view(&tree, partition, cluster)?;
    if view.cut_positions.is_empty() || view.fragment.edge_count() == 0 {
        return Err(Error::InvalidParameter("cluster needs internal edges and an incident cut edge".into()));
    }
    for &pos in &view.cut_positions {
        if !is_homogeneously_separable(&view.fragment, raw[pos])? {
            return Err(Error::InvalidParameter(format!(
                "cluster {cluster} is not separable by edge {} before noise",
                tree.edges()[pos]
            )));
        }
    }

    let mut successes = 0;
    for _ in 0..trials {
        let released = sanitize_weights(rng, &raw, params);
        let fragment = TreeFragment {
            weights: Some(view.fragment_positions.iter().map(|&p| released[p]).collect()),
            ..view.fragment.clone()
        };
        let positive = fragment.weights.as_ref().unwrap().iter().all(|&w| w > 0.0);
        let ok = positive
            && view.cut_positions.iter().all(|&p| is_homogeneously_separable(&fragment, released[p]).unwrap_or(false));
        if ok {
            successes += 1;
        }
    }

    let intra = view.fragment.weights.as_ref().expect("weighted");
    let theta_max = params.normalize(intra.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let theta_min = params.normalize(intra.iter().copied().fold(f64::INFINITY, f64::min));
    let theta_out = params.normalize(view.cut_positions.iter().map(|&p| raw[p]).fold(f64::INFINITY, f64::min));
    let delta = params.scale() / params.p();
    let m = view.fragment.edge_count();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let lap = |rng: &mut RandomSource, loc: f64| crate::mechanism::laplace_sample(rng, loc, delta).expect("scale > 0");
    for _ in 0..phi_draws {
        let max_y = (0..m).map(|_| lap(rng, theta_max)).fold(f64::NEG_INFINITY, f64::max);
        let min_z = (0..m).map(|_| lap(rng, theta_min)).fold(f64::INFINITY, f64::min);
        let x_out = lap(rng, theta_out);
        let phi = max_y * max_y - min_z * x_out;
        sum += phi;
        sum_sq += phi * phi;
    }
    let n = phi_draws as f64;
    let phi_mean = sum / n;
    let phi_variance = ((sum_sq - n * phi_mean * phi_mean) / (n - 1.0)).max(0.0);
    let vacuous = phi_mean >= 0.0;
    let chebyshev_bound = if vacuous { 0.0 } else { 1.0 - phi_variance / (phi_variance + phi_mean * phi_mean) };
    Ok(SeparabilityEstimate {
        summary: TrialSummary::from_counts(trials, successes),
        chebyshev_bound,
        vacuous,
        phi_mean,
        phi_variance,
    })
}

// ---------------------------------------------------------------------------
// cluster definition and tree paths

pub const CLUSTER_DEFINITION_CAP: usize = 15;

/// Brute-force check of the minimum-path-distance cluster definition: for
/// every split of `candidate` into nonempty `C1`, `C2`, the nodes of
/// `d_space \ C1` closest to `C1` all lie in `C2`.
pub fn check_cluster_definition(
    g: &WeightedGraph,
    d_space: &BTreeSet<NodeId>,
    candidate: &BTreeSet<NodeId>,
) -> Result<bool> {
    if candidate.len() > CLUSTER_DEFINITION_CAP {
        return Err(Error::TooLarge { what: "candidate set", count: candidate.len(), cap: CLUSTER_DEFINITION_CAP });
    }
    if !candidate.is_subset(d_space) {
        return Err(Error::InvalidParameter("candidate must be a subset of the node space".into()));
    }
    if let Some(&bad) = d_space.iter().find(|&&n| n >= g.node_count()) {
        return Err(Error::NodeOutOfRange { node: bad, count: g.node_count() });
    }
    if candidate.len() <= 2 {
        return Ok(false);
    }
    let members: Vec<NodeId> = candidate.iter().copied().collect();
    let k = members.len();
    for mask in 1u32..(1 << k) - 1 {
        let c1: Vec<NodeId> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| members[i]).collect();
        let dist = distances_from(g, &c1);
        let outside: Vec<NodeId> = d_space.iter().copied().filter(|n| !c1.contains(n)).collect();
        let best = outside.iter().map(|&z| dist[z]).fold(f64::INFINITY, f64::min);
        let tol = 1e-12 * best.abs().max(1.0);
        let argmin_in_c2 = outside
            .iter()
            .filter(|&&z| dist[z] == best || (dist[z] - best).abs() <= tol)
            .all(|z| candidate.contains(z));
        if !argmin_in_c2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every cluster induces a connected subtree, i.e. tree paths
/// between members of a cluster never leave it.
pub fn clusters_are_subtrees(tree: &SpanningTree, partition: &NodePartition) -> Result<bool> {
    for c in 0..partition.cluster_count() {
        let frag = subtree_restriction(tree, &partition.members(c))?;
        if !frag.is_connected(tree.topology()) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// exact privacy audits

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub max_log_ratio: f64,
    pub comparisons: usize,
}

/// `log(P_w(r) / P_w'(r))` for every outcome of the exponential mechanism
/// over the full range of `w`.
pub fn exponential_log_ratios(w: &[f64], w_prime: &[f64], epsilon_step: f64, delta_u: f64) -> Result<Vec<f64>> {
    let range: Vec<EdgeId> = (0..w.len()).collect();
    let p = exponential_probabilities(w, &range, epsilon_step, delta_u)?;
    let q = exponential_probabilities(w_prime, &range, epsilon_step, delta_u)?;
    Ok(p.iter().zip(&q).map(|(a, b)| (a / b).ln()).collect())
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![(lo + hi) / 2.0];
    }
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn for_each_offset<F: FnMut(&[f64])>(dims: usize, grid: &[f64], mut visit: F) {
    let mut idx = vec![0usize; dims];
    let mut offset = vec![grid[0]; dims];
    loop {
        visit(&offset);
        let mut d = 0;
        loop {
            if d == dims {
                return;
            }
            idx[d] += 1;
            if idx[d] < grid.len() {
                offset[d] = grid[idx[d]];
                break;
            }
            idx[d] = 0;
            offset[d] = grid[0];
            d += 1;
        }
    }
}

/// Largest log-probability ratio of the exponential mechanism between `base`
/// and any neighbor `base + offset`, offsets on a `grid_points`-per-axis grid
/// of `[-mu, mu]^|range|`. Sensitivity is `2 mu`.
pub fn mechanism_privacy_audit(base: &[f64], epsilon_step: f64, mu: f64, grid_points: usize) -> Result<AuditReport> {
    if base.is_empty() || base.len() > 6 {
        return Err(Error::InvalidParameter("range size must be in 1..=6".into()));
    }
    if grid_points == 0 {
        return Err(Error::InvalidParameter("grid needs at least one point".into()));
    }
    let grid = linspace(-mu, mu, grid_points);
    let delta_u = 2.0 * mu;
    let mut worst: f64 = 0.0;
    let mut comparisons = 0;
    let mut failure = None;
    for_each_offset(base.len(), &grid, |offset| {
        let neighbor: Vec<f64> = base.iter().zip(offset).map(|(w, o)| w + o).collect();
        match exponential_log_ratios(base, &neighbor, epsilon_step, delta_u) {
            Ok(ratios) => {
                for r in ratios {
                    worst = worst.max(r.abs());
                    comparisons += 1;
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(AuditReport { max_log_ratio: worst, comparisons }),
    }
}

/// Largest log density ratio between Laplace noise centered at `location`
/// and at `location ± mu`, scale `mu / epsilon`, over the points `xs`.
pub fn laplace_privacy_audit(location: f64, epsilon: f64, mu: f64, xs: &[f64]) -> AuditReport {
    let scale = mu / epsilon;
    let mut worst: f64 = 0.0;
    for &x in xs {
        for shifted in [location - mu, location + mu] {
            let r = (laplace_density(x, location, scale) / laplace_density(x, shifted, scale)).ln();
            worst = worst.max(r.abs());
        }
    }
    AuditReport { max_log_ratio: worst, comparisons: 2 * xs.len() }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReleaseAudit {
    /// Worst single-edge log density ratio.
    pub max_edge_log_ratio: f64,
    /// Worst joint log density ratio over all edges.
    pub max_joint_log_ratio: f64,
    pub edges: usize,
}

/// Density-ratio audit of the weight release at scale `mu / epsilon`: the
/// sanitized vector of `weights` against neighbors shifted by `±mu` per
/// edge, evaluated at each grid point `x` (in raw-weight units around each
/// weight).
pub fn weight_release_privacy_audit(
    weights: &[f64],
    epsilon: f64,
    mu: f64,
    tau: f64,
    p: f64,
    offsets: &[f64],
) -> Result<ReleaseAudit> {
    let params = WeightReleaseParams::new(mu / epsilon, tau, p)?;
    let (scale, m) = (params.scale() / params.p(), weights.len());
    let mut max_edge: f64 = 0.0;
    let mut max_joint: f64 = 0.0;
    for &x in offsets {
        for sign in [-1.0, 1.0] {
            let mut joint = 0.0;
            for &w in weights {
                let observed = params.normalize(w + x);
                let here = laplace_density(observed, params.normalize(w), scale);
                let there = laplace_density(observed, params.normalize(w + sign * mu), scale);
                let r = (here / there).ln();
                max_edge = max_edge.max(r.abs());
                joint += r;
            }
            max_joint = max_joint.max(joint.abs());
        }
    }
    Ok(ReleaseAudit { max_edge_log_ratio: max_edge, max_joint_log_ratio: max_joint, edges: m })
}

/// Exact PAMST output distributions on `g` against every neighbor on a
/// `grid_points`-per-edge grid of `[-mu, mu]^|E|`.
pub fn pamst_privacy_audit(g: &WeightedGraph, budget: &PrivacyBudget, grid_points: usize) -> Result<AuditReport> {
    if g.edge_count() > 8 {
        return Err(Error::TooLarge { what: "edge set", count: g.edge_count(), cap: 8 });
    }
    let base = exact_output_distribution(g, budget, 6)?;
    let grid = linspace(-budget.mu(), budget.mu(), grid_points);
    let mut worst: f64 = 0.0;
    let mut comparisons = 0;
    let mut failure = None;
    for_each_offset(g.edge_count(), &grid, |offset| {
        let moved: Vec<f64> = g.weights().as_slice().iter().zip(offset).map(|(w, o)| w + o).collect();
        let result = g
            .with_weights(crate::graph::WeightFunction::new(moved))
            .and_then(|h| exact_output_distribution(&h, budget, 6));
        match result {
            Ok(other) => {
                for (tree, &p) in &base {
                    let q = other.get(tree).copied().unwrap_or(0.0);
                    worst = worst.max((p / q).ln().abs());
                    comparisons += 1;
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(AuditReport { max_log_ratio: worst, comparisons }),
    }
}

/// Frequency of `u(chosen) <= OPT - (2 delta_u / eps)(t + ln|R|)` over
/// `draws` runs of the exponential mechanism.
pub fn exponential_accuracy_tail(
    rng: &mut RandomSource,
    weights: &[f64],
    epsilon_step: f64,
    delta_u: f64,
    t: f64,
    draws: usize,
) -> Result<TrialSummary> {
    let range: Vec<EdgeId> = (0..weights.len()).collect();
    let threshold = -(2.0 * delta_u / epsilon_step) * (t + (range.len() as f64).ln());
    let mut violations = 0;
    for _ in 0..draws {
        let r = exponential_mechanism(rng, weights, &range, epsilon_step, delta_u)?;
        if utility_u(weights, &range, r)? <= threshold {
            violations += 1;
        }
    }
    Ok(TrialSummary::from_counts(draws, violations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(labels: &[usize]) -> NodePartition {
        NodePartition::from_labels(labels)
    }

    #[test]
    fn ari_examples() {
        let a = p(&[0, 0, 1, 1]);
        let same = partition_agreement(&a, &p(&[5, 5, 2, 2])).unwrap();
        assert!(same.exact_match);
        assert_eq!(same.adjusted_rand_index, 1.0);
        let crossed = partition_agreement(&a, &p(&[0, 1, 0, 1])).unwrap();
        assert!(!crossed.exact_match);
        assert!((crossed.adjusted_rand_index + 0.5).abs() < 1e-12);
        let degenerate = partition_agreement(&p(&[0, 1, 2, 3]), &p(&[0, 0, 0, 0])).unwrap();
        assert_eq!(degenerate.adjusted_rand_index, 0.0);
        assert!(partition_agreement(&a, &p(&[0, 0, 1])).is_err());
    }

    #[test]
    fn singleton_exclusion() {
        let truth = p(&[0, 0, 0, 1, 1, 1]);
        let predicted = p(&[0, 0, 2, 1, 1, 1]);
        assert!(ari_excluding_singletons(&truth, &predicted).unwrap() == 1.0);
        assert!(partition_agreement(&truth, &predicted).unwrap().adjusted_rand_index < 1.0);
    }

    #[test]
    fn summary_counts() {
        let s = TrialSummary::from_counts(100, 25);
        assert_eq!(s.frequency, 0.25);
        assert!((s.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn linspace_and_grid() {
        assert_eq!(linspace(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        let mut count = 0;
        for_each_offset(3, &[0.0, 1.0, 2.0, 3.0, 4.0], |_| count += 1);
        assert_eq!(count, 125);
    }
}
