//! Private almost-minimum spanning tree: Prim-style growth where each new
//! edge is drawn by the exponential mechanism over the current frontier.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{minimum_spanning_tree, EdgeId, GraphTopology, NodeId, SpanningTree, WeightedGraph};
use crate::mechanism::{exponential_mechanism, exponential_probabilities, utility_sensitivity, PrivacyBudget};
use crate::rng::RandomSource;

/// Nodes already in the tree and the edges with exactly one endpoint among
/// them.
#[derive(Debug, Clone)]
pub struct Frontier {
    in_tree: Vec<bool>,
    size: usize,
    edges: BTreeSet<EdgeId>,
}

impl Frontier {
    pub fn new(topology: &GraphTopology, start: NodeId) -> Self {
        let mut f = Frontier { in_tree: vec![false; topology.node_count()], size: 0, edges: BTreeSet::new() };
        f.admit(topology, start);
        f
    }

    /// Adds `node`; its edges to the tree become internal, the rest join
    /// the frontier.
    pub fn admit(&mut self, topology: &GraphTopology, node: NodeId) {
        debug_assert!(!self.in_tree[node]);
        self.in_tree[node] = true;
        self.size += 1;
        for &(other, e) in topology.neighbors(node) {
            if self.in_tree[other] {
                self.edges.remove(&e);
            } else {
                self.edges.insert(e);
            }
        }
    }

    pub fn contains_node(&self, node: NodeId) -> bool {
        self.in_tree[node]
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Frontier edges in id order.
    pub fn range(&self) -> Vec<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Endpoint of a frontier edge that is outside the tree.
    pub fn outside_endpoint(&self, topology: &GraphTopology, edge: EdgeId) -> NodeId {
        let (u, v) = topology.endpoints(edge);
        if self.in_tree[u] {
            v
        } else {
            u
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PamstRun {
    /// Topology only: no weights are attached.
    pub tree: SpanningTree,
    pub start: NodeId,
    /// Selected edges in selection order.
    pub selections: Vec<EdgeId>,
    /// Frontier size at each selection.
    pub range_sizes: Vec<usize>,
    pub step_epsilon: f64,
}

impl PamstRun {
    pub fn invocations(&self) -> usize {
        self.selections.len()
    }

    pub fn total_epsilon(&self) -> f64 {
        self.step_epsilon * self.invocations() as f64
    }
}

fn check_input(g: &WeightedGraph) -> Result<()> {
    if g.node_count() < 2 {
        return Err(Error::InvalidParameter("PAMST needs at least 2 nodes".into()));
    }
    g.topology().ensure_connected()
}

/// Runs PAMST with total budget `budget.epsilon()`, split evenly over the
/// `|V| - 1` selections.
pub fn pamst(rng: &mut RandomSource, g: &WeightedGraph, budget: &PrivacyBudget) -> Result<PamstRun> {
    check_input(g)?;
    let topo = g.topology();
    let n = g.node_count();
    let step_epsilon = budget.epsilon() / (n - 1) as f64;
    let delta_u = utility_sensitivity(budget);
    let start = rng.below(n);
    let mut frontier = Frontier::new(topo, start);
    let mut selections = Vec::with_capacity(n - 1);
    let mut range_sizes = Vec::with_capacity(n - 1);
    while frontier.len() < n {
        let range = frontier.range();
        let chosen = exponential_mechanism(rng, g.weights().as_slice(), &range, step_epsilon, delta_u)?;
        let next = frontier.outside_endpoint(topo, chosen);
        selections.push(chosen);
        range_sizes.push(range.len());
        frontier.admit(topo, next);
    }
    let tree = SpanningTree::new(topo.clone(), selections.clone())?;
    Ok(PamstRun { tree, start, selections, range_sizes, step_epsilon })
}

/// Exact distribution of PAMST's output tree (sorted edge ids), with the
/// start node marginalized uniformly. Exponential in the graph size.
pub fn exact_output_distribution(
    g: &WeightedGraph,
    budget: &PrivacyBudget,
    max_nodes: usize,
) -> Result<BTreeMap<Vec<EdgeId>, f64>> {
    check_input(g)?;
    let n = g.node_count();
    if n > max_nodes {
        return Err(Error::TooLarge { what: "graph", count: n, cap: max_nodes });
    }
    let step_epsilon = budget.epsilon() / (n - 1) as f64;
    let delta_u = utility_sensitivity(budget);
    let mut out = BTreeMap::new();
    for start in 0..n {
        let frontier = Frontier::new(g.topology(), start);
        expand(g, frontier, Vec::new(), 1.0 / n as f64, step_epsilon, delta_u, &mut out)?;
    }
    Ok(out)
}

fn expand(
    g: &WeightedGraph,
    frontier: Frontier,
    chosen: Vec<EdgeId>,
    mass: f64,
    step_epsilon: f64,
    delta_u: f64,
    out: &mut BTreeMap<Vec<EdgeId>, f64>,
) -> Result<()> {
    if frontier.len() == g.node_count() {
        let mut key = chosen;
        key.sort_unstable();
        *out.entry(key).or_insert(0.0) += mass;
        return Ok(());
    }
    let range = frontier.range();
    let probs = exponential_probabilities(g.weights().as_slice(), &range, step_epsilon, delta_u)?;
    for (&edge, &p) in range.iter().zip(&probs) {
        if p == 0.0 {
            continue;
        }
        let mut next = frontier.clone();
        next.admit(g.topology(), frontier.outside_endpoint(g.topology(), edge));
        let mut path = chosen.clone();
        path.push(edge);
        expand(g, next, path, mass * p, step_epsilon, delta_u, out)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapEstimate {
    pub trials: usize,
    pub mean: f64,
    pub std_err: f64,
    pub min: f64,
}

/// Monte Carlo estimate of `E[w(T_pamst)] - w(T_mst)`.
pub fn expected_weight_gap(
    g: &WeightedGraph,
    budget: &PrivacyBudget,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<GapEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let optimum = minimum_spanning_tree(g)?.total_weight().unwrap_or(0.0);
    let mut gaps = Vec::with_capacity(trials);
    for _ in 0..trials {
        let run = pamst(rng, g, budget)?;
        let total: f64 = run.tree.edges().iter().map(|&e| g.weight(e)).sum();
        gaps.push(total - optimum);
    }
    let n = trials as f64;
    let mean = gaps.iter().sum::<f64>() / n;
    let var = if trials > 1 { gaps.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GapEstimate { trials, mean, std_err: (var / n).sqrt(), min })
}
