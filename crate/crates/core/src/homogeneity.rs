//! Spanning-tree enumeration and the homogeneity conditions under which
//! MST-cut clustering recovers a planted partition exactly.

use crate::error::{Error, Result};
use crate::graph::{
    alpha_ratio, cut_set, is_homogeneously_separable, strictly_less, subtree_restriction, EdgeId, GraphTopology,
    NodePartition, SpanningTree, WeightedGraph,
};

/// Default node cap for exhaustive spanning-tree enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Calls `visit` with the (sorted) edge ids of every spanning tree.
pub fn for_each_spanning_tree<F>(topology: &GraphTopology, max_nodes: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[EdgeId]),
{
    let n = topology.node_count();
    if n > max_nodes {
        return Err(Error::TooLarge { what: "graph", count: n, cap: max_nodes });
    }
    let mut component: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    enumerate(topology, 0, &mut component, &mut chosen, &mut visit);
    Ok(())
}

fn enumerate<F: FnMut(&[EdgeId])>(
    topology: &GraphTopology,
    next: EdgeId,
    component: &mut Vec<usize>,
    chosen: &mut Vec<EdgeId>,
    visit: &mut F,
) {
    let needed = topology.node_count() - 1 - chosen.len();
    if needed == 0 {
        visit(chosen);
        return;
    }
    if topology.edge_count() - next < needed {
        return;
    }
    let (u, v) = topology.endpoints(next);
    let (cu, cv) = (component[u], component[v]);
    if cu != cv {
        let saved = component.clone();
        for c in component.iter_mut() {
            if *c == cv {
                *c = cu;
            }
        }
        chosen.push(next);
        enumerate(topology, next + 1, component, chosen, visit);
        chosen.pop();
        *component = saved;
    }
    enumerate(topology, next + 1, component, chosen, visit);
}

pub fn count_spanning_trees(topology: &GraphTopology, max_nodes: usize) -> Result<usize> {
    let mut count = 0;
    for_each_spanning_tree(topology, max_nodes, |_| count += 1)?;
    Ok(count)
}

/// Per-cluster outcome of a homogeneity check over a family of trees.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterHomogeneity {
    pub holds: bool,
    /// Largest alpha of the cluster's restriction over the trees examined;
    /// `None` if no restriction had an edge.
    pub alpha_bar: Option<f64>,
    /// Smallest `w(cut) - alpha * max` observed; positive when separable.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    pub clusters: Vec<ClusterHomogeneity>,
    pub trees_examined: usize,
}

impl HomogeneityReport {
    pub fn all_hold(&self) -> bool {
        self.clusters.iter().all(|c| c.holds)
    }
}

struct Accumulator {
    clusters: Vec<ClusterHomogeneity>,
    trees: usize,
    error: Option<Error>,
}

impl Accumulator {
    fn new(k: usize) -> Self {
        Accumulator {
            clusters: vec![ClusterHomogeneity { holds: true, alpha_bar: None, margin: f64::INFINITY }; k],
            trees: 0,
            error: None,
        }
    }

    fn absorb(&mut self, g: &WeightedGraph, partition: &NodePartition, tree: &SpanningTree) {
        if let Err(e) = self.try_absorb(g, partition, tree) {
            self.error.get_or_insert(e);
        }
    }

    fn try_absorb(&mut self, g: &WeightedGraph, partition: &NodePartition, tree: &SpanningTree) -> Result<()> {
        self.trees += 1;
        let cuts = cut_set(tree, partition)?;
        let topo = g.topology();
        for (i, slot) in self.clusters.iter_mut().enumerate() {
            let fragment = subtree_restriction(tree, &partition.members(i))?;
            let alpha = if fragment.edge_count() > 0 { Some(alpha_ratio(&fragment)?) } else { None };
            if let Some(a) = alpha {
                slot.alpha_bar = Some(slot.alpha_bar.map_or(a, |b: f64| b.max(a)));
            }
            let spread = match (alpha, &fragment.weights) {
                (Some(a), Some(w)) => a * w.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                _ => 0.0,
            };
            for &e in &cuts {
                let (u, v) = topo.endpoints(e);
                if partition.label(u) != i && partition.label(v) != i {
                    continue;
                }
                slot.margin = slot.margin.min(g.weight(e) - spread);
                if !is_homogeneously_separable(&fragment, g.weight(e))? {
                    slot.holds = false;
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<HomogeneityReport> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(HomogeneityReport { clusters: self.clusters, trees_examined: self.trees }),
        }
    }
}

fn check_partition(g: &WeightedGraph, partition: &NodePartition) -> Result<()> {
    if partition.node_count() != g.node_count() {
        return Err(Error::SizeMismatch(partition.node_count(), g.node_count()));
    }
    g.topology().ensure_connected()
}

/// Separability of every cluster's restriction by each incident cut edge,
/// over all spanning trees of `g`.
pub fn check_strong_homogeneity(
    g: &WeightedGraph,
    partition: &NodePartition,
    max_nodes: usize,
) -> Result<HomogeneityReport> {
    check_partition(g, partition)?;
    let mut acc = Accumulator::new(partition.cluster_count());
    let topo = g.topology().clone();
    for_each_spanning_tree(&topo, max_nodes, |edges| match SpanningTree::new(topo.clone(), edges.to_vec()) {
        Ok(t) => acc.absorb(g, partition, &t.weighted_by(g)),
        Err(e) => {
            acc.error.get_or_insert(e);
        }
    })?;
    acc.finish()
}

/// As `check_strong_homogeneity`, but only over minimum spanning trees.
pub fn check_weak_homogeneity(
    g: &WeightedGraph,
    partition: &NodePartition,
    max_nodes: usize,
) -> Result<HomogeneityReport> {
    check_partition(g, partition)?;
    let best = crate::graph::minimum_spanning_tree(g)?.total_weight().unwrap_or(0.0);
    let tol = 1e-12 * best.abs().max(1.0);
    let mut acc = Accumulator::new(partition.cluster_count());
    let topo = g.topology().clone();
    for_each_spanning_tree(&topo, max_nodes, |edges| {
        let total: f64 = edges.iter().map(|&e| g.weight(e)).sum();
        if total > best + tol {
            return;
        }
        match SpanningTree::new(topo.clone(), edges.to_vec()) {
            Ok(t) => acc.absorb(g, partition, &t.weighted_by(g)),
            Err(e) => {
                acc.error.get_or_insert(e);
            }
        }
    })?;
    acc.finish()
}

/// The homogeneity check restricted to one given tree (weights from `g`).
pub fn check_homogeneity_on_tree(
    g: &WeightedGraph,
    tree: &SpanningTree,
    partition: &NodePartition,
) -> Result<HomogeneityReport> {
    check_partition(g, partition)?;
    let mut acc = Accumulator::new(partition.cluster_count());
    acc.absorb(g, partition, &tree.clone().weighted_by(g));
    acc.finish()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SufficientHomogeneity {
    pub holds: bool,
    /// Smallest inter-cluster weight minus largest cluster threshold.
    pub margin: f64,
    /// Per cluster: `w_max^2 / w_min` over its intra edges (0 without any).
    pub thresholds: Vec<f64>,
    pub intra_bounds: Vec<Option<(f64, f64)>>,
}

/// Constructive condition implying strong homogeneity: every edge between
/// clusters `i` and `j` is heavier than both clusters' `w_max^2 / w_min`.
pub fn check_sufficient_homogeneity(g: &WeightedGraph, partition: &NodePartition) -> Result<SufficientHomogeneity> {
    if partition.node_count() != g.node_count() {
        return Err(Error::SizeMismatch(partition.node_count(), g.node_count()));
    }
    let k = partition.cluster_count();
    let topo = g.topology();
    let mut bounds: Vec<Option<(f64, f64)>> = vec![None; k];
    for (e, &(u, v)) in topo.edges().iter().enumerate() {
        let (lu, lv) = (partition.label(u), partition.label(v));
        if lu == lv {
            let w = g.weight(e);
            bounds[lu] = Some(match bounds[lu] {
                None => (w, w),
                Some((lo, hi)) => (lo.min(w), hi.max(w)),
            });
        }
    }
    let thresholds: Vec<f64> = bounds
        .iter()
        .map(|b| match b {
            Some((lo, hi)) if *lo > 0.0 => hi * hi / lo,
            Some(_) => f64::INFINITY,
            None => 0.0,
        })
        .collect();
    let mut holds = true;
    let mut min_inter = f64::INFINITY;
    for (e, &(u, v)) in topo.edges().iter().enumerate() {
        let (lu, lv) = (partition.label(u), partition.label(v));
        if lu != lv {
            let w = g.weight(e);
            min_inter = min_inter.min(w);
            let threshold = thresholds[lu].max(thresholds[lv]);
            if !strictly_less(threshold, w) {
                holds = false;
            }
        }
    }
    let max_threshold = thresholds.iter().copied().fold(0.0, f64::max);
    Ok(SufficientHomogeneity { holds, margin: min_inter - max_threshold, thresholds, intra_bounds: bounds })
}
