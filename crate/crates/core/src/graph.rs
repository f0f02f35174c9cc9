//! Weighted undirected graphs, spanning trees and node partitions.
//!
//! The topology of a graph is public; its weight function is the private
//! part. Edge ids are dense integers assigned in input order, and every
//! iteration order or tie-break in this crate is expressed in terms of them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Relative slack used when a strict inequality between two computed
/// weights must not be decided by rounding noise.
pub const STRICT_TOLERANCE: f64 = 1e-12;

/// `a < b`, treating values within `STRICT_TOLERANCE` (relative) as equal.
pub fn strictly_less(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    a < b && (b - a) > STRICT_TOLERANCE * scale
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphTopology {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    index: HashMap<(NodeId, NodeId), EdgeId>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

fn key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl GraphTopology {
    /// Builds a simple undirected topology. Connectivity is not required
    /// here; operations that need it check it themselves.
    pub fn new(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        let mut index = HashMap::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            for n in [u, v] {
                if n >= node_count {
                    return Err(Error::NodeOutOfRange { node: n, count: node_count });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
            }
            if index.insert(key(u, v), id).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge {u}-{v}")));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        Ok(GraphTopology { node_count, edges, index, adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: EdgeId) -> (NodeId, NodeId) {
        self.edges[edge]
    }

    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    /// `(neighbor, edge)` pairs incident to `node`, in edge-id order.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[node]
    }

    /// First node (by id) not reachable from node 0, if any.
    pub fn first_unreachable(&self) -> Option<NodeId> {
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    pub fn ensure_connected(&self) -> Result<()> {
        match self.first_unreachable() {
            Some(n) => Err(Error::Disconnected(n)),
            None => Ok(()),
        }
    }
}

/// Private edge weights, indexed by edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    weights: Vec<f64>,
}

impl WeightFunction {
    pub fn new(weights: Vec<f64>) -> Self {
        WeightFunction { weights }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, edge: EdgeId) -> f64 {
        self.weights[edge]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Sup-norm distance; neighboring weight functions are within `mu`.
    pub fn sup_distance(&self, other: &WeightFunction) -> f64 {
        self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    topology: Arc<GraphTopology>,
    weights: WeightFunction,
}

impl WeightedGraph {
    pub fn new(topology: Arc<GraphTopology>, weights: WeightFunction) -> Result<Self> {
        if weights.len() != topology.edge_count() {
            return Err(Error::SizeMismatch(weights.len(), topology.edge_count()));
        }
        if let Some((edge, &w)) = weights.as_slice().iter().enumerate().find(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidGraph(format!("non-finite weight {w} on edge {edge}")));
        }
        Ok(WeightedGraph { topology, weights })
    }

    /// Convenience constructor from `(u, v, w)` triples.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let topology = GraphTopology::new(node_count, edges.iter().map(|&(u, v, _)| (u, v)).collect())?;
        let weights = WeightFunction::new(edges.iter().map(|&(_, _, w)| w).collect());
        WeightedGraph::new(Arc::new(topology), weights)
    }

    pub fn topology(&self) -> &Arc<GraphTopology> {
        &self.topology
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn weight(&self, edge: EdgeId) -> f64 {
        self.weights.get(edge)
    }

    pub fn node_count(&self) -> usize {
        self.topology.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    /// Same topology, different weights.
    pub fn with_weights(&self, weights: WeightFunction) -> Result<Self> {
        WeightedGraph::new(self.topology.clone(), weights)
    }
}

/// A spanning tree of some topology, optionally carrying weights on its
/// edges (aligned with `edges`, which are kept sorted by id).
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    topology: Arc<GraphTopology>,
    edges: Vec<EdgeId>,
    weights: Option<Vec<f64>>,
}

impl SpanningTree {
    /// Validates that `edges` form a spanning tree of `topology`.
    pub fn new(topology: Arc<GraphTopology>, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let n = topology.node_count();
        if edges.len() + 1 != n {
            return Err(Error::InvalidGraph(format!("spanning tree needs {} edges, got {}", n - 1, edges.len())));
        }
        let mut uf = UnionFind::new(n);
        for &e in &edges {
            if e >= topology.edge_count() {
                return Err(Error::InvalidGraph(format!("edge {e} not in topology")));
            }
            let (u, v) = topology.endpoints(e);
            if !uf.union(u, v) {
                return Err(Error::InvalidGraph(format!("edge {e} closes a cycle")));
            }
        }
        Ok(SpanningTree { topology, edges, weights: None })
    }

    /// Attaches the graph's weights restricted to the tree edges.
    pub fn weighted_by(mut self, g: &WeightedGraph) -> Self {
        self.weights = Some(self.edges.iter().map(|&e| g.weight(e)).collect());
        self
    }

    /// Attaches explicit weights aligned with `edges()`.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::SizeMismatch(weights.len(), self.edges.len()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn without_weights(mut self) -> Self {
        self.weights = None;
        self
    }

    pub fn topology(&self) -> &Arc<GraphTopology> {
        &self.topology
    }

    pub fn node_count(&self) -> usize {
        self.topology.node_count()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn contains(&self, edge: EdgeId) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// Position of `edge` within `edges()`.
    pub fn position(&self, edge: EdgeId) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }

    pub fn weight_of(&self, edge: EdgeId) -> Option<f64> {
        let w = self.weights.as_ref()?;
        self.position(edge).map(|i| w[i])
    }

    pub fn total_weight(&self) -> Option<f64> {
        self.weights.as_ref().map(|w| w.iter().sum())
    }

    /// Tree adjacency: `(neighbor, edge)` per node.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for &e in &self.edges {
            let (u, v) = self.topology.endpoints(e);
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    /// Nodes on the unique tree path from `from` to `to`, endpoints included.
    pub fn path_nodes(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.node_count()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &(v, _) in &adj[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// Induced subgraph of a spanning tree on a node subset.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeFragment {
    pub nodes: BTreeSet<NodeId>,
    pub edges: Vec<EdgeId>,
    pub weights: Option<Vec<f64>>,
}

impl TreeFragment {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self, topology: &GraphTopology) -> bool {
        if self.nodes.len() <= 1 {
            return true;
        }
        self.edges.len() + 1 == self.nodes.len() && {
            let mut uf = UnionFind::new(topology.node_count());
            for &e in &self.edges {
                let (u, v) = topology.endpoints(e);
                uf.union(u, v);
            }
            let first = *self.nodes.iter().next().unwrap();
            self.nodes.iter().all(|&n| uf.find(n) == uf.find(first))
        }
    }

    fn weight_extremes(&self) -> Result<Option<(f64, f64)>> {
        let w = self.weights.as_ref().ok_or(Error::MissingWeights)?;
        if w.is_empty() {
            return Ok(None);
        }
        let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = w.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Some((min, max)))
    }
}

/// Assignment of every node to one of `K` clusters, labels `0..K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodePartition {
    labels: Vec<usize>,
    cluster_count: usize,
}

impl NodePartition {
    /// Relabels arbitrary labels to contiguous `0..K` in order of first
    /// appearance.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = HashMap::new();
        let labels: Vec<usize> = raw
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        NodePartition { cluster_count: map.len(), labels }
    }

    pub fn single_cluster(node_count: usize) -> Self {
        NodePartition { labels: vec![0; node_count], cluster_count: usize::from(node_count > 0) }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> usize {
        self.labels[node]
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn members(&self, cluster: usize) -> BTreeSet<NodeId> {
        self.labels.iter().enumerate().filter(|(_, &l)| l == cluster).map(|(n, _)| n).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cluster_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    fn check_against(&self, node_count: usize) -> Result<()> {
        if self.labels.len() != node_count {
            return Err(Error::SizeMismatch(self.labels.len(), node_count));
        }
        Ok(())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[derive(PartialEq)]
struct HeapItem {
    weight: f64,
    edge: EdgeId,
    node: NodeId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (weight, edge id)
        other.weight.total_cmp(&self.weight).then_with(|| other.edge.cmp(&self.edge))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prim's algorithm from node 0; ties go to the smallest edge id.
pub fn minimum_spanning_tree(g: &WeightedGraph) -> Result<SpanningTree> {
    let topo = g.topology();
    topo.ensure_connected()?;
    let n = topo.node_count();
    let mut in_tree = vec![false; n];
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    let mut heap = BinaryHeap::new();
    in_tree[0] = true;
    for &(v, e) in topo.neighbors(0) {
        heap.push(HeapItem { weight: g.weight(e), edge: e, node: v });
    }
    while let Some(HeapItem { edge, node, .. }) = heap.pop() {
        if in_tree[node] {
            continue;
        }
        in_tree[node] = true;
        chosen.push(edge);
        for &(v, e) in topo.neighbors(node) {
            if !in_tree[v] {
                heap.push(HeapItem { weight: g.weight(e), edge: e, node: v });
            }
        }
    }
    Ok(SpanningTree::new(topo.clone(), chosen)?.weighted_by(g))
}

/// Shortest-path distances from a set of sources (Dijkstra, weights ≥ 0).
pub fn distances_from(g: &WeightedGraph, sources: &[NodeId]) -> Vec<f64> {
    let topo = g.topology();
    let mut dist = vec![f64::INFINITY; topo.node_count()];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = 0.0;
        heap.push(HeapItem { weight: 0.0, edge: 0, node: s });
    }
    while let Some(HeapItem { weight: d, node: u, .. }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in topo.neighbors(u) {
            let nd = d + g.weight(e);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem { weight: nd, edge: 0, node: v });
            }
        }
    }
    dist
}

/// Minimum total edge weight over all paths between `u` and `v`.
pub fn minimum_path_distance(g: &WeightedGraph, u: NodeId, v: NodeId) -> Result<f64> {
    let n = g.node_count();
    for node in [u, v] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, count: n });
        }
    }
    if let Some((e, w)) = g.weights().as_slice().iter().enumerate().find(|(_, w)| **w < 0.0) {
        return Err(Error::InvalidGraph(format!("negative weight {w} on edge {e}")));
    }
    let d = distances_from(g, &[u])[v];
    if d.is_infinite() {
        return Err(Error::Disconnected(v));
    }
    Ok(d)
}

/// Tree edges whose endpoints lie in different clusters, in edge-id order.
pub fn cut_set(tree: &SpanningTree, partition: &NodePartition) -> Result<Vec<EdgeId>> {
    partition.check_against(tree.node_count())?;
    let topo = tree.topology();
    Ok(tree
        .edges()
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = topo.endpoints(e);
            partition.label(u) != partition.label(v)
        })
        .collect())
}

/// True iff every pair of clusters is crossed by at most one tree edge and
/// contracting the clusters turns the tree into a tree on `K` nodes.
pub fn has_partitioning_topology(tree: &SpanningTree, partition: &NodePartition) -> Result<bool> {
    let cuts = cut_set(tree, partition)?;
    let k = partition.cluster_count();
    if cuts.len() + 1 != k {
        return Ok(false);
    }
    let topo = tree.topology();
    let mut seen_pairs = BTreeSet::new();
    let mut uf = UnionFind::new(k);
    for &e in &cuts {
        let (u, v) = topo.endpoints(e);
        let (a, b) = key(partition.label(u), partition.label(v));
        if !seen_pairs.insert((a, b)) || !uf.union(a, b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The subgraph of `tree` induced by `nodes`.
pub fn subtree_restriction(tree: &SpanningTree, nodes: &BTreeSet<NodeId>) -> Result<TreeFragment> {
    if nodes.is_empty() {
        return Err(Error::InvalidParameter("node set must be nonempty".into()));
    }
    if let Some(&bad) = nodes.iter().find(|&&n| n >= tree.node_count()) {
        return Err(Error::NodeOutOfRange { node: bad, count: tree.node_count() });
    }
    let topo = tree.topology();
    let mut edges = Vec::new();
    let mut weights = tree.weights().map(|_| Vec::new());
    for (i, &e) in tree.edges().iter().enumerate() {
        let (u, v) = topo.endpoints(e);
        if nodes.contains(&u) && nodes.contains(&v) {
            edges.push(e);
            if let (Some(ws), Some(tw)) = (weights.as_mut(), tree.weights()) {
                ws.push(tw[i]);
            }
        }
    }
    Ok(TreeFragment { nodes: nodes.clone(), edges, weights })
}

/// Max edge weight over min edge weight of a fragment.
pub fn alpha_ratio(fragment: &TreeFragment) -> Result<f64> {
    match fragment.weight_extremes()? {
        None => Err(Error::Undefined("alpha of a fragment without edges".into())),
        Some((min, _)) if min <= 0.0 => Err(Error::InvalidParameter("fragment weights must be positive".into())),
        Some((min, max)) => Ok(max / min),
    }
}

/// `alpha * max_weight < s_weight`, strict; edgeless fragments qualify.
pub fn is_homogeneously_separable(fragment: &TreeFragment, s_weight: f64) -> Result<bool> {
    match fragment.weight_extremes()? {
        None => Ok(true),
        Some((min, _)) if min <= 0.0 => Err(Error::InvalidParameter("fragment weights must be positive".into())),
        Some((min, max)) => Ok(strictly_less(max / min * max, s_weight)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path6() -> WeightedGraph {
        WeightedGraph::from_edges(6, &[(0, 1, 0.2), (1, 2, 0.2), (2, 3, 0.9), (3, 4, 0.2), (4, 5, 0.2)]).unwrap()
    }

    fn as_tree(g: &WeightedGraph) -> SpanningTree {
        SpanningTree::new(g.topology().clone(), (0..g.edge_count()).collect()).unwrap().weighted_by(g)
    }

    fn frag(weights: &[f64]) -> TreeFragment {
        TreeFragment {
            nodes: (0..=weights.len()).collect(),
            edges: (0..weights.len()).collect(),
            weights: Some(weights.to_vec()),
        }
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(GraphTopology::new(3, vec![(0, 0)]).is_err());
        assert!(GraphTopology::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(GraphTopology::new(2, vec![(0, 2)]).is_err());
        let t = GraphTopology::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(t.edge_between(2, 1), Some(1));
    }

    #[test]
    fn mst_triangle() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)]).unwrap();
        let t = minimum_spanning_tree(&g).unwrap();
        assert_eq!(t.edges(), &[0, 1]);
        assert_eq!(t.total_weight(), Some(3.0));
    }

    #[test]
    fn mst_of_tree_is_itself() {
        let g = path6();
        assert_eq!(minimum_spanning_tree(&g).unwrap().edges(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn mst_four_cycle_drops_heaviest() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 0.1), (1, 2, 0.2), (2, 3, 0.3), (3, 0, 0.4)]).unwrap();
        assert_eq!(minimum_spanning_tree(&g).unwrap().edges(), &[0, 1, 2]);
    }

    #[test]
    fn mst_ties_prefer_small_edge_id() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(minimum_spanning_tree(&g).unwrap().edges(), &[0, 1]);
    }

    #[test]
    fn mst_disconnected_names_node() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(minimum_spanning_tree(&g), Err(Error::Disconnected(2)));
    }

    #[test]
    fn path_distances() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 0.2), (1, 2, 0.3)]).unwrap();
        assert!((minimum_path_distance(&g, 0, 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(minimum_path_distance(&g, 1, 1).unwrap(), 0.0);
        let tri = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        assert_eq!(minimum_path_distance(&tri, 0, 2).unwrap(), 2.0);
        let split = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert!(minimum_path_distance(&split, 0, 2).is_err());
    }

    #[test]
    fn cut_sets() {
        let g = path6();
        let t = as_tree(&g);
        let p = NodePartition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(cut_set(&t, &p).unwrap(), vec![2]);
        assert!(cut_set(&t, &NodePartition::single_cluster(6)).unwrap().is_empty());

        let star = WeightedGraph::from_edges(4, &[(0, 1, 0.1), (0, 2, 0.1), (0, 3, 0.1)]).unwrap();
        let st = as_tree(&star);
        let p = NodePartition::from_labels(&[0, 1, 1, 1]);
        assert_eq!(cut_set(&st, &p).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn partitioning_topology() {
        let g = path6();
        let t = as_tree(&g);
        assert!(has_partitioning_topology(&t, &NodePartition::from_labels(&[0, 0, 0, 1, 1, 1])).unwrap());
        assert!(has_partitioning_topology(&t, &NodePartition::single_cluster(6)).unwrap());

        // a-b, b-c, c-d, d-e, b-f
        let g =
            WeightedGraph::from_edges(6, &[(0, 1, 0.1), (1, 2, 0.1), (2, 3, 0.1), (3, 4, 0.1), (1, 5, 0.1)]).unwrap();
        let t = as_tree(&g);
        assert!(has_partitioning_topology(&t, &NodePartition::from_labels(&[0, 0, 1, 1, 1, 0])).unwrap());
        assert!(!has_partitioning_topology(&t, &NodePartition::from_labels(&[0, 1, 0, 1, 1, 1])).unwrap());
    }

    #[test]
    fn restrictions() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 0.1), (1, 2, 0.2), (2, 3, 0.3)]).unwrap();
        let t = as_tree(&g);
        let one = subtree_restriction(&t, &BTreeSet::from([2])).unwrap();
        assert_eq!(one.edge_count(), 0);
        let abc = subtree_restriction(&t, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(abc.edges, vec![0, 1]);
        assert_eq!(abc.weights, Some(vec![0.1, 0.2]));
        assert!(abc.is_connected(g.topology()));
        let ac = subtree_restriction(&t, &BTreeSet::from([0, 2])).unwrap();
        assert_eq!((ac.nodes.len(), ac.edge_count()), (2, 0));
        assert!(!ac.is_connected(g.topology()));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_ratio(&frag(&[0.2, 0.2, 0.2])).unwrap(), 1.0);
        assert!((alpha_ratio(&frag(&[0.1, 0.3])).unwrap() - 3.0).abs() < 1e-12);
        assert!((alpha_ratio(&frag(&[0.1, 0.2, 0.3])).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(alpha_ratio(&frag(&[0.7])).unwrap(), 1.0);
        assert!(alpha_ratio(&frag(&[])).is_err());
    }

    #[test]
    fn separability_boundary_is_strict() {
        assert!(is_homogeneously_separable(&frag(&[0.2, 0.2]), 0.9).unwrap());
        assert!(!is_homogeneously_separable(&frag(&[0.1, 0.3]), 0.9).unwrap());
        assert!(is_homogeneously_separable(&frag(&[0.1, 0.3]), 0.91).unwrap());
        assert!(is_homogeneously_separable(&frag(&[]), 0.0).unwrap());
    }

    #[test]
    fn tree_paths() {
        let t = as_tree(&path6());
        assert_eq!(t.path_nodes(1, 4), vec![1, 2, 3, 4]);
        assert_eq!(t.path_nodes(3, 3), vec![3]);
    }

    #[test]
    fn partition_relabels_contiguously() {
        let p = NodePartition::from_labels(&[7, 7, 3, 9, 3]);
        assert_eq!(p.labels(), &[0, 0, 1, 2, 1]);
        assert_eq!(p.sizes(), vec![2, 2, 1]);
    }
}
