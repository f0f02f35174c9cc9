//! MST-cut clustering driven by the density-based validity index (DBCVI).
//!
//! Clusters are the connected components of the tree minus the cut edges.
//! A cluster's dispersion is its heaviest internal edge (0 for a singleton);
//! its separation is its lightest incident cut edge (1 while nothing is
//! cut). The partition score is the size-weighted mean of
//! `(sep - disp) / max(sep, disp)` over clusters.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, NodePartition, SpanningTree};

/// `(sep - disp) / max(sep, disp)`.
pub fn validity_index(disp: f64, sep: f64) -> Result<f64> {
    let denom = sep.max(disp);
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::Undefined("validity index with zero separation and dispersion".into()));
    }
    Ok((sep - disp) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Summary {
    size: usize,
    disp: f64,
    /// Lightest incident cut edge; `None` when no cut touches the cluster.
    sep: Option<f64>,
}

impl Summary {
    fn separation(&self, k: usize) -> f64 {
        if k == 1 {
            1.0
        } else {
            self.sep.unwrap_or(1.0)
        }
    }

    fn term(&self, k: usize, n: usize) -> f64 {
        let v = validity_index(self.disp, self.separation(k)).expect("weights are positive");
        self.size as f64 / n as f64 * v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterIndex {
    pub size: usize,
    pub dispersion: f64,
    pub separation: f64,
    pub validity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterIndexReport {
    pub clusters: Vec<ClusterIndex>,
    pub dbcvi: f64,
}

type Side = (Summary, Vec<NodeId>);

/// A forest obtained by cutting edges of a weighted spanning tree.
#[derive(Debug, Clone)]
pub struct ClusteringState {
    tree: SpanningTree,
    weights: Vec<f64>,
    adjacency: Vec<Vec<(NodeId, usize)>>,
    is_cut: Vec<bool>,
    cut_edges: Vec<EdgeId>,
    cluster_of: Vec<usize>,
    summaries: Vec<Summary>,
    running: f64,
}

impl ClusteringState {
    /// Uncut state; the running score starts at -1.
    pub fn new(tree: &SpanningTree) -> Result<Self> {
        let weights = tree.weights().ok_or(Error::MissingWeights)?.to_vec();
        for (&e, &w) in tree.edges().iter().zip(&weights) {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::WeightOutOfRange { edge: e, weight: w });
            }
        }
        let n = tree.node_count();
        let topo = tree.topology();
        let mut adjacency = vec![Vec::new(); n];
        for (pos, &e) in tree.edges().iter().enumerate() {
            let (u, v) = topo.endpoints(e);
            adjacency[u].push((v, pos));
            adjacency[v].push((u, pos));
        }
        let mut state = ClusteringState {
            tree: tree.clone(),
            weights,
            adjacency,
            is_cut: vec![false; tree.edges().len()],
            cut_edges: Vec::new(),
            cluster_of: vec![0; n],
            summaries: Vec::new(),
            running: -1.0,
        };
        let whole = state.explore(0, None);
        state.summaries.push(whole.0);
        Ok(state)
    }

    /// State after cutting `cuts` in order, regardless of score changes.
    pub fn with_cuts(tree: &SpanningTree, cuts: &[EdgeId]) -> Result<Self> {
        let mut state = ClusteringState::new(tree)?;
        for &e in cuts {
            state.apply_cut(e)?;
        }
        Ok(state)
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn node_count(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.summaries.len()
    }

    pub fn cut_edges(&self) -> &[EdgeId] {
        &self.cut_edges
    }

    pub fn cluster_of(&self, node: NodeId) -> usize {
        self.cluster_of[node]
    }

    /// Score carried by the greedy loop (-1 before any cut).
    pub fn running_dbcvi(&self) -> f64 {
        self.running
    }

    pub fn partition(&self) -> NodePartition {
        NodePartition::from_labels(&self.cluster_of)
    }

    pub fn members(&self, cluster: usize) -> Vec<NodeId> {
        (0..self.node_count()).filter(|&n| self.cluster_of[n] == cluster).collect()
    }

    /// Uncut tree edges in id order.
    pub fn uncut_edges(&self) -> Vec<EdgeId> {
        self.tree.edges().iter().zip(&self.is_cut).filter(|(_, &c)| !c).map(|(&e, _)| e).collect()
    }

    /// Component of `start` avoiding cut edges and `blocked`, with its
    /// dispersion and separation (`blocked` counts as cut).
    fn explore(&self, start: NodeId, blocked: Option<usize>) -> (Summary, Vec<NodeId>) {
        let mut seen = vec![false; self.node_count()];
        let mut nodes = vec![start];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut disp: f64 = 0.0;
        let mut sep: Option<f64> = None;
        while let Some(u) = queue.pop_front() {
            for &(v, pos) in &self.adjacency[u] {
                let w = self.weights[pos];
                if self.is_cut[pos] || blocked == Some(pos) {
                    sep = Some(sep.map_or(w, |s| s.min(w)));
                } else if !seen[v] {
                    seen[v] = true;
                    disp = disp.max(w);
                    nodes.push(v);
                    queue.push_back(v);
                }
            }
        }
        (Summary { size: nodes.len(), disp, sep }, nodes)
    }

    fn locate(&self, edge: EdgeId) -> Result<usize> {
        let pos = self.tree.position(edge).ok_or(Error::NotATreeEdge(edge))?;
        if self.is_cut[pos] {
            return Err(Error::AlreadyCut(edge));
        }
        Ok(pos)
    }

    /// Cluster index of `edge` and the two sides it separates.
    fn split(&self, edge: EdgeId) -> Result<(usize, Side, Side)> {
        let pos = self.locate(edge)?;
        let (u, v) = self.tree.topology().endpoints(edge);
        Ok((self.cluster_of[u], self.explore(u, Some(pos)), self.explore(v, Some(pos))))
    }

    fn score(summaries: &[Summary], n: usize) -> f64 {
        let k = summaries.len();
        summaries.iter().map(|s| s.term(k, n)).sum()
    }

    /// Score that cutting `edge` would produce; the state is unchanged.
    pub fn evaluate_cut(&self, edge: EdgeId) -> Result<f64> {
        let (c, (a, _), (b, _)) = self.split(edge)?;
        let mut next = self.summaries.clone();
        next[c] = a;
        next.push(b);
        Ok(Self::score(&next, self.node_count()))
    }

    /// Cuts `edge`. The endpoint listed first keeps the cluster index; the
    /// other side becomes cluster `K`. Returns the new score.
    pub fn apply_cut(&mut self, edge: EdgeId) -> Result<f64> {
        let (c, (a, _), (b, b_nodes)) = self.split(edge)?;
        let pos = self.locate(edge)?;
        let new_index = self.summaries.len();
        self.is_cut[pos] = true;
        self.cut_edges.push(edge);
        self.summaries[c] = a;
        self.summaries.push(b);
        for n in b_nodes {
            self.cluster_of[n] = new_index;
        }
        self.running = Self::score(&self.summaries, self.node_count());
        debug_assert!((self.running - dbcvi(self)).abs() < 1e-12);
        Ok(self.running)
    }

    fn fresh_summary(&self, cluster: usize) -> Result<Summary> {
        let first = self
            .cluster_of
            .iter()
            .position(|&c| c == cluster)
            .ok_or_else(|| Error::InvalidParameter(format!("no cluster {cluster}")))?;
        Ok(self.explore(first, None).0)
    }

    pub fn report(&self) -> ClusterIndexReport {
        let k = self.cluster_count();
        let clusters: Vec<ClusterIndex> = (0..k)
            .map(|c| {
                let s = self.fresh_summary(c).expect("cluster exists");
                let separation = s.separation(k);
                ClusterIndex {
                    size: s.size,
                    dispersion: s.disp,
                    separation,
                    validity: validity_index(s.disp, separation).expect("positive weights"),
                }
            })
            .collect();
        ClusterIndexReport { clusters, dbcvi: dbcvi(self) }
    }
}

/// Heaviest edge inside the cluster; 0 for a singleton.
pub fn dispersion(state: &ClusteringState, cluster: usize) -> Result<f64> {
    Ok(state.fresh_summary(cluster)?.disp)
}

/// Lightest cut edge incident to the cluster; 1 when `K = 1`.
pub fn separation(state: &ClusteringState, cluster: usize) -> Result<f64> {
    Ok(state.fresh_summary(cluster)?.separation(state.cluster_count()))
}

/// Partition score recomputed from the clusters' definitions.
pub fn dbcvi(state: &ClusteringState) -> f64 {
    let k = state.cluster_count();
    let fresh: Vec<Summary> = (0..k).map(|c| state.fresh_summary(c).expect("cluster exists")).collect();
    ClusteringState::score(&fresh, state.node_count())
}

pub fn evaluate_cut(state: &ClusteringState, candidate: EdgeId) -> Result<f64> {
    state.evaluate_cut(candidate)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutStep {
    pub edge: EdgeId,
    pub dbcvi: f64,
}

#[derive(Debug, Clone)]
pub struct DbmstcluOutcome {
    pub state: ClusteringState,
    pub report: ClusterIndexReport,
    /// Accepted cuts with the running score after each.
    pub trace: Vec<CutStep>,
}

impl DbmstcluOutcome {
    pub fn partition(&self) -> NodePartition {
        self.state.partition()
    }

    pub fn dbcvi(&self) -> f64 {
        self.state.running_dbcvi()
    }
}

/// Greedy loop: each round scans uncut edges in id order and keeps the last
/// candidate whose score is `>=` the best so far (starting from the running
/// score); stops when no candidate qualifies or the score reaches 1.
pub fn run_dbmstclu(tree: &SpanningTree) -> Result<DbmstcluOutcome> {
    run_dbmstclu_with(tree, |_, _, _| {})
}

/// As [`run_dbmstclu`], calling `observe(state, candidate, score)` for every
/// candidate evaluation.
pub fn run_dbmstclu_with<F>(tree: &SpanningTree, mut observe: F) -> Result<DbmstcluOutcome>
where
    F: FnMut(&ClusteringState, EdgeId, f64),
{
    let mut state = ClusteringState::new(tree)?;
    let mut trace = Vec::new();
    let max_rounds = tree.edges().len();
    while state.running_dbcvi() < 1.0 && trace.len() < max_rounds {
        let mut best: Option<EdgeId> = None;
        let mut best_score = state.running_dbcvi();
        for e in state.uncut_edges() {
            let score = state.evaluate_cut(e)?;
            observe(&state, e, score);
            if score >= best_score {
                best = Some(e);
                best_score = score;
            }
        }
        let Some(edge) = best else { break };
        state.apply_cut(edge)?;
        trace.push(CutStep { edge, dbcvi: best_score });
    }
    let report = state.report();
    Ok(DbmstcluOutcome { state, report, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn path6() -> SpanningTree {
        let g =
            WeightedGraph::from_edges(6, &[(0, 1, 0.2), (1, 2, 0.2), (2, 3, 0.9), (3, 4, 0.2), (4, 5, 0.2)]).unwrap();
        crate::graph::minimum_spanning_tree(&g).unwrap()
    }

    const AB: EdgeId = 0;
    const BC: EdgeId = 1;
    const CD: EdgeId = 2;

    #[test]
    fn validity_values() {
        assert_eq!(validity_index(0.4, 0.4).unwrap(), 0.0);
        assert!((validity_index(0.2, 0.9).unwrap() - 7.0 / 9.0).abs() < 1e-15);
        assert!((validity_index(0.9, 0.2).unwrap() + 7.0 / 9.0).abs() < 1e-15);
        assert!(validity_index(0.0, 0.0).is_err());
    }

    #[test]
    fn dispersion_and_separation() {
        let t = path6();
        let s = ClusteringState::new(&t).unwrap();
        assert_eq!(separation(&s, 0).unwrap(), 1.0);
        assert_eq!(dispersion(&s, 0).unwrap(), 0.9);

        let s = ClusteringState::with_cuts(&t, &[AB]).unwrap();
        assert_eq!(dispersion(&s, s.cluster_of(0)).unwrap(), 0.0);
        assert_eq!(separation(&s, s.cluster_of(0)).unwrap(), 0.2);

        let s = ClusteringState::with_cuts(&t, &[CD]).unwrap();
        assert_eq!(separation(&s, s.cluster_of(0)).unwrap(), 0.9);
        assert_eq!(dispersion(&s, s.cluster_of(0)).unwrap(), 0.2);

        // cluster {c} between cuts of weight 0.2 and 0.9
        let s = ClusteringState::with_cuts(&t, &[CD, BC]).unwrap();
        assert_eq!(separation(&s, s.cluster_of(2)).unwrap(), 0.2);
    }

    #[test]
    fn dbcvi_values() {
        let t = path6();
        let s = ClusteringState::new(&t).unwrap();
        assert!((dbcvi(&s) - 0.1).abs() < 1e-12);
        assert_eq!(s.running_dbcvi(), -1.0);
        let s = ClusteringState::with_cuts(&t, &[CD]).unwrap();
        assert!((dbcvi(&s) - 7.0 / 9.0).abs() < 1e-12);
        let s = ClusteringState::with_cuts(&t, &[AB]).unwrap();
        assert!((dbcvi(&s) + 26.0 / 54.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_cut_values() {
        let t = path6();
        let s = ClusteringState::new(&t).unwrap();
        assert!((s.evaluate_cut(CD).unwrap() - 7.0 / 9.0).abs() < 1e-12);
        assert!((s.evaluate_cut(AB).unwrap() + 26.0 / 54.0).abs() < 1e-12);
        let s = ClusteringState::with_cuts(&t, &[CD]).unwrap();
        assert!((s.evaluate_cut(BC).unwrap() - 5.0 / 9.0).abs() < 1e-12);
        assert_eq!(s.evaluate_cut(CD), Err(Error::AlreadyCut(CD)));
        assert_eq!(s.evaluate_cut(99), Err(Error::NotATreeEdge(99)));
        assert_eq!(s.cut_edges(), &[CD]);
    }

    #[test]
    fn path_run_cuts_only_the_heavy_edge() {
        let out = run_dbmstclu(&path6()).unwrap();
        assert_eq!(out.state.cut_edges(), &[CD]);
        assert_eq!(out.state.cluster_count(), 2);
        assert!((out.dbcvi() - 7.0 / 9.0).abs() < 1e-12);
        assert_eq!(out.partition(), NodePartition::from_labels(&[0, 0, 0, 1, 1, 1]));
        assert_eq!(out.report.clusters.len(), 2);
        assert!((out.report.dbcvi - out.dbcvi()).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_weights() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 0.0), (1, 2, 0.5)]).unwrap();
        let t = crate::graph::minimum_spanning_tree(&g).unwrap();
        assert!(matches!(run_dbmstclu(&t), Err(Error::WeightOutOfRange { .. })));
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let t = crate::graph::minimum_spanning_tree(&g).unwrap();
        assert!(run_dbmstclu(&t).is_ok());
        let unweighted = t.without_weights();
        assert_eq!(run_dbmstclu(&unweighted).unwrap_err(), Error::MissingWeights);
    }

    #[test]
    fn single_node_tree() {
        let g = WeightedGraph::from_edges(1, &[]).unwrap();
        let t = crate::graph::minimum_spanning_tree(&g).unwrap();
        let out = run_dbmstclu(&t).unwrap();
        assert_eq!(out.state.cluster_count(), 1);
        assert!(out.trace.is_empty());
    }
}
