//! End-to-end private clustering: half the budget releases a spanning-tree
//! topology, the other half releases its weights, and clustering runs on
//! the sanitized tree as post-processing.

use serde::{Deserialize, Serialize};

use crate::dbmstclu::{run_dbmstclu, DbmstcluOutcome};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::mechanism::{weight_release, PrivacyBudget, WeightReleaseParams};
use crate::pamst::pamst;
use crate::rng::RandomSource;

pub const PROVENANCE_FORMAT: &str = "privmst.provenance";
pub const PROVENANCE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtclustConfig {
    pub budget: PrivacyBudget,
    /// Shift and divisor; when either is unset both are derived from
    /// `w_pub_max`.
    pub tau: Option<f64>,
    pub p: Option<f64>,
    /// Public upper bound on raw weights.
    pub w_pub_max: f64,
    pub seed: u64,
}

impl PtclustConfig {
    pub fn new(budget: PrivacyBudget, seed: u64) -> Self {
        PtclustConfig { budget, tau: None, p: None, w_pub_max: 1.0, seed }
    }

    /// Laplace scale of the weight release: `2 mu / epsilon`.
    pub fn release_scale(&self) -> f64 {
        2.0 * self.budget.mu() / self.budget.epsilon()
    }

    pub fn release_params(&self) -> Result<WeightReleaseParams> {
        let scale = self.release_scale();
        match (self.tau, self.p) {
            (Some(tau), Some(p)) => WeightReleaseParams::new(scale, tau, p),
            _ => WeightReleaseParams::derived(scale, self.w_pub_max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    pub epsilon: f64,
    pub mu: f64,
    pub tau: f64,
    pub p: f64,
    pub scale: f64,
    pub stage_epsilons: [f64; 2],
    pub pamst_start: usize,
    pub tree_edges: Vec<EdgeId>,
    pub clamp_count: usize,
    pub cut_edges: Vec<EdgeId>,
    pub dbcvi: f64,
    /// Cluster label per node, `1..=K`.
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PtclustOutcome {
    pub clustering: DbmstcluOutcome,
    pub provenance: Provenance,
}

/// Runs the private pipeline with all randomness drawn from `config.seed`.
pub fn ptclust(g: &WeightedGraph, config: &PtclustConfig) -> Result<PtclustOutcome> {
    if g.node_count() < 3 {
        return Err(Error::InvalidParameter("private clustering needs at least 3 nodes".into()));
    }
    let params = config.release_params()?;
    let half = config.budget.with_epsilon(config.budget.epsilon() / 2.0)?;
    let mut rng = RandomSource::new(config.seed);

    let topology = pamst(&mut rng, g, &half)?;
    let weighted = topology.tree.clone().weighted_by(g);
    let released = weight_release(&mut rng, &weighted, &params)?;
    if released.clamp_rate() >= 0.5 {
        return Err(Error::ExcessiveClamping { rate: released.clamp_rate() });
    }
    let clustering = run_dbmstclu(&released.tree)?;

    let provenance = Provenance {
        format: PROVENANCE_FORMAT.into(),
        version: PROVENANCE_VERSION,
        seed: config.seed,
        epsilon: config.budget.epsilon(),
        mu: config.budget.mu(),
        tau: params.tau(),
        p: params.p(),
        scale: params.scale(),
        stage_epsilons: [half.epsilon(), half.epsilon()],
        pamst_start: topology.start,
        tree_edges: topology.tree.edges().to_vec(),
        clamp_count: released.clamped,
        cut_edges: clustering.state.cut_edges().to_vec(),
        dbcvi: clustering.dbcvi(),
        assignment: clustering.partition().labels().iter().map(|l| l + 1).collect(),
    };
    Ok(PtclustOutcome { clustering, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::generate_planted_partition;
    use crate::graph::minimum_spanning_tree;

    #[test]
    fn budget_split_is_even() {
        let inst = generate_planted_partition(3, &[4, 4], 3, 1, 0.1, 0.3).unwrap();
        let cfg = PtclustConfig::new(PrivacyBudget::new(1.0, 0.1).unwrap(), 5);
        let out = ptclust(&inst.graph, &cfg).unwrap();
        let [a, b] = out.provenance.stage_epsilons;
        assert_eq!(a, 0.5);
        assert_eq!(a + b, 1.0);
        assert!((out.provenance.scale - 0.2).abs() < 1e-15);
    }

    #[test]
    fn zero_noise_limit_recovers_planted_partition() {
        for seed in 0..20 {
            let inst = generate_planted_partition(seed, &[5, 6, 4], 3, 1, 0.1, 0.3).unwrap();
            let mut cfg = PtclustConfig::new(PrivacyBudget::new(1e9, 0.1).unwrap(), seed);
            cfg.tau = Some(0.5);
            cfg.p = Some(2.0);
            let out = ptclust(&inst.graph, &cfg).unwrap();
            let mst = minimum_spanning_tree(&inst.graph).unwrap();
            assert_eq!(out.provenance.tree_edges, mst.edges());
            assert_eq!(out.clustering.partition(), inst.partition);
        }
    }

    #[test]
    fn replays_from_seed() {
        let inst = generate_planted_partition(8, &[4, 5], 3, 2, 0.1, 0.3).unwrap();
        let cfg = PtclustConfig::new(PrivacyBudget::new(0.7, 0.1).unwrap(), 42);
        let a = ptclust(&inst.graph, &cfg).unwrap().provenance;
        let b = ptclust(&inst.graph, &cfg).unwrap().provenance;
        assert_eq!(a, b);
    }

    #[test]
    fn grossly_unsuitable_parameters_are_rejected() {
        let inst = generate_planted_partition(8, &[4, 5], 3, 2, 0.1, 0.3).unwrap();
        let mut cfg = PtclustConfig::new(PrivacyBudget::new(1.0, 0.1).unwrap(), 1);
        cfg.tau = Some(10.0);
        cfg.p = Some(1.0);
        assert!(matches!(ptclust(&inst.graph, &cfg), Err(Error::ExcessiveClamping { .. })));
    }

    #[test]
    fn too_small_graph() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 0.5)]).unwrap();
        let cfg = PtclustConfig::new(PrivacyBudget::new(1.0, 0.1).unwrap(), 1);
        assert!(ptclust(&g, &cfg).is_err());
    }
}
