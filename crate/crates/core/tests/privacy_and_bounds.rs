mod common;

use proptest::prelude::*;

use privmst::analysis::{
    ari_excluding_singletons, estimate_separability_preservation, estimate_topology_probability,
    exponential_accuracy_tail, exponential_log_ratios, laplace_privacy_audit, mechanism_privacy_audit,
    pamst_privacy_audit, partition_agreement, topology_bound, weight_release_privacy_audit, AlphaSource, BoundVariant,
};
use privmst::graph::has_partitioning_topology;
use privmst::mechanism::{utility_sensitivity, WeightReleaseParams};
use privmst::{minimum_spanning_tree, pamst, NodePartition, PrivacyBudget, RandomSource, WeightedGraph};

fn two_triangles() -> (WeightedGraph, NodePartition) {
    let g = WeightedGraph::from_edges(
        6,
        &[(0, 1, 0.1), (1, 2, 0.2), (0, 2, 0.3), (3, 4, 0.1), (4, 5, 0.2), (3, 5, 0.3), (2, 3, 0.95)],
    )
    .unwrap();
    (g, NodePartition::from_labels(&[0, 0, 0, 1, 1, 1]))
}

fn path6() -> (WeightedGraph, NodePartition) {
    let g = WeightedGraph::from_edges(6, &[(0, 1, 0.2), (1, 2, 0.2), (2, 3, 0.9), (3, 4, 0.2), (4, 5, 0.2)]).unwrap();
    (g, NodePartition::from_labels(&[0, 0, 0, 1, 1, 1]))
}

#[test]
fn frozen_bound_values() {
    let (g, p) = two_triangles();
    let t = topology_bound(&g, &p, 20.0, 0.2, BoundVariant::TheoremText).unwrap();
    let f = topology_bound(&g, &p, 20.0, 0.2, BoundVariant::ProofForm).unwrap();
    assert_eq!(t.alpha_source, AlphaSource::Enumerated);
    assert!((t.clusters[0].alpha_bar - 3.0).abs() < 1e-12);
    assert!((t.bound_value - 0.9994928281785221).abs() < 1e-12);
    assert!((f.bound_value - 0.99980830706977).abs() < 1e-12);
    assert!(!t.vacuous && !f.vacuous);

    let (g, p) = path6();
    let t = topology_bound(&g, &p, 1e-9, 0.2, BoundVariant::TheoremText).unwrap();
    let f = topology_bound(&g, &p, 1e-9, 0.2, BoundVariant::ProofForm).unwrap();
    assert!((t.bound_value - (1.0 - 4.0 / 5f64.sqrt())).abs() < 1e-9);
    assert!(t.vacuous);
    assert!((f.bound_value - 0.2).abs() < 1e-9);
}

#[test]
fn bound_grows_with_epsilon() {
    let (g, p) = two_triangles();
    for variant in [BoundVariant::TheoremText, BoundVariant::ProofForm] {
        let values: Vec<f64> = [0.1, 1.0, 5.0, 20.0]
            .iter()
            .map(|&e| topology_bound(&g, &p, e, 0.2, variant).unwrap().bound_value)
            .collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0]), "{values:?}");
        assert!(values.iter().all(|&v| v <= 1.0));
    }
}

#[test]
fn monte_carlo_topology_frequency_respects_both_bounds() {
    let (g, p) = two_triangles();
    for (i, eps) in [1.0, 5.0, 20.0].into_iter().enumerate() {
        let budget = PrivacyBudget::new(eps, 0.1).unwrap();
        let du = utility_sensitivity(&budget);
        let est =
            estimate_topology_probability(&g, &p, &budget, 2000, &mut RandomSource::for_trial(11, i as u64)).unwrap();
        for variant in [BoundVariant::TheoremText, BoundVariant::ProofForm] {
            let b = topology_bound(&g, &p, eps, du, variant).unwrap();
            assert!(
                est.frequency + 3.0 * est.std_err >= b.bound_value,
                "eps {eps} {variant:?} {est:?} {}",
                b.bound_value
            );
        }
    }
}

#[test]
fn separability_survives_small_noise() {
    let (g, p) = two_triangles();
    let tree = minimum_spanning_tree(&g).unwrap();
    assert!(has_partitioning_topology(&tree, &p).unwrap());
    let mut rng = RandomSource::new(4);
    let mut last = f64::INFINITY;
    for s in [1e-9, 0.01, 0.05] {
        let params = WeightReleaseParams::new(s, 1.0, 4.0).unwrap();
        let est = estimate_separability_preservation(&g, &p, &tree, 0, &params, 5000, 20_000, &mut rng).unwrap();
        assert!(!est.vacuous);
        assert!(est.summary.frequency + 3.0 * est.summary.std_err >= est.chebyshev_bound);
        assert!(est.chebyshev_bound <= last + 1e-3);
        last = est.chebyshev_bound;
        if s < 1e-6 {
            assert_eq!(est.summary.frequency, 1.0);
            // (0.2 + 1)^2 - (0.1 + 1)(0.95 + 1), all over p^2
            assert!((est.phi_mean - (1.44 - 1.1 * 1.95) / 16.0).abs() < 1e-6);
        }
    }
}

#[test]
fn exponential_mechanism_audit_on_grid() {
    for base in [vec![0.1, 0.5, 0.9], vec![0.3, 0.3, 0.3], vec![0.0, 1.0, 0.2, 0.7]] {
        for eps_step in [0.01, 0.5, 2.0] {
            let points = if base.len() == 3 { 5 } else { 3 };
            let r = mechanism_privacy_audit(&base, eps_step, 0.1, points).unwrap();
            assert!(r.max_log_ratio <= eps_step + 1e-9, "{base:?} {eps_step} {r:?}");
        }
    }
}

proptest! {
    #[test]
    fn log_ratios_are_antisymmetric_and_bounded(
        base in prop::collection::vec(0.0f64..1.0, 1..=6),
        shift in prop::collection::vec(-0.1f64..=0.1, 6),
        eps_step in 0.01f64..5.0,
    ) {
        let other: Vec<f64> = base.iter().zip(&shift).map(|(w, s)| w + s).collect();
        let forward = exponential_log_ratios(&base, &other, eps_step, 0.2).unwrap();
        let backward = exponential_log_ratios(&other, &base, eps_step, 0.2).unwrap();
        for (a, b) in forward.iter().zip(&backward) {
            prop_assert!((a + b).abs() < 1e-9);
            prop_assert!(a.abs() <= eps_step + 1e-9);
        }
    }

    #[test]
    fn pamst_always_returns_a_spanning_tree(seed in any::<u64>(), eps in 0.001f64..100.0) {
        let (g, _) = two_triangles();
        let run = pamst(&mut RandomSource::new(seed), &g, &PrivacyBudget::new(eps, 0.1).unwrap()).unwrap();
        prop_assert_eq!(run.tree.edges().len(), 5);
        prop_assert_eq!(run.invocations(), 5);
        prop_assert!((run.total_epsilon() - eps).abs() < 1e-9 * eps);
    }
}

#[test]
fn laplace_and_release_audits() {
    let xs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.05).collect();
    for eps in [0.1, 1.0, 3.0] {
        assert!(laplace_privacy_audit(0.4, eps, 0.1, &xs).max_log_ratio <= eps + 1e-9);
        let r = weight_release_privacy_audit(&[0.1, 0.2, 0.9], eps, 0.1, 1.0, 4.0, &xs).unwrap();
        assert!(r.max_edge_log_ratio <= eps + 1e-9);
        assert!(r.max_joint_log_ratio <= 3.0 * eps + 1e-9);
    }
}

#[test]
fn pamst_exact_distribution_audit() {
    let g = WeightedGraph::from_edges(4, &[(0, 1, 0.1), (1, 2, 0.4), (2, 3, 0.2), (0, 3, 0.7), (0, 2, 0.5)]).unwrap();
    for eps in [0.5, 2.0] {
        let r = pamst_privacy_audit(&g, &PrivacyBudget::new(eps, 0.1).unwrap(), 3).unwrap();
        assert!(r.max_log_ratio <= eps + 1e-9, "{r:?}");
        assert!(r.comparisons > 0);
    }
}

#[test]
fn accuracy_tail() {
    let weights = [0.0, 11.5, 12.0, 15.5, 16.0, 19.5];
    let mut rng = RandomSource::new(21);
    for t in [1.0f64, 2.0, 3.0] {
        let s = exponential_accuracy_tail(&mut rng, &weights, 0.1, 0.2, t, 20_000).unwrap();
        assert!(s.frequency > 0.0);
        assert!(s.frequency <= (-t).exp() + 3.0 * s.std_err, "t {t} {s:?}");
    }
}

#[test]
fn ari_matches_pair_counting() {
    let mut rng = RandomSource::new(5);
    for _ in 0..200 {
        let a: Vec<usize> = (0..12).map(|_| rng.below(3)).collect();
        let b: Vec<usize> = (0..12).map(|_| rng.below(4)).collect();
        let (pa, pb) = (NodePartition::from_labels(&a), NodePartition::from_labels(&b));
        let expected = common::pair_counting_ari(&a, &b);
        if expected.is_finite() {
            assert!((partition_agreement(&pa, &pb).unwrap().adjusted_rand_index - expected).abs() < 1e-12);
        }
    }
    let truth = NodePartition::from_labels(&[0, 0, 0, 1, 1, 1]);
    assert_eq!(ari_excluding_singletons(&truth, &truth).unwrap(), 1.0);
}
