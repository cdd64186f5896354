mod common;

use common::*;
use mcgs_core::baselines::{baseline_run, baseline_sample, weighted_without_replacement, BaselineId};
use mcgs_core::seeds::SeedStrategy;
use mcgs_core::SamplerConfig;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samplers whose samples stay connected on a connected graph.
const CONNECTED: [BaselineId; 5] = [BaselineId::Bf, BaselineId::Df, BaselineId::Sb, BaselineId::Ff, BaselineId::Rw];

fn arb_baseline() -> impl Strategy<Value = BaselineId> {
    prop::sample::select(BaselineId::ALL.to_vec())
}

fn arb_strategy() -> impl Strategy<Value = SeedStrategy> {
    prop::sample::select(SeedStrategy::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn budget_and_induction(
        g in arb_connected(40),
        id in arb_baseline(),
        strategy in arb_strategy(),
        phi in 0.05f64..=1.0,
        seed in any::<u64>(),
    ) {
        let cfg = SamplerConfig { phi, rng_seed: seed, seed_strategy: strategy, ..Default::default() };
        let budget = cfg.budget(g.node_count());
        prop_assume!(budget >= 1);
        let s = baseline_sample(id, &g, &cfg).unwrap();
        prop_assert_eq!(s.nodes.len(), budget);
        prop_assert!(s.nodes.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(&s.edges, &oracle_induced_edges(&g, &s.nodes));
        prop_assert_eq!(&s.provenance.algorithm, id.name());
    }

    #[test]
    fn traversals_stay_connected(
        g in arb_connected(40),
        i in 0usize..CONNECTED.len(),
        strategy in arb_strategy(),
        phi in 0.05f64..=1.0,
        seed in any::<u64>(),
    ) {
        let cfg = SamplerConfig { phi, rng_seed: seed, seed_strategy: strategy, ..Default::default() };
        prop_assume!(cfg.budget(g.node_count()) >= 1);
        let run = baseline_run(CONNECTED[i], &g, &cfg, None).unwrap();
        prop_assert!(induces_connected(&g, &run.sample.nodes), "{:?}", CONNECTED[i]);
        // The seed is the first node taken.
        prop_assert_eq!(Some(run.visit_order[0]), run.sample.provenance.seed_node);
    }

    #[test]
    fn same_seed_same_sample(g in arb_connected(40), id in arb_baseline(), seed in any::<u64>()) {
        let cfg = SamplerConfig { phi: 0.5, rng_seed: seed, ..Default::default() };
        prop_assume!(cfg.budget(g.node_count()) >= 1);
        prop_assert_eq!(baseline_sample(id, &g, &cfg).unwrap(), baseline_sample(id, &g, &cfg).unwrap());
    }

    #[test]
    fn weighted_picks_are_distinct(weights in prop::collection::vec(0.0f64..5.0, 1..30), seed in any::<u64>(), take in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picks = weighted_without_replacement(&mut rng, &weights, take);
        prop_assert_eq!(picks.len(), take.min(weights.len()));
        let mut sorted = picks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), picks.len());
        // Positive weights always come before zero weights.
        let first_zero = picks.iter().position(|&i| weights[i] == 0.0).unwrap_or(picks.len());
        prop_assert!(picks[first_zero..].iter().all(|&i| weights[i] == 0.0));
    }
}

#[test]
fn degree_weighted_first_pick_frequency() {
    // Star with five leaves: the center carries 5 of the 10 degree units.
    let g = mcgs_core::Graph::from_edges(6, (1..6).map(|l| (0, l))).unwrap();
    let trials = 4000;
    let hits = (0..trials)
        .filter(|&seed| {
            let cfg = SamplerConfig { phi: 1.0 / 6.0, rng_seed: seed, ..Default::default() };
            baseline_sample(BaselineId::Rdn, &g, &cfg).unwrap().nodes == [0]
        })
        .count();
    let freq = hits as f64 / trials as f64;
    assert!((freq - 0.5).abs() < 0.04, "center frequency {freq}");
}

#[test]
fn baselines_parse_by_name() {
    for id in BaselineId::ALL {
        assert_eq!(id.name().parse::<BaselineId>().unwrap(), id);
        assert_eq!(id.name().to_lowercase().parse::<BaselineId>().unwrap(), id);
    }
    assert!("XYZ".parse::<BaselineId>().is_err());
}

#[test]
fn fixture_baselines_run() {
    let g = load("ego.txt");
    for id in BaselineId::ALL {
        let cfg = SamplerConfig { phi: 0.2, rng_seed: 3, seed_strategy: SeedStrategy::HighBetweenness, ..Default::default() };
        let s = baseline_sample(id, &g, &cfg).unwrap();
        assert_eq!(s.nodes.len(), 69, "{id}");
    }
}
