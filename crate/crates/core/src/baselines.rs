//! Classic reference samplers: node-, edge- and traversal-based.
//!
//! Every sampler stops at exactly `floor(n * phi)` nodes and returns the
//! induced subgraph of the chosen node set.

use std::collections::VecDeque;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{pagerank, PAGERANK_DAMPING, PAGERANK_TOLERANCE};
use crate::config::SamplerConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;
use crate::sample::{Provenance, Sample};
use crate::seeds::pick_seed_with;

/// Snowball branching cap.
pub const SNOWBALL_BRANCHING: usize = 5;
/// Forest fire forward-burning probability.
pub const FOREST_FIRE_FORWARD: f64 = 0.7;
/// Random walk restart-to-seed probability.
pub const WALK_RESTART: f64 = 0.15;
/// Random jump teleport probability.
pub const JUMP_PROBABILITY: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BaselineId {
    /// Random node.
    Rn,
    /// Random degree node.
    Rdn,
    /// Random PageRank node.
    Rpn,
    /// Random edge.
    Re,
    /// Random node-edge.
    Rne,
    /// Induced edge sampling (totally induced edge sampling).
    Ties,
    /// Breadth-first.
    Bf,
    /// Depth-first.
    Df,
    /// Snowball.
    Sb,
    /// Forest fire.
    Ff,
    /// Random walk.
    Rw,
    /// Random jump.
    Rj,
}

impl BaselineId {
    pub const ALL: [BaselineId; 12] = [
        BaselineId::Rn,
        BaselineId::Rdn,
        BaselineId::Rpn,
        BaselineId::Re,
        BaselineId::Rne,
        BaselineId::Ties,
        BaselineId::Bf,
        BaselineId::Df,
        BaselineId::Sb,
        BaselineId::Ff,
        BaselineId::Rw,
        BaselineId::Rj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaselineId::Rn => "RN",
            BaselineId::Rdn => "RDN",
            BaselineId::Rpn => "RPN",
            BaselineId::Re => "RE",
            BaselineId::Rne => "RNE",
            BaselineId::Ties => "TIES",
            BaselineId::Bf => "BF",
            BaselineId::Df => "DF",
            BaselineId::Sb => "SB",
            BaselineId::Ff => "FF",
            BaselineId::Rw => "RW",
            BaselineId::Rj => "RJ",
        }
    }

    /// Samplers that grow from a start node.
    pub fn is_traversal(self) -> bool {
        matches!(
            self,
            BaselineId::Bf | BaselineId::Df | BaselineId::Sb | BaselineId::Ff | BaselineId::Rw | BaselineId::Rj
        )
    }
}

impl std::str::FromStr for BaselineId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaselineId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown baseline `{s}`")))
    }
}

impl std::fmt::Display for BaselineId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A baseline sample plus the order in which nodes joined it.
#[derive(Debug, Clone)]
pub struct BaselineRun {
    pub sample: Sample,
    pub visit_order: Vec<NodeId>,
}

/// Samples `g` with baseline `id`, seeded from `cfg.rng_seed`.
pub fn baseline_sample(id: BaselineId, g: &Graph, cfg: &SamplerConfig) -> Result<Sample> {
    baseline_run(id, g, cfg, None).map(|r| r.sample)
}

/// Like [`baseline_sample`], optionally with a precomputed start node so
/// callers can cache expensive seed strategies.
pub fn baseline_run(id: BaselineId, g: &Graph, cfg: &SamplerConfig, seed_node: Option<NodeId>) -> Result<BaselineRun> {
    cfg.validate(g.node_count())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let budget = cfg.budget(g.node_count());
    let seed = if id.is_traversal() {
        let s = match seed_node {
            Some(s) if s < g.node_count() => s,
            Some(s) => {
                return Err(Error::NodeOutOfRange {
                    node: s,
                    node_count: g.node_count(),
                })
            }
            None => pick_seed_with(g, cfg.seed_strategy, &mut rng, cfg.execution),
        };
        Some(s)
    } else {
        None
    };

    let mut picker = Picker::new(g.node_count(), budget);
    let mut prov = Provenance::new(id.name(), cfg.phi, cfg.rng_seed);
    match id {
        BaselineId::Rn => {
            for i in index::sample(&mut rng, g.node_count(), budget) {
                picker.take(i);
            }
        }
        BaselineId::Rdn => {
            let weights: Vec<f64> = g.nodes().map(|v| g.degree(v) as f64).collect();
            for v in weighted_without_replacement(&mut rng, &weights, budget) {
                picker.take(v);
            }
        }
        BaselineId::Rpn => {
            let weights = pagerank(g, PAGERANK_DAMPING, PAGERANK_TOLERANCE, cfg.execution);
            for v in weighted_without_replacement(&mut rng, &weights, budget) {
                picker.take(v);
            }
            prov.params.insert("damping".into(), PAGERANK_DAMPING);
        }
        BaselineId::Re => random_edges(g, &mut picker, &mut rng),
        BaselineId::Rne => random_node_edges(g, &mut picker, &mut rng),
        BaselineId::Ties => {
            let mut edges: Vec<(NodeId, NodeId)> = g.edges().collect();
            edges.shuffle(&mut rng);
            for (u, v) in edges {
                if picker.full() {
                    break;
                }
                picker.take(u);
                picker.take(v);
            }
        }
        BaselineId::Bf => breadth_first(g, seed.unwrap(), &mut picker, &mut rng, usize::MAX, None),
        BaselineId::Df => depth_first(g, seed.unwrap(), &mut picker, &mut rng),
        BaselineId::Sb => {
            breadth_first(g, seed.unwrap(), &mut picker, &mut rng, SNOWBALL_BRANCHING, None);
            prov.params.insert("branching".into(), SNOWBALL_BRANCHING as f64);
        }
        BaselineId::Ff => {
            breadth_first(g, seed.unwrap(), &mut picker, &mut rng, usize::MAX, Some(FOREST_FIRE_FORWARD));
            prov.params.insert("forward_probability".into(), FOREST_FIRE_FORWARD);
        }
        BaselineId::Rw => {
            random_walk(g, seed.unwrap(), &mut picker, &mut rng, Teleport::ToSeed(WALK_RESTART));
            prov.params.insert("restart_probability".into(), WALK_RESTART);
        }
        BaselineId::Rj => {
            random_walk(g, seed.unwrap(), &mut picker, &mut rng, Teleport::Uniform(JUMP_PROBABILITY));
            prov.params.insert("jump_probability".into(), JUMP_PROBABILITY);
        }
    }
    // Isolated nodes can starve edge and walk samplers; top up uniformly.
    if !picker.full() {
        let mut rest: Vec<NodeId> = g.nodes().filter(|&v| !picker.set.contains(v)).collect();
        rest.shuffle(&mut rng);
        for v in rest {
            if picker.full() {
                break;
            }
            picker.take(v);
        }
    }
    if id.is_traversal() {
        prov.seed_strategy = Some(cfg.seed_strategy);
        prov.seed_node = seed;
    }
    Ok(BaselineRun {
        sample: Sample::induce(g, &picker.set, prov),
        visit_order: picker.set.as_slice().to_vec(),
    })
}

struct Picker {
    set: NodeSet,
    budget: usize,
}

impl Picker {
    fn new(n: usize, budget: usize) -> Self {
        Picker {
            set: NodeSet::new(n),
            budget,
        }
    }

    fn full(&self) -> bool {
        self.set.len() >= self.budget
    }

    fn take(&mut self, v: NodeId) -> bool {
        !self.full() && self.set.insert(v)
    }
}

/// Weighted sampling without replacement (exponential keys): each pick is
/// proportional to weight among the not-yet-picked items. Zero weights come
/// last, in ascending id.
pub fn weighted_without_replacement<R: Rng + ?Sized>(rng: &mut R, weights: &[f64], amount: usize) -> Vec<usize> {
    let mut keys: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let u: f64 = rng.random::<f64>();
            let key = if w > 0.0 { (1.0 - u).ln() / w } else { f64::NEG_INFINITY };
            (key, i)
        })
        .collect();
    keys.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    keys.into_iter().take(amount).map(|(_, i)| i).collect()
}

fn random_edges(g: &Graph, picker: &mut Picker, rng: &mut ChaCha8Rng) {
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    if edges.is_empty() {
        return;
    }
    let coverable = g.nodes().filter(|&v| g.degree(v) > 0).count();
    while !picker.full() && picker.set.len() < coverable {
        let (u, v) = edges[rng.random_range(0..edges.len())];
        picker.take(u);
        picker.take(v);
    }
}

fn random_node_edges(g: &Graph, picker: &mut Picker, rng: &mut ChaCha8Rng) {
    let coverable = g.nodes().filter(|&v| g.degree(v) > 0).count();
    while !picker.full() && picker.set.len() < coverable {
        let u = rng.random_range(0..g.node_count());
        let Some(&v) = g.neighbors(u).get(rng.random_range(0..g.degree(u).max(1))) else {
            continue;
        };
        picker.take(u);
        picker.take(v);
    }
}

/// A sampled node with unsampled neighbors, chosen uniformly; falls back to
/// any unsampled node when the sampled region is closed.
fn restart_node<R: Rng + ?Sized>(g: &Graph, set: &NodeSet, rng: &mut R) -> Option<NodeId> {
    let frontier: Vec<NodeId> = set
        .iter()
        .filter(|&v| g.neighbors(v).iter().any(|&w| !set.contains(w)))
        .collect();
    if !frontier.is_empty() {
        return Some(frontier[rng.random_range(0..frontier.len())]);
    }
    let rest: Vec<NodeId> = g.nodes().filter(|&v| !set.contains(v)).collect();
    (!rest.is_empty()).then(|| rest[rng.random_range(0..rest.len())])
}

/// Breadth-first expansion. Each dequeued node enqueues at most `cap`
/// unvisited neighbors chosen at random; with `burn` set, the count is
/// geometric with mean `p / (1 - p)` instead (forest fire).
fn breadth_first(
    g: &Graph,
    seed: NodeId,
    picker: &mut Picker,
    rng: &mut ChaCha8Rng,
    cap: usize,
    burn: Option<f64>,
) {
    let mut queue = VecDeque::new();
    picker.take(seed);
    queue.push_back(seed);
    while !picker.full() {
        let Some(v) = queue.pop_front() else {
            match restart_node(g, &picker.set, rng) {
                Some(r) => {
                    picker.take(r);
                    queue.push_back(r);
                    continue;
                }
                None => break,
            }
        };
        let mut open: Vec<NodeId> = g.neighbors(v).iter().copied().filter(|&w| !picker.set.contains(w)).collect();
        open.shuffle(rng);
        let limit = match burn {
            Some(p) => {
                let mut k = 0;
                while rng.random_bool(p) {
                    k += 1;
                }
                k
            }
            None => cap,
        };
        for w in open.into_iter().take(limit) {
            if picker.take(w) {
                queue.push_back(w);
            }
        }
    }
}

fn depth_first(g: &Graph, seed: NodeId, picker: &mut Picker, rng: &mut ChaCha8Rng) {
    let mut stack = vec![seed];
    picker.take(seed);
    while !picker.full() {
        let Some(&v) = stack.last() else {
            match restart_node(g, &picker.set, rng) {
                Some(r) => {
                    picker.take(r);
                    stack.push(r);
                    continue;
                }
                None => break,
            }
        };
        let open: Vec<NodeId> = g.neighbors(v).iter().copied().filter(|&w| !picker.set.contains(w)).collect();
        if open.is_empty() {
            stack.pop();
            continue;
        }
        let w = open[rng.random_range(0..open.len())];
        picker.take(w);
        stack.push(w);
    }
}

enum Teleport {
    ToSeed(f64),
    Uniform(f64),
}

fn random_walk(g: &Graph, seed: NodeId, picker: &mut Picker, rng: &mut ChaCha8Rng, teleport: Teleport) {
    let stall_limit = 100 + 10 * g.node_count();
    let mut origin = seed;
    let mut current = seed;
    let mut idle = 0;
    picker.take(seed);
    while !picker.full() {
        let next = match teleport {
            Teleport::ToSeed(p) if rng.random_bool(p) => origin,
            Teleport::Uniform(p) if rng.random_bool(p) || g.degree(current) == 0 => rng.random_range(0..g.node_count()),
            _ if g.degree(current) == 0 => origin,
            _ => g.neighbors(current)[rng.random_range(0..g.degree(current))],
        };
        current = next;
        if picker.take(current) {
            idle = 0;
        } else {
            idle += 1;
        }
        if idle > stall_limit {
            match restart_node(g, &picker.set, rng) {
                Some(r) => {
                    origin = r;
                    current = r;
                    picker.take(r);
                    idle = 0;
                }
                None => break,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn parses_ids() {
        assert_eq!("ties".parse::<BaselineId>().unwrap(), BaselineId::Ties);
        assert_eq!("RJ".parse::<BaselineId>().unwrap(), BaselineId::Rj);
        assert!("MHRW".parse::<BaselineId>().is_err());
    }

    #[test]
    fn every_baseline_hits_budget_and_induces() {
        let g = barbell();
        for id in BaselineId::ALL {
            for seed in 0..10 {
                let cfg = SamplerConfig { phi: 0.5, rng_seed: seed, ..Default::default() };
                let s = baseline_sample(id, &g, &cfg).unwrap();
                assert_eq!(s.nodes.len(), 4, "{id}");
                let expected: Vec<_> = g
                    .edges()
                    .filter(|(u, v)| s.nodes.contains(u) && s.nodes.contains(v))
                    .collect();
                assert_eq!(s.edges, expected, "{id}");
            }
        }
    }

    #[test]
    fn rn_on_six_nodes() {
        let g = parachute();
        let cfg = SamplerConfig { phi: 0.5, ..Default::default() };
        assert_eq!(baseline_sample(BaselineId::Rn, &g, &cfg).unwrap().nodes.len(), 3);
    }

    #[test]
    fn handles_isolated_nodes() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2)]).unwrap();
        for id in BaselineId::ALL {
            let cfg = SamplerConfig { phi: 1.0, ..Default::default() };
            assert_eq!(baseline_sample(id, &g, &cfg).unwrap().nodes.len(), 6, "{id}");
        }
    }

    #[test]
    fn weighted_picks_follow_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = [0.0, 3.0, 1.0];
        let mut first = [0usize; 3];
        for _ in 0..4000 {
            first[weighted_without_replacement(&mut rng, &w, 1)[0]] += 1;
        }
        assert_eq!(first[0], 0);
        let frac = first[1] as f64 / 4000.0;
        assert!((frac - 0.75).abs() < 0.03, "{frac}");
        assert_eq!(weighted_without_replacement(&mut rng, &w, 3)[2], 0);
    }
}
