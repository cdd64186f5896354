//! Start-node selection for traversal samplers.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::betweenness_with;
use crate::error::Error;
use crate::graph::{Graph, NodeId};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedStrategy {
    Random,
    HighDegree,
    HighBetweenness,
    Peripheral,
}

impl SeedStrategy {
    pub const ALL: [SeedStrategy; 4] = [
        SeedStrategy::Random,
        SeedStrategy::HighDegree,
        SeedStrategy::HighBetweenness,
        SeedStrategy::Peripheral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeedStrategy::Random => "random",
            SeedStrategy::HighDegree => "high_degree",
            SeedStrategy::HighBetweenness => "high_betweenness",
            SeedStrategy::Peripheral => "peripheral",
        }
    }

    /// Whether the pick depends on the random stream.
    pub fn is_random(self) -> bool {
        self == SeedStrategy::Random
    }
}

impl std::str::FromStr for SeedStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SeedStrategy::ALL
            .into_iter()
            .find(|st| st.name() == s.replace('-', "_"))
            .ok_or_else(|| Error::Config(format!("unknown seed strategy `{s}`")))
    }
}

impl std::fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Picks a start node; deterministic strategies ignore `rng`.
pub fn pick_seed<R: Rng + ?Sized>(g: &Graph, strategy: SeedStrategy, rng: &mut R) -> NodeId {
    pick_seed_with(g, strategy, rng, Execution::default())
}

pub fn pick_seed_with<R: Rng + ?Sized>(g: &Graph, strategy: SeedStrategy, rng: &mut R, exec: Execution) -> NodeId {
    match strategy {
        SeedStrategy::Random => rng.random_range(0..g.node_count()),
        SeedStrategy::HighDegree => argmax_lowest(g.nodes().map(|v| g.degree(v) as f64)),
        SeedStrategy::HighBetweenness => argmax_lowest(betweenness_with(g, exec).into_iter()),
        SeedStrategy::Peripheral => {
            let a = farthest_from(g, 0);
            farthest_from(g, a)
        }
    }
}

fn argmax_lowest(scores: impl Iterator<Item = f64>) -> NodeId {
    let mut best = (0, f64::NEG_INFINITY);
    for (v, s) in scores.enumerate() {
        if s > best.1 {
            best = (v, s);
        }
    }
    best.0
}

/// Lowest-id node at maximum BFS distance from `s`.
fn farthest_from(g: &Graph, s: NodeId) -> NodeId {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    let mut best = (s, 0);
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if d > best.1 || (d == best.1 && v < best.0) {
            best = (v, d);
        }
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
    best.0
}
