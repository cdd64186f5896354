//! Greedy majority-structure sampling.
//!
//! Each step adds the node whose insertion minimizes a weighted sum of three
//! normalized terms evaluated on the grown sample: the mean squared degree
//! deviation (MSE), the number of connected components (NCC) and, negated,
//! the mean neighborhood Jaccard index (JI). All three are maintained
//! incrementally, so scoring a candidate touches only its own adjacency.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{LossWeights, SamplerConfig};
use crate::dsu::IncrementalComponents;
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

/// Raw values of the three objectives for one node set.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossTerms {
    pub mse: f64,
    pub ncc: f64,
    pub ji: f64,
}

/// Incrementally maintained objective state of a growing sample.
#[derive(Debug, Clone)]
pub struct GreedyState<'g> {
    g: &'g Graph,
    members: NodeSet,
    /// Sampled-neighbor count of every node of `g`.
    inner_degree: Vec<usize>,
    /// Sum over members of (degree in g - degree in sample)^2, exact.
    squared_deviation: u128,
    /// Sum over members of sample degree / degree.
    jaccard_sum: f64,
    components: IncrementalComponents,
}

impl<'g> GreedyState<'g> {
    pub fn new(g: &'g Graph) -> Self {
        GreedyState {
            g,
            members: NodeSet::new(g.node_count()),
            inner_degree: vec![0; g.node_count()],
            squared_deviation: 0,
            jaccard_sum: 0.0,
            components: IncrementalComponents::new(g.node_count()),
        }
    }

    pub fn with_nodes(g: &'g Graph, nodes: &NodeSet) -> Self {
        let mut state = GreedyState::new(g);
        for v in nodes.iter() {
            state.add(v);
        }
        state
    }

    pub fn members(&self) -> &NodeSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> NodeSet {
        self.members
    }

    fn jaccard_of(inner: usize, degree: usize) -> f64 {
        if degree == 0 { 1.0 } else { inner as f64 / degree as f64 }
    }

    /// Objective values of the current sample.
    pub fn terms(&self) -> LossTerms {
        let size = self.members.len();
        if size == 0 {
            return LossTerms::default();
        }
        LossTerms {
            mse: self.squared_deviation as f64 / size as f64,
            ncc: self.components.components() as f64,
            ji: self.jaccard_sum / size as f64,
        }
    }

    /// Objective values if `c` joined the sample. Terms with zero weight are
    /// left at zero.
    pub fn candidate_terms(&self, c: NodeId, weights: &LossWeights) -> LossTerms {
        debug_assert!(!self.members.contains(c));
        let g = self.g;
        let size = (self.members.len() + 1) as f64;
        let inner = self.inner_degree[c];
        let degree = g.degree(c);
        let mut terms = LossTerms::default();
        if weights.mse() > 0.0 || weights.ji() > 0.0 {
            // Each sampled neighbor u gains one sample edge, shrinking its
            // deviation e_u by one: (e_u - 1)^2 - e_u^2 = 1 - 2 e_u.
            let mut deviation_shift: i128 = 0;
            let mut jaccard_shift = 0.0;
            for &u in g.neighbors(c) {
                if self.members.contains(u) {
                    let e = (g.degree(u) - self.inner_degree[u]) as i128;
                    deviation_shift += 1 - 2 * e;
                    jaccard_shift += 1.0 / g.degree(u) as f64;
                }
            }
            let own = (degree - inner) as i128;
            let total = self.squared_deviation as i128 + own * own + deviation_shift;
            terms.mse = total as f64 / size;
            terms.ji = (self.jaccard_sum + Self::jaccard_of(inner, degree) + jaccard_shift) / size;
        }
        if weights.ncc() > 0.0 {
            terms.ncc = self.components.components_if_added(g, c) as f64;
        }
        terms
    }

    /// Adds `c` and updates every maintained quantity.
    pub fn add(&mut self, c: NodeId) {
        if !self.members.insert(c) {
            return;
        }
        let g = self.g;
        let inner = self.inner_degree[c];
        let own = (g.degree(c) - inner) as i128;
        let mut total = self.squared_deviation as i128 + own * own;
        let mut jaccard = self.jaccard_sum + Self::jaccard_of(inner, g.degree(c));
        for &u in g.neighbors(c) {
            if self.members.contains(u) {
                let e = (g.degree(u) - self.inner_degree[u]) as i128;
                total += 1 - 2 * e;
                jaccard += 1.0 / g.degree(u) as f64;
            }
            self.inner_degree[u] += 1;
        }
        self.squared_deviation = total as u128;
        self.jaccard_sum = jaccard;
        self.components.activate(g, c);
    }
}

/// Min-max normalized weighted loss of each candidate; JI enters negated
/// since a larger index is better. A constant term scales to zero.
pub fn scaled_losses(terms: &[LossTerms], weights: &LossWeights) -> Vec<f64> {
    fn scaler(values: impl Iterator<Item = f64> + Clone) -> impl Fn(f64) -> f64 {
        let lo = values.clone().fold(f64::INFINITY, f64::min);
        let hi = values.fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        move |x| if span > 0.0 { (x - lo) / span } else { 0.0 }
    }
    let mse = scaler(terms.iter().map(|t| t.mse));
    let ncc = scaler(terms.iter().map(|t| t.ncc));
    let ji = scaler(terms.iter().map(|t| t.ji));
    terms
        .iter()
        .map(|t| weights.mse() * mse(t.mse) + weights.ncc() * ncc(t.ncc) - weights.ji() * ji(t.ji))
        .collect()
}

/// Scaled loss of adding `candidate`, normalized against the other members
/// of `pool` (which must contain it).
pub fn loss(state: &GreedyState<'_>, pool: &[NodeId], candidate: NodeId, weights: &LossWeights) -> f64 {
    let terms: Vec<_> = pool.iter().map(|&c| state.candidate_terms(c, weights)).collect();
    let idx = pool.iter().position(|&c| c == candidate).expect("candidate not in pool");
    scaled_losses(&terms, weights)[idx]
}

/// Grows `partial` to `budget` nodes by greedy loss minimization.
pub fn greedy_majority<R: Rng + ?Sized>(
    g: &Graph,
    partial: &NodeSet,
    cfg: &SamplerConfig,
    budget: usize,
    rng: &mut R,
) -> NodeSet {
    greedy_majority_observed(g, partial, cfg, budget, rng, |_| {})
}

/// [`greedy_majority`] calling `observe` after every insertion.
pub fn greedy_majority_observed<R, F>(
    g: &Graph,
    partial: &NodeSet,
    cfg: &SamplerConfig,
    budget: usize,
    rng: &mut R,
    mut observe: F,
) -> NodeSet
where
    R: Rng + ?Sized,
    F: FnMut(&GreedyState<'_>),
{
    let budget = budget.min(g.node_count());
    let mut state = GreedyState::with_nodes(g, partial);
    if state.len() >= budget {
        return state.into_members();
    }
    let mut remaining: Vec<NodeId> = g.nodes().filter(|&v| !partial.contains(v)).collect();
    let mut position = vec![usize::MAX; g.node_count()];
    for (i, &v) in remaining.iter().enumerate() {
        position[v] = i;
    }
    let weights = cfg.weights;
    let mut pool = Vec::new();

    while state.len() < budget && !remaining.is_empty() {
        pool.clear();
        match cfg.greedy_pool {
            Some(k) if k < remaining.len() => {
                pool.extend(index::sample(rng, remaining.len(), k).into_iter().map(|i| remaining[i]));
            }
            _ => pool.extend_from_slice(&remaining),
        }
        let terms = cfg.execution.map(&pool, |&c| state.candidate_terms(c, &weights));
        let losses = scaled_losses(&terms, &weights);
        let (_, best) = pool
            .iter()
            .zip(&losses)
            .map(|(&c, &l)| (l, c))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("pool is nonempty");

        let i = position[best];
        remaining.swap_remove(i);
        if i < remaining.len() {
            position[remaining[i]] = i;
        }
        state.add(best);
        observe(&state);
    }
    state.into_members()
}
