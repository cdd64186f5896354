use rand::seq::index;
use rand::Rng;

use crate::config::SamplerConfig;
use crate::detect::MinorityStructure;
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;
use crate::rank::RankedSets;

/// Result of the minority sampling step.
#[derive(Debug, Clone)]
pub struct MinorityOutcome {
    pub nodes: NodeSet,
    /// Key and attached nodes alone exceeded the budget.
    pub overshoot: bool,
}

/// Neighbors of anchor `a` that are not part of structure `s`, ascending.
pub fn anchor_neighbors(g: &Graph, s: &MinorityStructure, a: NodeId) -> Vec<NodeId> {
    g.neighbors(a)
        .iter()
        .copied()
        .filter(|w| !s.key_nodes.contains(w) && !s.attached_nodes.contains(w))
        .collect()
}

/// Neighbors of a structure's anchors (center, or both chain ends) outside
/// the structure, ascending.
pub fn structure_neighbors(g: &Graph, s: &MinorityStructure) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = s.anchor_nodes().iter().flat_map(|&a| anchor_neighbors(g, s, a)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Number of neighbors to keep around a structure with `neighbor_count`
/// neighbors: `ceil(count * phi / beta)`, at least one when any exist.
pub fn neighbor_quota(neighbor_count: usize, phi: f64, beta: f64) -> usize {
    if neighbor_count == 0 {
        return 0;
    }
    crate::ceil_count(neighbor_count as f64 * phi / beta).clamp(1, neighbor_count)
}

/// Puts every key and attached node of the selected structures into the
/// sample, then draws each anchor's quota of outside neighbors uniformly
/// from those not yet sampled, stopping at `budget`.
///
/// Structures are visited family by family (pivots, stars, rims, ties) in
/// rank order, anchors in chain order; each anchor draws one index sample
/// from `rng` over its not yet sampled neighbors in ascending id order.
pub fn sample_minority<R: Rng + ?Sized>(
    g: &Graph,
    selected: &RankedSets,
    cfg: &SamplerConfig,
    budget: usize,
    rng: &mut R,
) -> MinorityOutcome {
    let mut nodes = NodeSet::new(g.node_count());
    for s in selected.iter() {
        nodes.extend(s.all_nodes());
    }
    if nodes.len() > budget {
        return MinorityOutcome { nodes, overshoot: true };
    }
    'structures: for s in selected.iter() {
        for a in s.anchor_nodes() {
            if nodes.len() >= budget {
                break 'structures;
            }
            let neighbors = anchor_neighbors(g, s, a);
            let quota = neighbor_quota(neighbors.len(), cfg.phi, cfg.beta);
            let open: Vec<NodeId> = neighbors.into_iter().filter(|&w| !nodes.contains(w)).collect();
            let want = quota.min(open.len()).min(budget - nodes.len());
            if want == 0 {
                continue;
            }
            let mut picks: Vec<usize> = index::sample(rng, open.len(), want).into_vec();
            picks.sort_unstable();
            nodes.extend(picks.into_iter().map(|i| open[i]));
        }
    }
    MinorityOutcome { nodes, overshoot: false }
}
