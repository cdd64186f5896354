//! Minority structure identification.
//!
//! Super pivots and huge stars come out of a triangle-marking depth-first
//! traversal; rims and ties come out of the subgraph induced by the cut
//! points, whose connected components are split into chains.

use serde::{Deserialize, Serialize};

use crate::cut::cut_points;
use crate::graph::{Graph, NodeId};
use crate::rank;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructureKind {
    SuperPivot,
    HugeStar,
    ParachuteRim,
    ChainRim,
    Tie,
}

/// The four structure families that are ranked and scored separately.
/// Parachute and chain rims share the rim family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SuperPivot,
    HugeStar,
    Rim,
    Tie,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::SuperPivot, Family::HugeStar, Family::Rim, Family::Tie];

    pub fn name(self) -> &'static str {
        match self {
            Family::SuperPivot => "super_pivot",
            Family::HugeStar => "huge_star",
            Family::Rim => "rim",
            Family::Tie => "tie",
        }
    }
}

impl StructureKind {
    pub fn family(self) -> Family {
        match self {
            StructureKind::SuperPivot => Family::SuperPivot,
            StructureKind::HugeStar => Family::HugeStar,
            StructureKind::ParachuteRim | StructureKind::ChainRim => Family::Rim,
            StructureKind::Tie => Family::Tie,
        }
    }
}

/// Irregular shapes worth surfacing in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureFlag {
    /// The chain closes on itself; node order is arbitrary.
    CyclicChain,
    /// Both chain ends carry a single leaf; only one rim was emitted.
    RimAtBothEnds,
    /// The chain was cut out of a branching cut-point cluster.
    SplitFromBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorityStructure {
    pub kind: StructureKind,
    /// Center (pivot, star, parachute anchor) or chain nodes in path order.
    pub key_nodes: Vec<NodeId>,
    /// Leaves of a parachute rim, or the terminal leaf of a chain rim.
    pub attached_nodes: Vec<NodeId>,
    pub importance: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<StructureFlag>,
}

impl MinorityStructure {
    fn new(kind: StructureKind, key_nodes: Vec<NodeId>, attached_nodes: Vec<NodeId>) -> Self {
        MinorityStructure {
            kind,
            key_nodes,
            attached_nodes,
            importance: 0,
            flags: Vec::new(),
        }
    }

    pub fn family(&self) -> Family {
        self.kind.family()
    }

    /// Key and attached nodes together.
    pub fn all_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.key_nodes.iter().chain(&self.attached_nodes).copied()
    }

    /// Nodes whose neighborhoods the structure is measured by: the center of
    /// a single-node structure, or both ends of a chain.
    pub fn anchor_nodes(&self) -> Vec<NodeId> {
        match self.kind {
            StructureKind::SuperPivot | StructureKind::HugeStar | StructureKind::ParachuteRim => {
                vec![self.key_nodes[0]]
            }
            StructureKind::ChainRim | StructureKind::Tie => {
                let (first, last) = (self.key_nodes[0], *self.key_nodes.last().unwrap());
                if first == last { vec![first] } else { vec![first, last] }
            }
        }
    }
}

/// Degree thresholds for the two hub-like families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeThresholds {
    /// Degree of the k-th highest-degree node, k = ceil(5% of n).
    pub mu: usize,
    /// Mean degree 2m/n.
    pub epsilon: f64,
}

pub const TOP_FRACTION: f64 = 0.05;

pub fn degree_thresholds(g: &Graph) -> DegreeThresholds {
    let n = g.node_count();
    if n == 0 {
        return DegreeThresholds { mu: 0, epsilon: 0.0 };
    }
    let k = crate::ceil_count(n as f64 * TOP_FRACTION).clamp(1, n);
    let mut degrees = g.degrees();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    DegreeThresholds {
        mu: degrees[k - 1],
        epsilon: 2.0 * g.edge_count() as f64 / n as f64,
    }
}

/// Nodes lying on a triangle with their DFS predecessor and the predecessor's
/// own predecessor. Every marked node has at least one interconnected pair of
/// neighbors; unmarked nodes may or may not.
pub fn triangle_marks(g: &Graph) -> Vec<bool> {
    let n = g.node_count();
    let mut marked = vec![false; n];
    let mut seen = vec![false; n];
    // (node, predecessor, next neighbor index)
    let mut stack: Vec<(NodeId, Option<NodeId>, usize)> = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push((root, None, 0));
        while let Some(frame) = stack.last_mut() {
            let (v, _, idx) = *frame;
            match g.neighbors(v).get(idx) {
                Some(&w) => {
                    frame.2 += 1;
                    if seen[w] {
                        continue;
                    }
                    seen[w] = true;
                    if let Some(pred) = stack.last().and_then(|f| f.1) {
                        if g.has_edge(w, pred) {
                            marked[w] = true;
                            marked[v] = true;
                            marked[pred] = true;
                        }
                    }
                    stack.push((w, Some(v), 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    marked
}

/// True when no two neighbors of `v` are adjacent.
pub fn neighborhood_is_independent(g: &Graph, v: NodeId) -> bool {
    g.neighbors(v).iter().all(|&x| g.common_neighbor_count(v, x) == 0)
}

/// Super pivots and huge stars of `g` under the given thresholds, each list
/// in ascending node order.
pub fn detect_pivots_stars(g: &Graph, thresholds: &DegreeThresholds) -> (Vec<MinorityStructure>, Vec<MinorityStructure>) {
    let marked = triangle_marks(g);
    let mut pivots = Vec::new();
    let mut stars = Vec::new();
    for v in g.nodes() {
        let d = g.degree(v);
        let pivot_degree = d >= thresholds.mu;
        let star_degree = d as f64 >= thresholds.epsilon;
        if d == 0 || !(pivot_degree || star_degree) {
            continue;
        }
        // Unmarked nodes are only star candidates; confirm before emitting.
        let is_star = !marked[v] && neighborhood_is_independent(g, v);
        if is_star {
            if star_degree {
                stars.push(MinorityStructure::new(StructureKind::HugeStar, vec![v], Vec::new()));
            }
        } else if pivot_degree {
            pivots.push(MinorityStructure::new(StructureKind::SuperPivot, vec![v], Vec::new()));
        }
    }
    for s in pivots.iter_mut().chain(stars.iter_mut()) {
        s.importance = rank::importance(s, g);
    }
    (pivots, stars)
}

fn leaf_neighbors(g: &Graph, v: NodeId) -> Vec<NodeId> {
    g.neighbors(v).iter().copied().filter(|&x| g.degree(x) == 1).collect()
}

/// Rims (parachute and chain) and ties of `g`.
pub fn detect_rims_ties(g: &Graph) -> (Vec<MinorityStructure>, Vec<MinorityStructure>) {
    let n = g.node_count();
    let cut = cut_points(g);
    let cut_adj: Vec<Vec<NodeId>> = (0..n)
        .map(|v| {
            if cut.contains(v) {
                g.neighbors(v).iter().copied().filter(|&w| cut.contains(w)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();

    let mut rims = Vec::new();
    let mut ties = Vec::new();
    let mut comp_seen = vec![false; n];
    let mut members = Vec::new();

    for start in cut.to_sorted_vec() {
        if comp_seen[start] {
            continue;
        }
        members.clear();
        comp_seen[start] = true;
        members.push(start);
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &w in &cut_adj[v] {
                if !comp_seen[w] {
                    comp_seen[w] = true;
                    members.push(w);
                }
            }
        }
        if members.len() == 1 {
            rims.push(MinorityStructure::new(
                StructureKind::ParachuteRim,
                vec![start],
                leaf_neighbors(g, start),
            ));
            continue;
        }
        members.sort_unstable();
        let branching = members.iter().any(|&v| cut_adj[v].len() >= 3);
        for (chain, cyclic) in split_chains(g, &cut_adj, &members) {
            let mut s = classify_chain(g, chain, cyclic);
            if branching {
                s.flags.push(StructureFlag::SplitFromBranch);
            }
            if s.kind == StructureKind::Tie {
                ties.push(s);
            } else {
                rims.push(s);
            }
        }
    }
    for s in rims.iter_mut().chain(ties.iter_mut()) {
        s.importance = rank::importance(s, g);
    }
    (rims, ties)
}

/// Splits one cut-point component into maximal chains. A chain ends at any
/// node that is not a plain link: cut-subgraph degree other than 2, or more
/// than two neighbors in `g`. Returns each chain with whether it closed on
/// itself.
fn split_chains(g: &Graph, cut_adj: &[Vec<NodeId>], members: &[NodeId]) -> Vec<(Vec<NodeId>, bool)> {
    let is_link = |v: NodeId| cut_adj[v].len() == 2 && g.degree(v) == 2;
    let mut used: std::collections::HashSet<(NodeId, NodeId)> = std::collections::HashSet::new();
    let edge = |a: NodeId, b: NodeId| if a < b { (a, b) } else { (b, a) };
    let mut chains = Vec::new();

    let walk = |start: NodeId, first: NodeId, used: &mut std::collections::HashSet<(NodeId, NodeId)>| {
        used.insert(edge(start, first));
        let mut path = vec![start, first];
        let (mut prev, mut cur) = (start, first);
        while is_link(cur) && cur != start {
            let next = if cut_adj[cur][0] == prev { cut_adj[cur][1] } else { cut_adj[cur][0] };
            if !used.insert(edge(cur, next)) {
                break;
            }
            path.push(next);
            prev = cur;
            cur = next;
        }
        let cyclic = path.len() > 2 && path.first() == path.last();
        if cyclic {
            path.pop();
        }
        (path, cyclic)
    };

    for &v in members.iter().filter(|&&v| !is_link(v)) {
        for &w in &cut_adj[v] {
            if !used.contains(&edge(v, w)) {
                chains.push(walk(v, w, &mut used));
            }
        }
    }
    // Anything left is a cycle made only of links.
    for &v in members {
        for &w in &cut_adj[v] {
            if !used.contains(&edge(v, w)) {
                let (path, _) = walk(v, w, &mut used);
                chains.push((path, true));
            }
        }
    }
    chains
}

fn classify_chain(g: &Graph, mut chain: Vec<NodeId>, cyclic: bool) -> MinorityStructure {
    if cyclic {
        let mut s = MinorityStructure::new(StructureKind::Tie, chain, Vec::new());
        s.flags.push(StructureFlag::CyclicChain);
        return s;
    }
    let single_leaf = |v: NodeId| {
        let leaves = leaf_neighbors(g, v);
        (leaves.len() == 1).then(|| leaves[0])
    };
    let head = single_leaf(chain[0]);
    let tail = single_leaf(*chain.last().unwrap());
    let (leaf, both) = match (head, tail) {
        (None, None) => return MinorityStructure::new(StructureKind::Tie, chain, Vec::new()),
        (Some(h), None) => {
            chain.reverse();
            (h, false)
        }
        (None, Some(t)) => (t, false),
        (Some(h), Some(t)) => {
            // Keep the end holding the lower-id leaf.
            if h < t {
                chain.reverse();
                (h, true)
            } else {
                (t, true)
            }
        }
    };
    let mut s = MinorityStructure::new(StructureKind::ChainRim, chain, vec![leaf]);
    if both {
        s.flags.push(StructureFlag::RimAtBothEnds);
    }
    s
}

/// All minority structures of a graph, grouped by family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub thresholds: DegreeThresholds,
    pub pivots: Vec<MinorityStructure>,
    pub stars: Vec<MinorityStructure>,
    pub rims: Vec<MinorityStructure>,
    pub ties: Vec<MinorityStructure>,
}

impl Detection {
    pub fn family(&self, f: Family) -> &[MinorityStructure] {
        match f {
            Family::SuperPivot => &self.pivots,
            Family::HugeStar => &self.stars,
            Family::Rim => &self.rims,
            Family::Tie => &self.ties,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &MinorityStructure> {
        self.pivots.iter().chain(&self.stars).chain(&self.rims).chain(&self.ties)
    }

    pub fn len(&self) -> usize {
        self.pivots.len() + self.stars.len() + self.rims.len() + self.ties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rewrites node ids through `map` (sub-graph id to parent id).
    pub fn remap(mut self, map: &[NodeId]) -> Self {
        for list in [&mut self.pivots, &mut self.stars, &mut self.rims, &mut self.ties] {
            for s in list.iter_mut() {
                for v in s.key_nodes.iter_mut().chain(s.attached_nodes.iter_mut()) {
                    *v = map[*v];
                }
            }
        }
        self
    }
}

/// Runs both detectors with thresholds taken from `g` itself.
pub fn detect(g: &Graph) -> Detection {
    detect_with_thresholds(g, degree_thresholds(g))
}

/// Runs both detectors with externally supplied thresholds, e.g. those of
/// the graph a sample was drawn from.
pub fn detect_with_thresholds(g: &Graph, thresholds: DegreeThresholds) -> Detection {
    let (pivots, stars) = detect_pivots_stars(g, &thresholds);
    let (rims, ties) = detect_rims_ties(g);
    Detection {
        thresholds,
        pivots,
        stars,
        rims,
        ties,
    }
}
