//! Union-find structures for component counting.

use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

/// Disjoint sets with union by rank and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    count: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
            count: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of distinct sets.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let grand = self.parent[self.parent[x]];
            self.parent[x] = grand;
            x = grand;
        }
        x
    }

    /// Root of `x` without compressing paths.
    pub fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.count -= 1;
        true
    }
}

/// Component count of a growing induced subgraph.
///
/// Nodes are activated one at a time; each activation unions the new node
/// with its already-active neighbors.
#[derive(Debug, Clone)]
pub struct IncrementalComponents {
    sets: DisjointSet,
    active: Vec<bool>,
    active_count: usize,
    components: usize,
}

impl IncrementalComponents {
    pub fn new(node_count: usize) -> Self {
        IncrementalComponents {
            sets: DisjointSet::new(node_count),
            active: vec![false; node_count],
            active_count: 0,
            components: 0,
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.active[v]
    }

    pub fn activate(&mut self, g: &Graph, v: NodeId) {
        if self.active[v] {
            return;
        }
        self.active[v] = true;
        self.active_count += 1;
        self.components += 1;
        for &w in g.neighbors(v) {
            if self.active[w] && self.sets.union(v, w) {
                self.components -= 1;
            }
        }
    }

    /// Component count if `v` were activated; does not mutate.
    pub fn components_if_added(&self, g: &Graph, v: NodeId) -> usize {
        if self.active[v] {
            return self.components;
        }
        let mut roots: Vec<usize> = g
            .neighbors(v)
            .iter()
            .filter(|&&w| self.active[w])
            .map(|&w| self.sets.find_const(w))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        self.components + 1 - roots.len()
    }
}

/// Number of connected components of the subgraph induced by `nodes`.
pub fn connected_component_count(g: &Graph, nodes: &NodeSet) -> usize {
    let mut inc = IncrementalComponents::new(g.node_count());
    for v in nodes.iter() {
        inc.activate(g, v);
    }
    inc.components()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn union_reduces_count_once() {
        let mut d = DisjointSet::new(4);
        assert!(d.union(0, 1));
        assert!(!d.union(1, 0));
        assert!(d.union(2, 3));
        assert_eq!(d.count(), 2);
        assert!(d.union(0, 3));
        assert_eq!(d.count(), 1);
        assert_eq!(d.find(2), d.find(1));
    }

    #[test]
    fn component_counts() {
        let p = path4();
        assert_eq!(connected_component_count(&p, &NodeSet::full(4)), 1);
        assert_eq!(connected_component_count(&p, &NodeSet::from_nodes(4, [0, 2])), 2);
        assert_eq!(connected_component_count(&p, &NodeSet::new(4)), 0);
        let b = barbell();
        assert_eq!(connected_component_count(&b, &NodeSet::from_nodes(8, [0, 1, 6, 7])), 2);
    }

    #[test]
    fn hypothetical_query_matches_activation() {
        let p = path4();
        let mut inc = IncrementalComponents::new(4);
        inc.activate(&p, 0);
        inc.activate(&p, 2);
        assert_eq!(inc.components(), 2);
        assert_eq!(inc.components_if_added(&p, 1), 1);
        assert_eq!(inc.components_if_added(&p, 3), 2);
        inc.activate(&p, 1);
        assert_eq!(inc.components(), 1);
    }
}
