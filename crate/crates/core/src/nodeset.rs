use crate::graph::NodeId;

/// Set of node ids with O(1) membership and insertion-ordered iteration.
#[derive(Debug, Clone, Default)]
pub struct NodeSet {
    member: Vec<bool>,
    order: Vec<NodeId>,
}

impl NodeSet {
    /// Empty set over the id universe `0..node_count`.
    pub fn new(node_count: usize) -> Self {
        NodeSet {
            member: vec![false; node_count],
            order: Vec::new(),
        }
    }

    pub fn from_nodes(node_count: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut set = NodeSet::new(node_count);
        set.extend(nodes);
        set
    }

    pub fn full(node_count: usize) -> Self {
        NodeSet::from_nodes(node_count, 0..node_count)
    }

    pub fn universe(&self) -> usize {
        self.member.len()
    }

    /// Inserts `v`, returning whether it was absent.
    ///
    /// Panics if `v` lies outside the universe.
    pub fn insert(&mut self, v: NodeId) -> bool {
        if self.member[v] {
            return false;
        }
        self.member[v] = true;
        self.order.push(v);
        true
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Members in insertion order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        self.order.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.order
    }

    pub fn to_sorted_vec(&self) -> Vec<NodeId> {
        let mut v = self.order.clone();
        v.sort_unstable();
        v
    }
}

impl Extend<NodeId> for NodeSet {
    fn extend<I: IntoIterator<Item = NodeId>>(&mut self, iter: I) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.member == other.member
    }
}

impl Eq for NodeSet {}
