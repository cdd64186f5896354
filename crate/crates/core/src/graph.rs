//! Simple undirected graphs over dense node ids.

use std::collections::{HashSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

pub type NodeId = usize;

/// How `parse_edge_list` treats inputs with more than one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentPolicy {
    /// Reject disconnected inputs.
    #[default]
    RequireConnected,
    /// Keep only the largest connected component (lowest id wins ties).
    LargestComponent,
    /// Keep every component.
    AllowDisconnected,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub components: ComponentPolicy,
}

impl ParseOptions {
    pub fn largest_component() -> Self {
        ParseOptions {
            components: ComponentPolicy::LargestComponent,
        }
    }

    pub fn allow_disconnected() -> Self {
        ParseOptions {
            components: ComponentPolicy::AllowDisconnected,
        }
    }
}

/// Immutable simple undirected graph.
///
/// Adjacency lists are sorted and symmetric; there are no self-loops or
/// parallel edges. Each node keeps the label it had in the input so reports
/// can refer to the original identifiers.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
    labels: IndexSet<String>,
}

impl Graph {
    /// Builds a graph over `0..node_count` whose labels are the decimal ids.
    /// Self-loops and duplicates are dropped.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Graph::from_labeled_edges(labels, edges)
    }

    fn from_labeled_edges(
        labels: IndexSet<String>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, node_count: n });
                }
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.labels.iter().map(String::as_str)
    }

    pub fn id_of(&self, label: &str) -> Option<NodeId> {
        self.labels.get_index_of(label)
    }

    /// Number of shared neighbors of `u` and `v` (sorted merge).
    pub fn common_neighbor_count(&self, u: NodeId, v: NodeId) -> usize {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Subgraph induced by `nodes`. Node ids of the result follow ascending
    /// order of the parent ids; labels are carried over.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> Result<Graph> {
        self.induced_with_map(nodes).map(|(g, _)| g)
    }

    /// Like [`Graph::induced_subgraph`], also returning the parent id of every
    /// node of the subgraph.
    pub fn induced_with_map(&self, nodes: &NodeSet) -> Result<(Graph, Vec<NodeId>)> {
        if nodes.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        if nodes.universe() > self.node_count() {
            if let Some(&bad) = nodes.as_slice().iter().find(|&&v| v >= self.node_count()) {
                return Err(Error::NodeOutOfRange {
                    node: bad,
                    node_count: self.node_count(),
                });
            }
        }
        let parent = nodes.to_sorted_vec();
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &v) in parent.iter().enumerate() {
            local[v] = i;
        }
        let adj = parent
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let labels = parent.iter().map(|&v| self.labels[v].clone()).collect();
        Ok((
            Graph {
                adj,
                edge_count,
                labels,
            },
            parent,
        ))
    }

    /// Connected components as a per-node component index plus the count,
    /// numbered in order of their lowest node id.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Writes `u v` lines using original labels.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }

    /// Labeled edges as unordered label pairs.
    fn labeled_edge_set(&self) -> HashSet<(&str, &str)> {
        self.edges()
            .map(|(u, v)| {
                let (a, b) = (self.label(u), self.label(v));
                if a <= b { (a, b) } else { (b, a) }
            })
            .collect()
    }
}

/// Graphs compare equal when they carry the same labels and the same labeled
/// edges; internal id assignment is not part of the identity.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count()
            && self.edge_count == other.edge_count
            && self.labels.iter().all(|l| other.labels.contains(l))
            && self.labeled_edge_set() == other.labeled_edge_set()
    }
}

/// Parses a whitespace-separated edge list. Lines starting with `#` or `%`
/// and blank lines are skipped; labels are remapped to dense ids in order of
/// first appearance.
pub fn parse_edge_list<R: BufRead>(input: R, opts: ParseOptions) -> Result<Graph> {
    let mut labels: IndexSet<String> = IndexSet::new();
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::MalformedLine {
                line: i + 1,
                tokens: tokens.len(),
            });
        }
        let u = labels.insert_full(tokens[0].to_owned()).0;
        let v = labels.insert_full(tokens[1].to_owned()).0;
        edges.push((u, v));
    }
    let g = Graph::from_labeled_edges(labels, edges)?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (comp, count) = g.components();
    if count <= 1 {
        return Ok(g);
    }
    match opts.components {
        ComponentPolicy::AllowDisconnected => Ok(g),
        ComponentPolicy::RequireConnected => Err(Error::Disconnected { components: count }),
        ComponentPolicy::LargestComponent => {
            let mut sizes = vec![0usize; count];
            for &c in &comp {
                sizes[c] += 1;
            }
            // max_by_key keeps the last maximum; scan in reverse so the
            // lowest-numbered component wins ties.
            let best = (0..count).rev().max_by_key(|&c| sizes[c]).unwrap_or(0);
            let keep = NodeSet::from_nodes(g.node_count(), (0..g.node_count()).filter(|&v| comp[v] == best));
            g.induced_subgraph(&keep)
        }
    }
}

pub fn parse_edge_list_str(text: &str, opts: ParseOptions) -> Result<Graph> {
    parse_edge_list(text.as_bytes(), opts)
}

pub fn read_edge_list(path: impl AsRef<Path>, opts: ParseOptions) -> Result<Graph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), opts).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })
}
