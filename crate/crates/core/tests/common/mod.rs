//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use mcgs_core::graph::{read_edge_list, ParseOptions};
use mcgs_core::{Graph, NodeId, NodeSet, StructureKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load(name: &str) -> Graph {
    read_edge_list(data_path(name), ParseOptions::default()).expect("fixture parses")
}

/// Random connected graph: a random tree, extra edges, then pendant leaves
/// and short pendant paths so rims and ties show up often.
pub fn random_connected(rng: &mut impl Rng, max_n: usize) -> Graph {
    let core = rng.random_range(2..=max_n.max(2) * 2 / 3);
    let mut edges = Vec::new();
    for v in 1..core {
        edges.push((rng.random_range(0..v), v));
    }
    let extra = rng.random_range(0..=core);
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..core), rng.random_range(0..core));
        if a != b {
            edges.push((a, b));
        }
    }
    let mut n = core;
    while n < max_n && rng.random_bool(0.8) {
        let anchor = rng.random_range(0..n);
        let len = rng.random_range(1..=3).min(max_n - n);
        let mut prev = anchor;
        for _ in 0..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
    }
    Graph::from_edges(n, edges).expect("generated graph is valid")
}

pub fn random_connected_seeded(seed: u64, max_n: usize) -> Graph {
    random_connected(&mut ChaCha8Rng::seed_from_u64(seed), max_n)
}

/// Proptest strategy for connected graphs of up to `max_n` nodes.
pub fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    any::<u64>().prop_map(move |seed| random_connected_seeded(seed, max_n))
}

/// Preferential attachment graph where each new node attaches one, two or
/// three edges (10%, 35%, 55%), about 2.45 edges per node.
pub fn scale_free(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut ends: Vec<NodeId> = vec![0, 1, 1, 2, 0, 2];
    for v in 3..n {
        let r: f64 = rng.random();
        let m = if r < 0.10 {
            1
        } else if r < 0.45 {
            2
        } else {
            3
        };
        let mut targets = BTreeSet::new();
        while targets.len() < m.min(v) {
            targets.insert(ends[rng.random_range(0..ends.len())]);
        }
        for t in targets {
            edges.push((t, v));
            ends.push(t);
            ends.push(v);
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_node_set(rng: &mut impl Rng, n: usize) -> NodeSet {
    let p: f64 = rng.random();
    NodeSet::from_nodes(n, (0..n).filter(|_| rng.random_bool(p)))
}

// ---------------------------------------------------------------- oracles

pub fn bfs_components(g: &Graph, members: &[bool]) -> usize {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if !members[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in g.neighbors(v) {
                if members[w] && !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    count
}

/// Cut points by removing each node and counting components.
pub fn oracle_cut_points(g: &Graph) -> BTreeSet<NodeId> {
    let n = g.node_count();
    let all = vec![true; n];
    let base = bfs_components(g, &all);
    (0..n)
        .filter(|&v| {
            let mut m = all.clone();
            m[v] = false;
            bfs_components(g, &m) > base
        })
        .collect()
}

fn adjacency_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// `(mu, epsilon)` with integer arithmetic for the top-5% rank.
pub fn oracle_thresholds(g: &Graph) -> (usize, f64) {
    let n = g.node_count();
    let k = n.div_ceil(20).max(1);
    let mut d: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d.reverse();
    (d[k - 1], 2.0 * g.edge_count() as f64 / n as f64)
}

/// Super pivot and huge star centers straight from the definitions.
pub fn oracle_pivots_stars(g: &Graph, mu: usize, epsilon: f64) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
    let adj = adjacency_matrix(g);
    let mut pivots = BTreeSet::new();
    let mut stars = BTreeSet::new();
    for v in 0..g.node_count() {
        let nb = g.neighbors(v);
        if nb.is_empty() {
            continue;
        }
        let interconnected = nb.iter().any(|&a| nb.iter().any(|&b| adj[a][b]));
        if interconnected && nb.len() >= mu {
            pivots.insert(v);
        }
        if !interconnected && nb.len() as f64 >= epsilon {
            stars.insert(v);
        }
    }
    (pivots, stars)
}

/// Canonical form of a rim or tie for set comparison.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shape {
    pub kind: StructureKind,
    pub key: Vec<NodeId>,
    pub attached: Vec<NodeId>,
}

fn sorted(mut v: Vec<NodeId>) -> Vec<NodeId> {
    v.sort_unstable();
    v
}

/// Rims and ties: singleton cut-point clusters are parachutes; larger ones
/// are cut into chains at nodes that are not plain links (two cut-point
/// neighbors and degree two). Chains are grown edge by edge in both
/// directions and deduplicated by edge set.
pub fn oracle_rims_ties(g: &Graph) -> BTreeSet<Shape> {
    let cut = oracle_cut_points(g);
    let leaves = |v: NodeId| -> Vec<NodeId> { g.neighbors(v).iter().copied().filter(|&w| g.degree(w) == 1).collect() };
    let cut_nb = |v: NodeId| -> Vec<NodeId> { g.neighbors(v).iter().copied().filter(|w| cut.contains(w)).collect() };
    let link = |v: NodeId| cut_nb(v).len() == 2 && g.degree(v) == 2;
    let mut out = BTreeSet::new();

    for &v in &cut {
        if cut_nb(v).is_empty() {
            out.insert(Shape {
                kind: StructureKind::ParachuteRim,
                key: vec![v],
                attached: sorted(leaves(v)),
            });
        }
    }

    let mut seen_edges: BTreeSet<BTreeSet<(NodeId, NodeId)>> = BTreeSet::new();
    for &u in &cut {
        for w in cut_nb(u) {
            if w < u {
                continue;
            }
            // Extend (u, w) both ways through link nodes.
            let mut edge_set = BTreeSet::from([(u, w)]);
            let extend = |from: NodeId, to: NodeId, edge_set: &mut BTreeSet<(NodeId, NodeId)>| -> Vec<NodeId> {
                let mut path = vec![to];
                let (mut prev, mut cur) = (from, to);
                while link(cur) {
                    let next = cut_nb(cur).into_iter().find(|&x| x != prev).unwrap();
                    if !edge_set.insert((cur.min(next), cur.max(next))) {
                        break;
                    }
                    path.push(next);
                    prev = cur;
                    cur = next;
                }
                path
            };
            let forward = extend(u, w, &mut edge_set);
            let backward = extend(w, u, &mut edge_set);
            if !seen_edges.insert(edge_set.clone()) {
                continue;
            }
            let mut chain: Vec<NodeId> = backward.into_iter().rev().collect();
            chain.extend(forward);
            let nodes: BTreeSet<NodeId> = chain.iter().copied().collect();
            let cyclic = nodes.len() == edge_set.len();
            let key = sorted(nodes.into_iter().collect());
            if cyclic {
                out.insert(Shape {
                    kind: StructureKind::Tie,
                    key,
                    attached: Vec::new(),
                });
                continue;
            }
            let single = |v: NodeId| {
                let l = leaves(v);
                (l.len() == 1).then(|| l[0])
            };
            let ends = [single(chain[0]), single(*chain.last().unwrap())];
            let shape = match ends.iter().flatten().min() {
                Some(&leaf) => Shape {
                    kind: StructureKind::ChainRim,
                    key,
                    attached: vec![leaf],
                },
                None => Shape {
                    kind: StructureKind::Tie,
                    key,
                    attached: Vec::new(),
                },
            };
            out.insert(shape);
        }
    }
    out
}

/// `(MSE, NCC, JI)` of the induced sample on `nodes`, computed directly.
pub fn oracle_loss_terms(g: &Graph, nodes: &NodeSet) -> (f64, f64, f64) {
    let n = g.node_count();
    let mut member = vec![false; n];
    for v in nodes.iter() {
        member[v] = true;
    }
    let size = nodes.len() as f64;
    let mut mse = 0.0;
    let mut ji = 0.0;
    for v in nodes.iter() {
        let d = g.degree(v);
        let k = g.neighbors(v).iter().filter(|&&w| member[w]).count();
        mse += ((d - k) as f64).powi(2);
        ji += if d == 0 { 1.0 } else { k as f64 / d as f64 };
    }
    (mse / size, bfs_components(g, &member) as f64, ji / size)
}

/// Whether the nodes induce a connected subgraph.
pub fn induces_connected(g: &Graph, nodes: &[NodeId]) -> bool {
    let mut member = vec![false; g.node_count()];
    for &v in nodes {
        member[v] = true;
    }
    bfs_components(g, &member) <= 1
}

/// `(nodes × nodes) ∩ E` by checking every pair.
pub fn oracle_induced_edges(g: &Graph, nodes: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if g.has_edge(a, b) {
                out.push((a.min(b), a.max(b)));
            }
        }
    }
    out.sort_unstable();
    out
}
