//! Betweenness and PageRank scores used for seed choice and weighted sampling.

use std::collections::VecDeque;

use crate::graph::{Graph, NodeId};
use crate::par::Execution;

/// Unnormalized betweenness centrality of an undirected graph (each
/// unordered pair counted once), by Brandes accumulation.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    betweenness_with(g, Execution::default())
}

pub fn betweenness_with(g: &Graph, exec: Execution) -> Vec<f64> {
    let n = g.node_count();
    // Fixed chunking keeps the floating-point summation order independent of
    // the thread schedule.
    let chunk = n.div_ceil(64).max(1);
    let partials = exec.map_range(n.div_ceil(chunk), |c| {
        let mut acc = vec![0.0; n];
        let mut work = BrandesWork::new(n);
        for s in c * chunk..((c + 1) * chunk).min(n) {
            work.accumulate(g, s, &mut acc);
        }
        acc
    });
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    for t in &mut total {
        *t /= 2.0;
    }
    total
}

struct BrandesWork {
    sigma: Vec<f64>,
    dist: Vec<usize>,
    delta: Vec<f64>,
    order: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BrandesWork {
    fn new(n: usize) -> Self {
        BrandesWork {
            sigma: vec![0.0; n],
            dist: vec![usize::MAX; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: NodeId, acc: &mut [f64]) {
        for &v in &self.order {
            self.sigma[v] = 0.0;
            self.dist[v] = usize::MAX;
            self.delta[v] = 0.0;
        }
        self.order.clear();
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &w in g.neighbors(v) {
                if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        for &w in self.order.iter().rev() {
            for &v in g.neighbors(w) {
                if self.dist[v] != usize::MAX && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_TOLERANCE: f64 = 1e-8;

/// PageRank by power iteration until the L1 change drops below `tolerance`.
/// Isolated nodes spread their mass uniformly.
pub fn pagerank(g: &Graph, damping: f64, tolerance: f64, exec: Execution) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    for _ in 0..10_000 {
        let dangling: f64 = (0..n).filter(|&v| g.degree(v) == 0).map(|v| rank[v]).sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        let next = exec.map_range(n, |v| {
            base + damping
                * g.neighbors(v)
                    .iter()
                    .map(|&u| rank[u] / g.degree(u) as f64)
                    .sum::<f64>()
        });
        let diff: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if diff < tolerance {
            break;
        }
    }
    rank
}
