//! Articulation points via an iterative low-link depth-first search.

use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

/// All articulation points of `g` (every component is searched).
pub fn cut_points(g: &Graph) -> NodeSet {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    // (node, parent, next neighbor index)
    let mut stack: Vec<(NodeId, NodeId, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        stack.push((root, usize::MAX, 0));
        while let Some(frame) = stack.last_mut() {
            let (v, parent, idx) = *frame;
            if let Some(&w) = g.neighbors(v).get(idx) {
                frame.2 += 1;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }
    NodeSet::from_nodes(n, (0..n).filter(|&v| is_cut[v]))
}
