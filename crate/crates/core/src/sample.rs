//! Sampled subgraphs and their provenance records.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::LossWeights;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;
use crate::seeds::SeedStrategy;

/// Where a sample came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub phi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<LossWeights>,
    pub rng_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_strategy: Option<SeedStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_node: Option<NodeId>,
    /// Minority nodes alone exceeded the node budget.
    pub overshoot: bool,
    /// Algorithm-specific constants (branching caps, probabilities, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn new(algorithm: impl Into<String>, phi: f64, rng_seed: u64) -> Self {
        Provenance {
            algorithm: algorithm.into(),
            phi,
            alpha: None,
            beta: None,
            weights: None,
            rng_seed,
            seed_strategy: None,
            seed_node: None,
            overshoot: false,
            params: BTreeMap::new(),
        }
    }
}

/// A node subset of a graph together with every edge of the graph between
/// those nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Ascending parent-graph ids.
    pub nodes: Vec<NodeId>,
    /// Induced edges `(u, v)`, `u < v`, lexicographic.
    pub edges: Vec<(NodeId, NodeId)>,
    pub provenance: Provenance,
}

impl Sample {
    /// Induces the sample of `nodes` on `g`.
    pub fn induce(g: &Graph, nodes: &NodeSet, provenance: Provenance) -> Sample {
        let sorted = nodes.to_sorted_vec();
        let mut edges = Vec::new();
        for &u in &sorted {
            for &v in g.neighbors(u) {
                if v > u && nodes.contains(v) {
                    edges.push((u, v));
                }
            }
        }
        Sample {
            nodes: sorted,
            edges,
            provenance,
        }
    }

    pub fn node_set(&self, node_count: usize) -> NodeSet {
        NodeSet::from_nodes(node_count, self.nodes.iter().copied())
    }

    /// The sample as a standalone graph plus the parent id of each node.
    pub fn to_graph(&self, g: &Graph) -> Result<(Graph, Vec<NodeId>)> {
        g.induced_with_map(&self.node_set(g.node_count()))
    }

    pub fn sidecar(&self, g: &Graph) -> SampleSidecar {
        let p = &self.provenance;
        SampleSidecar {
            algorithm: p.algorithm.clone(),
            phi: p.phi,
            alpha: p.alpha,
            beta: p.beta,
            weights: p.weights,
            rng_seed: p.rng_seed,
            overshoot: p.overshoot,
            seed_strategy: p.seed_strategy,
            seed_node: p.seed_node.map(|v| g.label(v).to_owned()),
            params: p.params.clone(),
            node_labels: self.nodes.iter().map(|&v| g.label(v).to_owned()).collect(),
        }
    }

    /// Induced edges as `u v` lines with original labels.
    pub fn write_edge_list<W: Write>(&self, g: &Graph, mut out: W) -> std::io::Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", g.label(u), g.label(v))?;
        }
        Ok(())
    }
}

/// JSON companion of a sample edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSidecar {
    pub algorithm: String,
    pub phi: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub weights: Option<LossWeights>,
    pub rng_seed: u64,
    pub overshoot: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_strategy: Option<SeedStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_node: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    pub node_labels: Vec<String>,
}

impl SampleSidecar {
    /// Rebuilds the sample on `g` from its labels.
    pub fn to_sample(&self, g: &Graph) -> Result<Sample> {
        let mut nodes = NodeSet::new(g.node_count());
        for label in &self.node_labels {
            let v = g.id_of(label).ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            nodes.insert(v);
        }
        let mut prov = Provenance::new(self.algorithm.clone(), self.phi, self.rng_seed);
        prov.alpha = self.alpha;
        prov.beta = self.beta;
        prov.weights = self.weights;
        prov.overshoot = self.overshoot;
        prov.seed_strategy = self.seed_strategy;
        prov.seed_node = self.seed_node.as_deref().and_then(|l| g.id_of(l));
        prov.params = self.params.clone();
        Ok(Sample::induce(g, &nodes, prov))
    }
}
