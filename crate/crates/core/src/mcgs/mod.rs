//! The four-step sampling pipeline: identify minority structures, rank and
//! select them, sample them with part of their neighborhoods, then fill the
//! remaining budget greedily and induce.

pub mod greedy;
pub mod minority;

use std::collections::BTreeMap;
use std::io::BufRead;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::SamplerConfig;
use crate::detect::{detect, Detection};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;
use crate::rank::{rank_and_select, RankedSets};
use crate::sample::{Provenance, Sample};

pub use greedy::{greedy_majority, greedy_majority_observed, loss, scaled_losses, GreedyState, LossTerms};
pub use minority::{anchor_neighbors, neighbor_quota, sample_minority, structure_neighbors, MinorityOutcome};

pub const ALGORITHM_NAME: &str = "MCGS";

/// Assignment of every node to a part; the pipeline then runs per part.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    parts: Vec<Vec<NodeId>>,
}

impl Partition {
    /// `part_of[v]` is the part label of node `v`.
    pub fn from_assignment(part_of: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (v, &p) in part_of.iter().enumerate() {
            by_label.entry(p).or_default().push(v);
        }
        Partition {
            parts: by_label.into_values().collect(),
        }
    }

    /// Reads `label part` lines; every node of `g` must be assigned.
    pub fn parse<R: BufRead>(input: R, g: &Graph) -> Result<Self> {
        let mut part_of = vec![usize::MAX; g.node_count()];
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
                continue;
            }
            let tokens: Vec<&str> = t.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::MalformedLine {
                    line: i + 1,
                    tokens: tokens.len(),
                });
            }
            let v = g.id_of(tokens[0]).ok_or_else(|| Error::UnknownLabel(tokens[0].into()))?;
            part_of[v] = tokens[1]
                .parse()
                .map_err(|_| Error::Config(format!("line {}: part id `{}` is not an integer", i + 1, tokens[1])))?;
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Config(format!("node `{}` has no part", g.label(v))));
        }
        Ok(Partition::from_assignment(&part_of))
    }

    pub fn parts(&self) -> &[Vec<NodeId>] {
        &self.parts
    }
}

/// Everything a pipeline run produced, for inspection and reporting.
#[derive(Debug, Clone)]
pub struct McgsRun {
    pub sample: Sample,
    /// Structures found in the input (per part, remapped to graph ids).
    pub detection: Detection,
    /// The structures whose nodes were forced into the sample.
    pub selected: RankedSets,
}

/// Runs the pipeline and returns only the sample.
pub fn mcgs_sample(g: &Graph, cfg: &SamplerConfig, partition: Option<&Partition>) -> Result<Sample> {
    mcgs_run(g, cfg, partition).map(|r| r.sample)
}

pub fn mcgs_run(g: &Graph, cfg: &SamplerConfig, partition: Option<&Partition>) -> Result<McgsRun> {
    cfg.validate(g.node_count())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let (nodes, detection, selected, overshoot) = match partition {
        None => {
            let detection = detect(g);
            let (nodes, selected, overshoot) = run_pipeline(g, &detection, cfg, cfg.budget(g.node_count()), &mut rng)?;
            (nodes, detection, selected, overshoot)
        }
        Some(partition) => {
            let mut nodes = NodeSet::new(g.node_count());
            let mut detection = Detection {
                thresholds: crate::detect::degree_thresholds(g),
                pivots: Vec::new(),
                stars: Vec::new(),
                rims: Vec::new(),
                ties: Vec::new(),
            };
            let mut selected = RankedSets::default();
            let mut overshoot = false;
            for part in partition.parts() {
                let budget = cfg.budget(part.len());
                if budget == 0 {
                    continue;
                }
                let (sub, map) = g.induced_with_map(&NodeSet::from_nodes(g.node_count(), part.iter().copied()))?;
                let part_detection = detect(&sub);
                let (part_nodes, part_selected, part_over) = run_pipeline(&sub, &part_detection, cfg, budget, &mut rng)?;
                overshoot |= part_over;
                nodes.extend(part_nodes.iter().map(|v| map[v]));
                let part_detection = part_detection.remap(&map);
                detection.pivots.extend(part_detection.pivots);
                detection.stars.extend(part_detection.stars);
                detection.rims.extend(part_detection.rims);
                detection.ties.extend(part_detection.ties);
                let remapped = remap_ranked(part_selected, &map);
                selected.pivots.extend(remapped.pivots);
                selected.stars.extend(remapped.stars);
                selected.rims.extend(remapped.rims);
                selected.ties.extend(remapped.ties);
            }
            (nodes, detection, selected, overshoot)
        }
    };
    let mut prov = Provenance::new(ALGORITHM_NAME, cfg.phi, cfg.rng_seed);
    prov.alpha = Some(cfg.alpha);
    prov.beta = Some(cfg.beta);
    prov.weights = Some(cfg.weights);
    prov.overshoot = overshoot;
    if let Some(k) = cfg.greedy_pool {
        prov.params.insert("greedy_pool".into(), k as f64);
    }
    if let Some(p) = partition {
        prov.params.insert("parts".into(), p.parts().len() as f64);
    }
    Ok(McgsRun {
        sample: Sample::induce(g, &nodes, prov),
        detection,
        selected,
    })
}

fn run_pipeline(
    g: &Graph,
    detection: &Detection,
    cfg: &SamplerConfig,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(NodeSet, RankedSets, bool)> {
    let selected = rank_and_select(detection, cfg.phi, cfg.alpha)?;
    let minority = sample_minority(g, &selected, cfg, budget, rng);
    if minority.overshoot {
        return Ok((minority.nodes, selected, true));
    }
    let nodes = greedy_majority(g, &minority.nodes, cfg, budget, rng);
    Ok((nodes, selected, false))
}

fn remap_ranked(mut sets: RankedSets, map: &[NodeId]) -> RankedSets {
    for list in [&mut sets.pivots, &mut sets.stars, &mut sets.rims, &mut sets.ties] {
        for s in list.iter_mut() {
            for v in s.key_nodes.iter_mut().chain(s.attached_nodes.iter_mut()) {
                *v = map[*v];
            }
        }
    }
    sets
}
