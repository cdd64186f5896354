//! Minority-preservation indicators and majority-similarity metrics.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::detect::{detect, Detection, Family, MinorityStructure, StructureKind};
use crate::dsu::connected_component_count;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rank::importance_order;
use crate::sample::Sample;

/// Identity of a structure across a graph and its samples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructureMatchKey {
    /// Super pivot, huge star or parachute rim, by its single key node.
    Center(StructureKind, NodeId),
    /// Chain rim or tie, by its sorted key nodes.
    Chain(StructureKind, Vec<NodeId>),
}

impl StructureMatchKey {
    pub fn of(s: &MinorityStructure) -> Self {
        match s.kind {
            StructureKind::SuperPivot | StructureKind::HugeStar | StructureKind::ParachuteRim => {
                StructureMatchKey::Center(s.kind, s.key_nodes[0])
            }
            StructureKind::ChainRim | StructureKind::Tie => {
                let mut k = s.key_nodes.clone();
                k.sort_unstable();
                StructureMatchKey::Chain(s.kind, k)
            }
        }
    }
}

/// Keys of `list` in importance order.
pub fn ranked_keys(list: &[MinorityStructure]) -> Vec<StructureMatchKey> {
    let mut sorted = list.to_vec();
    sorted.sort_by(importance_order);
    sorted.iter().map(StructureMatchKey::of).collect()
}

/// Preservation rate divided by the sampling rate; `None` when the original
/// graph has no structure of this family.
pub fn mspr<K: Ord>(original: &BTreeSet<K>, sampled: &BTreeSet<K>, phi: f64) -> Option<f64> {
    if original.is_empty() {
        return None;
    }
    let kept = original.intersection(sampled).count() as f64;
    Some(kept / original.len() as f64 / phi)
}

/// Fraction of sampled structures absent from the original; 0 for an
/// empty sampled set.
pub fn msgr<K: Ord>(original: &BTreeSet<K>, sampled: &BTreeSet<K>) -> f64 {
    if sampled.is_empty() {
        return 0.0;
    }
    sampled.difference(original).count() as f64 / sampled.len() as f64
}

/// Mean over i = 1..K of |Top_i(original) ∩ Top_i(sampled)| / i. Lists
/// shorter than K contribute whatever they overlap.
pub fn mip<K: Ord + Clone>(original: &[K], sampled: &[K], k: usize) -> f64 {
    assert!(k >= 1, "MIP needs K >= 1");
    let mut top_orig = BTreeSet::new();
    let mut top_samp = BTreeSet::new();
    let mut overlap = 0usize;
    let mut total = 0.0;
    for i in 0..k {
        if let Some(x) = original.get(i) {
            if top_samp.contains(x) {
                overlap += 1;
            }
            top_orig.insert(x.clone());
        }
        if let Some(y) = sampled.get(i) {
            if top_orig.contains(y) && !top_samp.contains(y) {
                overlap += 1;
            }
            top_samp.insert(y.clone());
        }
        total += overlap as f64 / (i + 1) as f64;
    }
    total / k as f64
}

/// Normalized degree histogram as `degree -> probability`.
fn distribution(degrees: &[usize]) -> BTreeMap<usize, f64> {
    let mut hist = BTreeMap::new();
    for &d in degrees {
        *hist.entry(d).or_insert(0.0) += 1.0;
    }
    let n = degrees.len() as f64;
    for p in hist.values_mut() {
        *p /= n;
    }
    hist
}

/// Largest gap between the two empirical degree CDFs.
pub fn ks_distance(a: &[usize], b: &[usize]) -> f64 {
    let (pa, pb) = (distribution(a), distribution(b));
    let support: BTreeSet<usize> = pa.keys().chain(pb.keys()).copied().collect();
    let (mut ca, mut cb, mut best) = (0.0, 0.0, 0.0f64);
    for d in support {
        ca += pa.get(&d).copied().unwrap_or(0.0);
        cb += pb.get(&d).copied().unwrap_or(0.0);
        best = best.max((ca - cb).abs());
    }
    best
}

pub const SKEW: f64 = 0.99;

/// Skew divergence KL(P_s || skew * P_g + (1 - skew) * P_s), natural log,
/// with `original` as P_g and `sampled` as P_s.
pub fn skew_divergence(original: &[usize], sampled: &[usize]) -> f64 {
    let (pg, ps) = (distribution(original), distribution(sampled));
    ps.iter()
        .map(|(d, &p)| {
            let q = SKEW * pg.get(d).copied().unwrap_or(0.0) + (1.0 - SKEW) * p;
            p * (p / q).ln()
        })
        .sum::<f64>()
        .max(0.0)
}

fn sample_degrees(g: &Graph, s: &Sample) -> Vec<usize> {
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in s.nodes.iter().enumerate() {
        local[v] = i;
    }
    let mut deg = vec![0; s.nodes.len()];
    for &(u, v) in &s.edges {
        deg[local[u]] += 1;
        deg[local[v]] += 1;
    }
    deg
}

/// `(KSD, SDD)` between the degree distributions of `g` and `s`.
pub fn degree_metrics(g: &Graph, s: &Sample) -> Result<(f64, f64)> {
    if s.nodes.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    let dg = g.degrees();
    let ds = sample_degrees(g, s);
    Ok((ks_distance(&dg, &ds), skew_divergence(&dg, &ds)))
}

/// `(RCC, JI)`: reciprocal component count of the sample, and the mean over
/// sampled nodes of |N_g(v) ∩ N_s(v)| / |N_g(v) ∪ N_s(v)|.
pub fn connectivity_similarity(g: &Graph, s: &Sample) -> Result<(f64, f64)> {
    if s.nodes.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    let set = s.node_set(g.node_count());
    let rcc = 1.0 / connected_component_count(g, &set) as f64;
    let ds = sample_degrees(g, s);
    let ji = s
        .nodes
        .iter()
        .zip(&ds)
        .map(|(&v, &inner)| if g.degree(v) == 0 { 1.0 } else { inner as f64 / g.degree(v) as f64 })
        .sum::<f64>()
        / s.nodes.len() as f64;
    Ok((rcc, ji))
}

/// Scores of one structure family on one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyScores {
    pub family: Family,
    pub original_count: usize,
    pub sampled_count: usize,
    /// Absent when the original graph has none of this family.
    pub mspr: Option<f64>,
    pub msgr: f64,
    /// Set when the sample has no structure of this family, so MSGR is 0 by
    /// convention rather than by measurement.
    pub msgr_empty_sample: bool,
    /// Absent when the original graph has none of this family.
    pub mip: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub graph: String,
    pub algorithm: String,
    pub phi: f64,
    pub rng_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_strategy: Option<String>,
    pub sample_nodes: usize,
    pub sample_edges: usize,
    pub overshoot: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub meta: ReportMeta,
    pub families: Vec<FamilyScores>,
    pub ksd: f64,
    pub sdd: f64,
    pub rcc: f64,
    pub ji: f64,
}

impl EvaluationReport {
    pub fn family(&self, f: Family) -> &FamilyScores {
        self.families.iter().find(|s| s.family == f).expect("all families are scored")
    }
}

/// Structures of the sample, detected on the sample as a graph of its own
/// (degree thresholds included) and expressed in original node ids.
pub fn detect_in_sample(g: &Graph, s: &Sample) -> Result<Detection> {
    let (sub, map) = s.to_graph(g)?;
    Ok(detect(&sub).remap(&map))
}

pub const DEFAULT_MIP_K: usize = 5;

/// Scores `s` against `g`, whose structures are `original`.
pub fn evaluate(g: &Graph, graph_name: &str, original: &Detection, s: &Sample, mip_k: usize) -> Result<EvaluationReport> {
    let sampled = detect_in_sample(g, s)?;
    let phi = s.provenance.phi;
    let families = Family::ALL
        .into_iter()
        .map(|f| {
            let orig_ranked = ranked_keys(original.family(f));
            let samp_ranked = ranked_keys(sampled.family(f));
            let orig: BTreeSet<_> = orig_ranked.iter().cloned().collect();
            let samp: BTreeSet<_> = samp_ranked.iter().cloned().collect();
            FamilyScores {
                family: f,
                original_count: orig.len(),
                sampled_count: samp.len(),
                mspr: mspr(&orig, &samp, phi),
                msgr: msgr(&orig, &samp),
                msgr_empty_sample: samp.is_empty(),
                mip: (!orig.is_empty()).then(|| mip(&orig_ranked, &samp_ranked, mip_k)),
            }
        })
        .collect();
    let (ksd, sdd) = degree_metrics(g, s)?;
    let (rcc, ji) = connectivity_similarity(g, s)?;
    Ok(EvaluationReport {
        meta: ReportMeta {
            graph: graph_name.to_owned(),
            algorithm: s.provenance.algorithm.clone(),
            phi,
            rng_seed: s.provenance.rng_seed,
            seed_strategy: s.provenance.seed_strategy.map(|st| st.name().to_owned()),
            sample_nodes: s.nodes.len(),
            sample_edges: s.edges.len(),
            overshoot: s.provenance.overshoot,
        },
        families,
        ksd,
        sdd,
        rcc,
        ji,
    })
}
