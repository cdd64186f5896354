//! Importance scoring and top-fraction selection of minority structures.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::detect::{Detection, Family, MinorityStructure, StructureKind};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Importance of a detected structure on `g`:
///
/// * super pivot, huge star: degree of the center
/// * parachute rim: number of degree-1 neighbors of the anchor
/// * chain rim: number of chain nodes
/// * tie: chain length first, then the number of neighbors hanging off the
///   two ends, packed as `length * C + ends` with `C = 2n`
pub fn importance(s: &MinorityStructure, g: &Graph) -> u64 {
    match s.kind {
        StructureKind::SuperPivot | StructureKind::HugeStar => g.degree(s.key_nodes[0]) as u64,
        StructureKind::ParachuteRim => g
            .neighbors(s.key_nodes[0])
            .iter()
            .filter(|&&x| g.degree(x) == 1)
            .count() as u64,
        StructureKind::ChainRim => s.key_nodes.len() as u64,
        StructureKind::Tie => {
            let (length, ends) = tie_importance_parts(s, g);
            length * tie_radix(g) + ends
        }
    }
}

/// Radix used to pack the two tie factors; exceeds any end-neighbor count.
pub fn tie_radix(g: &Graph) -> u64 {
    2 * g.node_count() as u64
}

/// `(chain length, neighbors of the chain ends outside the chain)`.
pub fn tie_importance_parts(s: &MinorityStructure, g: &Graph) -> (u64, u64) {
    let ends: u64 = s
        .anchor_nodes()
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|w| !s.key_nodes.contains(w)).count() as u64)
        .sum();
    (s.key_nodes.len() as u64, ends)
}

/// Descending importance, then lowest key node, then the sorted key tuple.
pub fn importance_order(a: &MinorityStructure, b: &MinorityStructure) -> Ordering {
    b.importance
        .cmp(&a.importance)
        .then_with(|| a.key_nodes.iter().min().cmp(&b.key_nodes.iter().min()))
        .then_with(|| {
            let mut ka = a.key_nodes.clone();
            let mut kb = b.key_nodes.clone();
            ka.sort_unstable();
            kb.sort_unstable();
            ka.cmp(&kb)
        })
        .then_with(|| a.kind.cmp(&b.kind))
}

/// Per-family lists sorted by [`importance_order`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedSets {
    pub pivots: Vec<MinorityStructure>,
    pub stars: Vec<MinorityStructure>,
    pub rims: Vec<MinorityStructure>,
    pub ties: Vec<MinorityStructure>,
}

impl RankedSets {
    /// Ranks every family of `detection` without truncating.
    pub fn from_detection(detection: &Detection) -> Self {
        let ranked = |list: &[MinorityStructure]| {
            let mut v = list.to_vec();
            v.sort_by(importance_order);
            v
        };
        RankedSets {
            pivots: ranked(&detection.pivots),
            stars: ranked(&detection.stars),
            rims: ranked(&detection.rims),
            ties: ranked(&detection.ties),
        }
    }

    pub fn family(&self, f: Family) -> &[MinorityStructure] {
        match f {
            Family::SuperPivot => &self.pivots,
            Family::HugeStar => &self.stars,
            Family::Rim => &self.rims,
            Family::Tie => &self.ties,
        }
    }

    fn family_mut(&mut self, f: Family) -> &mut Vec<MinorityStructure> {
        match f {
            Family::SuperPivot => &mut self.pivots,
            Family::HugeStar => &mut self.stars,
            Family::Rim => &mut self.rims,
            Family::Tie => &mut self.ties,
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
}

/// Number of structures kept out of `len` at rate `phi` with divisor `alpha`.
pub fn selection_size(len: usize, phi: f64, alpha: f64) -> usize {
    crate::ceil_count(len as f64 * phi / alpha).min(len)
}

/// Ranks each family and keeps its top `ceil(len * phi / alpha)` entries.
pub fn rank_and_select(detection: &Detection, phi: f64, alpha: f64) -> Result<RankedSets> {
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::Config(format!("sampling rate {phi} outside (0, 1]")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
    }
    let mut sets = RankedSets::from_detection(detection);
    for f in Family::ALL {
        let list = sets.family_mut(f);
        let keep = selection_size(list.len(), phi, alpha);
        list.truncate(keep);
    }
    Ok(sets)
}
