use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::seeds::SeedStrategy;

/// Weights of the degree-MSE, component-count and Jaccard terms of the
/// greedy loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights(pub [f64; 3]);

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights([1.0, 0.0, 0.0])
    }
}

impl LossWeights {
    pub fn mse(&self) -> f64 {
        self.0[0]
    }

    pub fn ncc(&self) -> f64 {
        self.0[1]
    }

    pub fn ji(&self) -> f64 {
        self.0[2]
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::Config(format!("loss weights {:?} must each lie in [0, 1]", self.0)));
        }
        let sum: f64 = self.0.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("loss weights {:?} must sum to 1", self.0)));
        }
        Ok(())
    }
}

impl std::str::FromStr for LossWeights {
    type Err = Error;

    /// Parses `w1,w2,w3` (also accepts `:` separators).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split([',', ':'])
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("bad weights `{s}`: {e}")))?;
        let arr: [f64; 3] = parts
            .try_into()
            .map_err(|_| Error::Config(format!("expected three weights, got `{s}`")))?;
        let w = LossWeights(arr);
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    /// Target fraction of nodes to keep.
    pub phi: f64,
    /// Divisor on the fraction of structures selected per family.
    pub alpha: f64,
    /// Divisor on the fraction of neighbors kept around each structure.
    pub beta: f64,
    pub weights: LossWeights,
    pub rng_seed: u64,
    pub seed_strategy: SeedStrategy,
    /// Evaluate this many random candidates per greedy step instead of all.
    pub greedy_pool: Option<usize>,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            phi: 0.3,
            alpha: 1.0,
            beta: 2.0,
            weights: LossWeights::default(),
            rng_seed: 0,
            seed_strategy: SeedStrategy::Random,
            greedy_pool: None,
            execution: Execution::default(),
        }
    }
}

impl SamplerConfig {
    /// Node budget `floor(n * phi)`.
    pub fn budget(&self, node_count: usize) -> usize {
        crate::floor_count(node_count as f64 * self.phi)
    }

    pub fn validate(&self, node_count: usize) -> Result<()> {
        if !(self.phi > 0.0 && self.phi <= 1.0) {
            return Err(Error::Config(format!("sampling rate {} outside (0, 1]", self.phi)));
        }
        if self.budget(node_count) < 1 {
            return Err(Error::Config(format!(
                "sampling rate {} keeps no node of a {node_count}-node graph",
                self.phi
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("beta must be positive, got {}", self.beta)));
        }
        if self.greedy_pool == Some(0) {
            return Err(Error::Config("greedy pool must hold at least one candidate".into()));
        }
        self.weights.validate()
    }
}
