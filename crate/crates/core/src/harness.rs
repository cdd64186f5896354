//! Trial orchestration: graphs × algorithms × seed strategies × rates × runs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_run, BaselineId};
use crate::config::{LossWeights, SamplerConfig};
use crate::detect::{detect, Detection, Family};
use crate::error::{Error, Result};
use crate::graph::{read_edge_list, ComponentPolicy, Graph, NodeId, ParseOptions};
use crate::mcgs::{self, mcgs_sample};
use crate::metrics::{evaluate, EvaluationReport, DEFAULT_MIP_K};
use crate::par::Execution;
use crate::seeds::{pick_seed_with, SeedStrategy};

/// Any sampler the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Mcgs,
    Baseline(BaselineId),
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mcgs => mcgs::ALGORITHM_NAME,
            Algorithm::Baseline(id) => id.name(),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case(mcgs::ALGORITHM_NAME) {
            Ok(Algorithm::Mcgs)
        } else {
            s.parse().map(Algorithm::Baseline)
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A full experiment description, usually loaded from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialPlan {
    pub graphs: Vec<PathBuf>,
    pub algorithms: Vec<String>,
    pub seed_strategies: Vec<SeedStrategy>,
    pub rates: Vec<f64>,
    pub runs: usize,
    pub base_seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub weights: LossWeights,
    pub greedy_pool: Option<usize>,
    pub mip_k: usize,
    pub largest_component: bool,
}

impl Default for TrialPlan {
    fn default() -> Self {
        TrialPlan {
            graphs: Vec::new(),
            algorithms: vec![mcgs::ALGORITHM_NAME.to_owned()],
            seed_strategies: SeedStrategy::ALL.to_vec(),
            rates: vec![0.1, 0.2, 0.3, 0.4],
            runs: 5,
            base_seed: 0,
            alpha: 1.0,
            beta: 2.0,
            weights: LossWeights::default(),
            greedy_pool: None,
            mip_k: DEFAULT_MIP_K,
            largest_component: false,
        }
    }
}

impl TrialPlan {
    /// Reads a plan; relative graph paths resolve against the plan's folder.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut plan: TrialPlan = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for g in &mut plan.graphs {
            if g.is_relative() {
                *g = base.join(&*g);
            }
        }
        Ok(plan)
    }

    pub fn parsed_algorithms(&self) -> Result<Vec<Algorithm>> {
        self.algorithms.iter().map(|a| a.parse()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if let Some(r) = self.rates.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
            return Err(Error::Config(format!("rate {r} outside (0, 1]")));
        }
        if self.graphs.is_empty() || self.algorithms.is_empty() || self.seed_strategies.is_empty() || self.rates.is_empty() {
            return Err(Error::Config("plan needs at least one graph, algorithm, seed strategy and rate".into()));
        }
        if self.mip_k < 1 {
            return Err(Error::Config("mip_k must be at least 1".into()));
        }
        self.weights.validate()?;
        self.parsed_algorithms().map(|_| ())
    }

    pub fn trial_count(&self) -> usize {
        self.graphs.len() * self.algorithms.len() * self.seed_strategies.len() * self.rates.len() * self.runs
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-trial RNG seed from the base seed and cell coordinates. Algorithms
/// share seeds within a cell so they see the same random start nodes.
pub fn trial_seed(base: u64, graph: usize, strategy: usize, rate: usize, run: usize) -> u64 {
    [graph, strategy, rate, run]
        .into_iter()
        .fold(splitmix64(base), |acc, c| splitmix64(acc ^ splitmix64(c as u64)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub graph: String,
    pub graph_index: usize,
    pub algorithm: String,
    pub seed_strategy: SeedStrategy,
    pub rate: f64,
    pub run: usize,
    pub rng_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<EvaluationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn file_name(&self) -> String {
        format!(
            "{:02}_{}__{}__{}__phi{}__run{}.json",
            self.graph_index, self.graph, self.algorithm, self.seed_strategy, self.rate, self.run
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub indicator: String,
    /// Structure family, or `all` for whole-sample metrics.
    pub family: String,
    pub count: usize,
    pub median: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone)]
pub struct PlanResults {
    pub trials: Vec<TrialRecord>,
    pub aggregate: Vec<AggregateRow>,
}

impl PlanResults {
    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| t.error.is_some()).count()
    }

    pub fn aggregate_csv(&self) -> String {
        aggregate_csv(&self.aggregate)
    }

    /// Writes `reports/*.json` and `aggregate.csv` under `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        let reports = dir.join("reports");
        fs::create_dir_all(&reports).map_err(|e| Error::io(&reports, e))?;
        for t in &self.trials {
            let path = reports.join(t.file_name());
            let json = serde_json::to_string_pretty(t)?;
            fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
        }
        let path = dir.join("aggregate.csv");
        fs::write(&path, self.aggregate_csv()).map_err(|e| Error::io(&path, e))
    }
}

/// Lower median (deterministic for even counts).
pub fn lower_median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}

/// Sample standard deviation; 0 for fewer than two values. Sums run over
/// sorted values so the result does not depend on input order.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut dev: Vec<f64> = values.iter().map(|x| (x - mean).powi(2)).collect();
    dev.sort_by(f64::total_cmp);
    let var = dev.iter().sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

/// Every `(indicator, family, value)` triple a report contributes.
pub fn report_values(r: &EvaluationReport) -> Vec<(&'static str, &'static str, f64)> {
    let mut out = Vec::new();
    for f in Family::ALL {
        let s = r.family(f);
        if let Some(v) = s.mspr {
            out.push(("mspr", f.name(), v));
        }
        out.push(("msgr", f.name(), s.msgr));
        if let Some(v) = s.mip {
            out.push(("mip", f.name(), v));
        }
    }
    out.extend([("ksd", "all", r.ksd), ("sdd", "all", r.sdd), ("rcc", "all", r.rcc), ("ji", "all", r.ji)]);
    out
}

/// Medians and deviations per algorithm × indicator × family, in order of
/// first appearance of the algorithm and a fixed indicator order.
pub fn aggregate(trials: &[TrialRecord]) -> Vec<AggregateRow> {
    let mut algorithms: Vec<&str> = Vec::new();
    for t in trials {
        if !algorithms.contains(&t.algorithm.as_str()) {
            algorithms.push(&t.algorithm);
        }
    }
    let mut rows = Vec::new();
    let indicator_order = ["mspr", "msgr", "mip"];
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for ind in indicator_order {
        for f in Family::ALL {
            keys.push((ind, f.name()));
        }
    }
    keys.extend([("ksd", "all"), ("sdd", "all"), ("rcc", "all"), ("ji", "all")]);
    for alg in algorithms {
        let values: Vec<Vec<(&str, &str, f64)>> = trials
            .iter()
            .filter(|t| t.algorithm == alg)
            .filter_map(|t| t.report.as_ref().map(report_values))
            .collect();
        for &(ind, fam) in &keys {
            let xs: Vec<f64> = values
                .iter()
                .flat_map(|vs| vs.iter().filter(|(i, f, _)| *i == ind && *f == fam).map(|x| x.2))
                .collect();
            if xs.is_empty() {
                continue;
            }
            rows.push(AggregateRow {
                algorithm: alg.to_owned(),
                indicator: ind.to_owned(),
                family: fam.to_owned(),
                count: xs.len(),
                median: lower_median(&xs),
                stddev: std_dev(&xs),
            });
        }
    }
    rows
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from("algorithm,indicator,family,count,median,stddev\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.algorithm, r.indicator, r.family, r.count, r.median, r.stddev);
    }
    out
}

/// A loaded graph with everything trials share.
pub struct PreparedGraph {
    pub name: String,
    pub graph: Graph,
    pub detection: Detection,
    /// Start nodes of the deterministic seed strategies.
    pub fixed_seeds: Vec<(SeedStrategy, NodeId)>,
}

impl PreparedGraph {
    pub fn new(name: impl Into<String>, graph: Graph, strategies: &[SeedStrategy], exec: Execution) -> Self {
        let detection = detect(&graph);
        let mut dummy = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        let fixed_seeds = strategies
            .iter()
            .filter(|s| !s.is_random())
            .map(|&s| (s, pick_seed_with(&graph, s, &mut dummy, exec)))
            .collect();
        PreparedGraph {
            name: name.into(),
            graph,
            detection,
            fixed_seeds,
        }
    }

    fn seed_for(&self, s: SeedStrategy) -> Option<NodeId> {
        self.fixed_seeds.iter().find(|(st, _)| *st == s).map(|x| x.1)
    }
}

struct TrialSpec {
    graph: usize,
    algorithm: Algorithm,
    strategy: usize,
    rate: usize,
    run: usize,
}

/// Runs one sampler and scores it.
pub fn run_trial(
    prepared: &PreparedGraph,
    algorithm: Algorithm,
    cfg: &SamplerConfig,
    mip_k: usize,
) -> Result<EvaluationReport> {
    let sample = match algorithm {
        Algorithm::Mcgs => mcgs_sample(&prepared.graph, cfg, None)?,
        Algorithm::Baseline(id) => {
            let seed = if id.is_traversal() { prepared.seed_for(cfg.seed_strategy) } else { None };
            baseline_run(id, &prepared.graph, cfg, seed)?.sample
        }
    };
    evaluate(&prepared.graph, &prepared.name, &prepared.detection, &sample, mip_k)
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into())
}

/// Loads every graph of `plan` and runs all trials.
pub fn run_plan(plan: &TrialPlan, exec: Execution) -> Result<PlanResults> {
    plan.validate()?;
    let opts = ParseOptions {
        components: if plan.largest_component {
            ComponentPolicy::LargestComponent
        } else {
            ComponentPolicy::RequireConnected
        },
    };
    let graphs = plan
        .graphs
        .iter()
        .map(|p| Ok(PreparedGraph::new(graph_name(p), read_edge_list(p, opts)?, &plan.seed_strategies, exec)))
        .collect::<Result<Vec<_>>>()?;
    Ok(run_prepared(plan, &graphs, exec))
}

/// Runs all trials of `plan` over already loaded graphs (the plan's graph
/// paths are ignored).
pub fn run_prepared(plan: &TrialPlan, graphs: &[PreparedGraph], exec: Execution) -> PlanResults {
    let algorithms = plan.parsed_algorithms().unwrap_or_default();
    let mut specs = Vec::with_capacity(plan.trial_count());
    for graph in 0..graphs.len() {
        for &algorithm in &algorithms {
            for strategy in 0..plan.seed_strategies.len() {
                for rate in 0..plan.rates.len() {
                    for run in 0..plan.runs {
                        specs.push(TrialSpec {
                            graph,
                            algorithm,
                            strategy,
                            rate,
                            run,
                        });
                    }
                }
            }
        }
    }
    let trials = exec.map(&specs, |t| {
        let prepared = &graphs[t.graph];
        let rng_seed = trial_seed(plan.base_seed, t.graph, t.strategy, t.rate, t.run);
        let cfg = SamplerConfig {
            phi: plan.rates[t.rate],
            alpha: plan.alpha,
            beta: plan.beta,
            weights: plan.weights,
            rng_seed,
            seed_strategy: plan.seed_strategies[t.strategy],
            greedy_pool: plan.greedy_pool,
            execution: Execution::Sequential,
        };
        let outcome = run_trial(prepared, t.algorithm, &cfg, plan.mip_k);
        TrialRecord {
            graph: prepared.name.clone(),
            graph_index: t.graph,
            algorithm: t.algorithm.name().to_owned(),
            seed_strategy: cfg.seed_strategy,
            rate: cfg.phi,
            run: t.run,
            rng_seed,
            error: outcome.as_ref().err().map(|e| e.to_string()),
            report: outcome.ok(),
        }
    });
    let aggregate = aggregate(&trials);
    PlanResults { trials, aggregate }
}
