use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mcgs_core::baselines::baseline_run;
use mcgs_core::detect::detect;
use mcgs_core::export::{export, export_to_path, write_structures_json, ExportFormat};
use mcgs_core::graph::{read_edge_list, ComponentPolicy, Graph, ParseOptions};
use mcgs_core::harness::{run_plan, Algorithm, TrialPlan};
use mcgs_core::mcgs::{mcgs_sample, Partition};
use mcgs_core::metrics::{evaluate, DEFAULT_MIP_K};
use mcgs_core::nodeset::NodeSet;
use mcgs_core::sample::{Provenance, SampleSidecar};
use mcgs_core::seeds::SeedStrategy;
use mcgs_core::{Execution, LossWeights, Sample, SamplerConfig};

#[derive(Parser)]
#[command(name = "mcgs", version, about = "Minority-centric graph sampling")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Whitespace-separated edge list.
    graph: PathBuf,
    /// Keep only the largest connected component instead of rejecting a
    /// disconnected input.
    #[arg(long)]
    largest_component: bool,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        let opts = ParseOptions {
            components: if self.largest_component {
                ComponentPolicy::LargestComponent
            } else {
                ComponentPolicy::RequireConnected
            },
        };
        read_edge_list(&self.graph, opts).with_context(|| format!("loading {}", self.graph.display()))
    }

    fn name(&self) -> String {
        self.graph
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Detect minority structures and print them as JSON.
    Identify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw one sample.
    Sample(SampleArgs),
    /// Score a sample against its graph.
    Evaluate {
        #[command(flatten)]
        graph: GraphArgs,
        /// A `.json` sidecar written by `sample`, or a plain edge list.
        sample: PathBuf,
        /// Sampling rate of an edge-list sample (default: nodes / n).
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MIP_K)]
        mip_k: usize,
    },
    /// Run a trial plan.
    Bench(BenchArgs),
    /// Convert a graph or sample to another format.
    Export {
        #[command(flatten)]
        graph: GraphArgs,
        /// Sample sidecar to export instead of the whole graph.
        #[arg(long)]
        sample: Option<PathBuf>,
        /// edges, dot, graphml or json (structures).
        #[arg(long, default_value = "dot")]
        format: String,
        /// Annotate nodes with the structures detected in the graph.
        #[arg(long)]
        structures: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// MCGS or a baseline id (RN, RDN, RPN, RE, RNE, TIES, BF, DF, SB, FF, RW, RJ).
    #[arg(long, default_value = "MCGS")]
    algo: String,
    #[arg(long)]
    rate: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Loss weights `mse,ncc,ji`.
    #[arg(long, default_value = "1,0,0")]
    weights: LossWeights,
    #[arg(long, default_value = "random")]
    seed_strategy: SeedStrategy,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// `label part` lines; MCGS then runs on each part separately.
    #[arg(long)]
    partition_file: Option<PathBuf>,
    /// Score only this many random candidates per greedy step.
    #[arg(long)]
    greedy_pool: Option<usize>,
    /// Writes PREFIX.edges and PREFIX.json; edge list to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    plan: PathBuf,
    /// Output folder for reports and aggregate.csv.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    seed_strategies: Option<Vec<SeedStrategy>>,
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    #[arg(long)]
    greedy_pool: Option<usize>,
    #[arg(long)]
    largest_component: bool,
}

impl BenchArgs {
    fn apply(&self, plan: &mut TrialPlan) {
        if let Some(a) = &self.algorithms {
            plan.algorithms = a.clone();
        }
        if let Some(s) = &self.seed_strategies {
            plan.seed_strategies = s.clone();
        }
        if let Some(r) = &self.rates {
            plan.rates = r.clone();
        }
        if let Some(r) = self.runs {
            plan.runs = r;
        }
        if let Some(s) = self.base_seed {
            plan.base_seed = s;
        }
        if self.greedy_pool.is_some() {
            plan.greedy_pool = self.greedy_pool;
        }
        plan.largest_component |= self.largest_component;
    }
}

fn write_output(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?);
            write(&mut f)?;
            f.flush().with_context(|| format!("writing {}", p.display()))
        }
        None => write(&mut io::stdout().lock()),
    }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn run_sample(args: &SampleArgs, exec: Execution) -> Result<()> {
    let g = args.graph.load()?;
    let algorithm: Algorithm = args.algo.parse()?;
    let cfg = SamplerConfig {
        phi: args.rate,
        alpha: args.alpha,
        beta: args.beta,
        weights: args.weights,
        rng_seed: args.rng_seed,
        seed_strategy: args.seed_strategy,
        greedy_pool: args.greedy_pool,
        execution: exec,
    };
    let sample = match algorithm {
        Algorithm::Mcgs => {
            let partition = match &args.partition_file {
                Some(p) => {
                    let f = fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
                    Some(Partition::parse(BufReader::new(f), &g)?)
                }
                None => None,
            };
            mcgs_sample(&g, &cfg, partition.as_ref())?
        }
        Algorithm::Baseline(id) => {
            if args.partition_file.is_some() {
                bail!("--partition-file only applies to MCGS");
            }
            baseline_run(id, &g, &cfg, None)?.sample
        }
    };
    if sample.provenance.overshoot {
        eprintln!("warning: minority nodes alone exceed the budget; sample has {} nodes", sample.nodes.len());
    }
    match &args.out {
        Some(prefix) => {
            let edges = with_extension(prefix, "edges");
            export_to_path(&g, Some(&sample), None, ExportFormat::EdgeList, &edges)?;
            let json = with_extension(prefix, "json");
            let text = serde_json::to_string_pretty(&sample.sidecar(&g))?;
            fs::write(&json, text).with_context(|| format!("writing {}", json.display()))?;
        }
        None => sample.write_edge_list(&g, io::stdout().lock())?,
    }
    Ok(())
}

/// Reads a sidecar, or an edge list whose endpoints are the sample nodes.
fn load_sample(g: &Graph, path: &Path, rate: Option<f64>) -> Result<Sample> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        let side: SampleSidecar = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(side.to_sample(g)?);
    }
    let sub = mcgs_core::graph::parse_edge_list_str(&text, ParseOptions::allow_disconnected())
        .with_context(|| format!("parsing {}", path.display()))?;
    let mut nodes = NodeSet::new(g.node_count());
    for label in sub.labels() {
        nodes.insert(g.id_of(label).with_context(|| format!("sample node `{label}` not in graph"))?);
    }
    let phi = rate.unwrap_or(nodes.len() as f64 / g.node_count() as f64);
    Ok(Sample::induce(g, &nodes, Provenance::new("unknown", phi, 0)))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match cli.command {
        Command::Identify { graph, out } => {
            let g = graph.load()?;
            let d = detect(&g);
            write_output(out.as_deref(), |w| Ok(write_structures_json(&g, &d, w)?))?;
        }
        Command::Sample(args) => run_sample(&args, exec)?,
        Command::Evaluate { graph, sample, rate, mip_k } => {
            let g = graph.load()?;
            let s = load_sample(&g, &sample, rate)?;
            let report = evaluate(&g, &graph.name(), &detect(&g), &s, mip_k)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Bench(args) => {
            let mut plan = TrialPlan::load(&args.plan)?;
            args.apply(&mut plan);
            let results = run_plan(&plan, exec)?;
            results.write(&args.out)?;
            let failures = results.failures();
            eprintln!(
                "{} trials, {} failed; wrote {}",
                results.trials.len(),
                failures,
                args.out.join("aggregate.csv").display()
            );
            if failures > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Export { graph, sample, format, structures, out } => {
            let g = graph.load()?;
            let format: ExportFormat = format.parse()?;
            let s = sample.map(|p| load_sample(&g, &p, None)).transpose()?;
            let d = (structures || format == ExportFormat::Json).then(|| detect(&g));
            write_output(out.as_deref(), |w| Ok(export(&g, s.as_ref(), d.as_ref(), format, w)?))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
