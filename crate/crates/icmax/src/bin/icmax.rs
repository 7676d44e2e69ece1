//! Influence-maximization CLI: `run` a selection, `verify` the oracle
//! suites, or `bench` the alpha/method tradeoff.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use icmax::cli::{
    cmd_bench, cmd_run, cmd_verify, render_bench, render_run, render_verify, CliError,
    GraphFormat, OutputFormat, RunConfig,
};
use icmax::graph::ProbabilityModel;
use icmax::select::Method;

#[derive(Parser)]
#[command(
    name = "icmax",
    about = "Influence maximization with compressed connectivity sketches",
    version
)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select seeds on a graph and report spread, counters, and timings.
    Run(RunArgs),
    /// Run the built-in oracle suites on bundled synthetic graphs.
    Verify(VerifyArgs),
    /// Sweep alpha and method on one graph; emit a tradeoff table.
    Bench(BenchArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("model").args(["p", "uniform", "wic"])))]
struct ModelArgs {
    /// Constant activation probability for every edge.
    #[arg(long)]
    p: Option<f64>,
    /// Per-edge probability drawn deterministically from U(LO, HI).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    uniform: Option<Vec<f64>>,
    /// Degree-weighted probabilities: p(u,v) = 2 / (deg(u) + deg(v)).
    #[arg(long)]
    wic: bool,
}

impl ModelArgs {
    fn resolve(&self) -> ProbabilityModel {
        if let Some(p) = self.p {
            ProbabilityModel::Constant(p)
        } else if let Some(range) = &self.uniform {
            ProbabilityModel::UniformRange {
                lo: range[0],
                hi: range[1],
            }
        } else if self.wic {
            ProbabilityModel::DegreeWeighted
        } else {
            ProbabilityModel::Constant(0.02)
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Number of sketches.
    #[arg(long = "R", default_value_t = 256)]
    r: u32,
    /// Center fraction in [0, 1]; 1 memoizes everything, 0 nothing.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Number of seeds to select.
    #[arg(long, default_value_t = 100)]
    k: usize,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for center selection and simulation streams.
    #[arg(long = "rng-seed", default_value_t = 1)]
    rng_seed: u64,
    /// Report format.
    #[arg(long, default_value = "human")]
    output: String,
}

#[derive(Args)]
struct RunArgs {
    /// Input graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Input format: edgelist or csr.
    #[arg(long, default_value = "edgelist")]
    format: String,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Selector: exhaustive, celf, ptree, or wintree.
    #[arg(long, default_value = "wintree")]
    method: String,
    /// Cross-check the selected seeds with this many Monte-Carlo rounds.
    #[arg(long = "mc-rounds")]
    mc_rounds: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Corrupt one sketch after construction (the audit must then fail).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Input graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Input format: edgelist or csr.
    #[arg(long, default_value = "edgelist")]
    format: String,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated center fractions to sweep.
    #[arg(long, default_value = "0.1,1.0", value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Comma-separated selectors to sweep.
    #[arg(long, default_value = "celf,ptree,wintree", value_delimiter = ',')]
    methods: Vec<String>,
}

fn parse_output(s: &str) -> Result<OutputFormat, CliError> {
    OutputFormat::parse(s)
        .ok_or_else(|| CliError::Usage(format!("unknown output format {s:?}")))
}

fn parse_format(s: &str) -> Result<GraphFormat, CliError> {
    GraphFormat::parse(s).ok_or_else(|| CliError::Usage(format!("unknown graph format {s:?}")))
}

fn parse_method(s: &str) -> Result<Method, CliError> {
    Method::parse(s).ok_or_else(|| CliError::Usage(format!("unknown method {s:?}")))
}

fn dispatch(args: CliArgs) -> Result<ExitCode, CliError> {
    match args.command {
        Command::Run(a) => {
            let cfg = RunConfig {
                graph_path: a.graph,
                format: parse_format(&a.format)?,
                model: a.model.resolve(),
                r_count: a.common.r,
                alpha: a.common.alpha,
                k: a.common.k,
                method: parse_method(&a.method)?,
                threads: a.common.threads,
                rng_seed: a.common.rng_seed,
                output: parse_output(&a.common.output)?,
                mc_rounds: a.mc_rounds,
                inject_fault: false,
            };
            let report = cmd_run(&cfg)?;
            print!("{}", render_run(&report, cfg.output));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(a) => {
            let output = parse_output(&a.common.output)?;
            let cfg = RunConfig {
                r_count: a.common.r,
                alpha: a.common.alpha,
                threads: a.common.threads,
                rng_seed: a.common.rng_seed,
                inject_fault: a.inject_fault,
                ..RunConfig::default()
            };
            let report = cmd_verify(&cfg)?;
            print!("{}", render_verify(&report, output));
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Bench(a) => {
            let cfg = RunConfig {
                graph_path: a.graph,
                format: parse_format(&a.format)?,
                model: a.model.resolve(),
                r_count: a.common.r,
                alpha: a.common.alpha,
                k: a.common.k,
                threads: a.common.threads,
                rng_seed: a.common.rng_seed,
                output: parse_output(&a.common.output)?,
                ..RunConfig::default()
            };
            let methods = a
                .methods
                .iter()
                .map(|m| parse_method(m))
                .collect::<Result<Vec<_>, _>>()?;
            let report = cmd_bench(&cfg, &a.alphas, &methods)?;
            print!("{}", render_bench(&report, cfg.output));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let args = CliArgs::parse();
    match dispatch(args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
