//! Command front end: configuration, the run/verify/bench operations, and
//! report rendering. The binary in `src/bin/icmax.rs` is a thin flag parser
//! over these.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use crate::graph::{Graph, ProbabilityModel};
use crate::select::{self, Method};
use crate::simulate::{self, SimEstimate};
use crate::sketch::{CenterSet, SketchSet};
use crate::synthetic;

/// Exit codes: 0 success, 1 verification failure, 2 usage error.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Edgelist,
    Csr,
}

impl GraphFormat {
    pub fn parse(s: &str) -> Option<GraphFormat> {
        match s {
            "edgelist" => Some(GraphFormat::Edgelist),
            "csr" => Some(GraphFormat::Csr),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<OutputFormat> {
        match s {
            "json" => Some(OutputFormat::Json),
            "csv" => Some(OutputFormat::Csv),
            "human" => Some(OutputFormat::Human),
            _ => None,
        }
    }
}

/// One run's full configuration. Defaults mirror the reference experimental
/// setup: 256 sketches, no compression, 100 seeds, constant p = 0.02,
/// winning-tree selection.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub graph_path: PathBuf,
    pub format: GraphFormat,
    pub model: ProbabilityModel,
    pub r_count: u32,
    pub alpha: f64,
    pub k: usize,
    pub method: Method,
    pub threads: Option<usize>,
    pub rng_seed: u64,
    pub output: OutputFormat,
    pub mc_rounds: Option<u64>,
    /// Debug hook: corrupt one sketch after construction so verification
    /// must fail. Hidden flag, used by fault-injection tests.
    pub inject_fault: bool,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            graph_path: PathBuf::new(),
            format: GraphFormat::Edgelist,
            model: ProbabilityModel::Constant(0.02),
            r_count: 256,
            alpha: 1.0,
            k: 100,
            method: Method::Wintree,
            threads: None,
            rng_seed: 1,
            output: OutputFormat::Human,
            mc_rounds: None,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConfigEcho {
    pub graph: String,
    pub format: GraphFormat,
    pub model: ProbabilityModel,
    pub r: u32,
    pub alpha: f64,
    pub k: usize,
    pub method: Method,
    pub threads: usize,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Timings {
    pub sketch_s: f64,
    pub select_s: f64,
}

/// Report of one `run` invocation. Deterministic for a fixed configuration
/// and rng seed, except `timings` (and winning-tree evaluation counters).
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub n: usize,
    pub m: usize,
    pub rho: usize,
    pub sketch_bytes: u64,
    pub seeds: Vec<u32>,
    pub gain_sums: Vec<u64>,
    pub gains: Vec<f64>,
    pub sigma_estimate: f64,
    pub initial_evaluations: u64,
    pub round_evaluations: Vec<u64>,
    pub total_round_evaluations: u64,
    pub initial_bfs_visits: u64,
    pub bfs_visits: u64,
    pub timings: Timings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<SimEstimate>,
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| usage(format!("cannot build thread pool: {e}")))
}

fn load_graph(cfg: &RunConfig) -> Result<Graph, CliError> {
    let file = File::open(&cfg.graph_path)
        .map_err(|e| usage(format!("cannot open {}: {e}", cfg.graph_path.display())))?;
    let reader = BufReader::new(file);
    let graph = match cfg.format {
        GraphFormat::Edgelist => Graph::from_edge_list_text(reader),
        GraphFormat::Csr => Graph::read_csr(reader),
    };
    graph.map_err(|e| usage(format!("cannot load {}: {e}", cfg.graph_path.display())))
}

fn validate_model(model: &ProbabilityModel) -> Result<(), CliError> {
    match *model {
        ProbabilityModel::Constant(p) if !(0.0..=1.0).contains(&p) => {
            Err(usage(format!("--p {p} outside [0, 1]")))
        }
        ProbabilityModel::UniformRange { lo, hi }
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) =>
        {
            Err(usage(format!("--uniform {lo} {hi} must satisfy 0 <= lo <= hi <= 1")))
        }
        _ => Ok(()),
    }
}

/// Loads the graph, builds sketches, runs the selector, and optionally
/// cross-checks the seed set with Monte-Carlo simulation.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    validate_model(&cfg.model)?;
    if cfg.r_count == 0 {
        return Err(usage("--R must be at least 1"));
    }
    if !(0.0..=1.0).contains(&cfg.alpha) {
        return Err(usage(format!("--alpha {} outside [0, 1]", cfg.alpha)));
    }
    let graph = load_graph(cfg)?;
    if cfg.k == 0 || cfg.k > graph.n() {
        return Err(usage(format!(
            "--k {} out of range: need 1 <= k <= n = {}",
            cfg.k,
            graph.n()
        )));
    }
    let pool = build_pool(cfg.threads)?;
    pool.install(|| {
        let centers = CenterSet::select(&graph, cfg.alpha, cfg.rng_seed);
        let estimated = (cfg.r_count as u64) * (centers.rho() as u64) * 2 * 8
            + (graph.n() as u64).div_ceil(8);
        eprintln!("estimated sketch memory: {estimated} bytes");

        let rho = centers.rho();
        let t0 = Instant::now();
        let mut set = SketchSet::build(&graph, cfg.model, cfg.r_count, centers);
        let sketch_s = t0.elapsed().as_secs_f64();

        let t1 = Instant::now();
        let result = select::select(&mut set, cfg.k, cfg.method)
            .map_err(|e| usage(e.to_string()))?;
        let select_s = t1.elapsed().as_secs_f64();

        let mc = cfg.mc_rounds.map(|rounds| {
            simulate::simulate_ic(&graph, &cfg.model, &result.seeds, rounds, cfg.rng_seed)
        });

        Ok(RunReport {
            config: ConfigEcho {
                graph: cfg.graph_path.display().to_string(),
                format: cfg.format,
                model: cfg.model,
                r: cfg.r_count,
                alpha: cfg.alpha,
                k: cfg.k,
                method: cfg.method,
                threads: pool.current_num_threads(),
                rng_seed: cfg.rng_seed,
            },
            n: graph.n(),
            m: graph.m(),
            rho,
            sketch_bytes: set.sketch_bytes(),
            sigma_estimate: result.gains.iter().sum(),
            seeds: result.seeds,
            gain_sums: result.gain_sums,
            gains: result.gains,
            initial_evaluations: result.initial_evaluations,
            total_round_evaluations: result.round_evaluations.iter().sum(),
            round_evaluations: result.round_evaluations,
            initial_bfs_visits: result.initial_bfs_visits,
            bfs_visits: result.bfs_visits,
            timings: Timings { sketch_s, select_s },
            mc,
        })
    })
}

pub fn render_run(report: &RunReport, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serializes")
        }
        OutputFormat::Csv => {
            let mut out = String::from("round,seed,gain_sum,gain\n");
            for (i, ((&s, &gs), &g)) in report
                .seeds
                .iter()
                .zip(&report.gain_sums)
                .zip(&report.gains)
                .enumerate()
            {
                out.push_str(&format!("{},{s},{gs},{g}\n", i + 1));
            }
            out
        }
        OutputFormat::Human => {
            let mut out = String::new();
            out.push_str(&format!(
                "graph {} : n = {}, m = {}\n",
                report.config.graph, report.n, report.m
            ));
            out.push_str(&format!(
                "sketches: R = {}, alpha = {}, rho = {}, {} bytes\n",
                report.config.r, report.config.alpha, report.rho, report.sketch_bytes
            ));
            out.push_str(&format!(
                "method {}: sketch {:.3}s, select {:.3}s\n",
                report.config.method, report.timings.sketch_s, report.timings.select_s
            ));
            out.push_str(&format!(
                "evaluations: {} initial + {} in rounds; BFS visits: {}\n",
                report.initial_evaluations, report.total_round_evaluations, report.bfs_visits
            ));
            out.push_str(&format!(
                "estimated spread of {} seeds: {:.3}\n",
                report.seeds.len(),
                report.sigma_estimate
            ));
            out.push_str("round,seed,gain\n");
            for (i, (&s, &g)) in report.seeds.iter().zip(&report.gains).enumerate() {
                out.push_str(&format!("{},{s},{g:.4}\n", i + 1));
            }
            if let Some(mc) = &report.mc {
                out.push_str(&format!(
                    "monte-carlo sigma ({} rounds): {:.3} +- {:.3}\n",
                    mc.rounds, mc.mean, mc.stderr
                ));
            }
            out
        }
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

pub fn render_verify(report: &VerifyReport, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        _ => {
            let mut out = String::new();
            for c in &report.checks {
                out.push_str(&format!(
                    "{} {} - {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            out.push_str(if report.passed {
                "verification passed\n"
            } else {
                "verification FAILED\n"
            });
            out
        }
    }
}

/// Estimated spread of an ordered seed list on the fixed sampled graphs:
/// the telescoped sum of marginal gains.
fn sketch_sigma(set: &mut SketchSet, seeds: &[u32]) -> f64 {
    let mut total = 0u64;
    for &s in seeds {
        total += set.marginal_sum(s);
        set.mark_seed(s);
    }
    total as f64 / set.r_count() as f64
}

/// Runs the oracle suites on bundled synthetic graphs: four-way selector
/// agreement, the 2x evaluation bound, compression transparency across
/// alpha, sketch-vs-materialized audit, and the Monte-Carlo cross-check.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let pool = build_pool(cfg.threads)?;
    let checks = pool.install(|| run_verify_checks(cfg));
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { checks, passed })
}

fn run_verify_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    // Bundled instances: (graph, model, alpha, R, k).
    let instances: Vec<(Graph, ProbabilityModel, f64, u32, usize)> = vec![
        (
            synthetic::erdos_renyi(24, 50, 1),
            ProbabilityModel::Constant(0.35),
            0.5,
            8,
            4,
        ),
        (
            synthetic::erdos_renyi(40, 90, 2),
            ProbabilityModel::Constant(0.2),
            0.0,
            4,
            6,
        ),
        (
            synthetic::erdos_renyi(60, 150, 3),
            ProbabilityModel::UniformRange { lo: 0.0, hi: 0.4 },
            1.0,
            16,
            5,
        ),
        (
            synthetic::preferential_attachment(50, 3, 4),
            ProbabilityModel::DegreeWeighted,
            0.25,
            8,
            5,
        ),
    ];

    // Four-way agreement plus the evaluation bound.
    let mut agree = true;
    let mut bound_ok = true;
    let mut detail = String::new();
    for (idx, (g, model, alpha, r_count, k)) in instances.iter().enumerate() {
        let centers = CenterSet::select(g, *alpha, cfg.rng_seed + idx as u64);
        let mut set = SketchSet::build(g, *model, *r_count, centers);
        let mut results = Vec::new();
        for method in Method::ALL {
            set.reset();
            match select::select(&mut set, *k, method) {
                Ok(res) => results.push(res),
                Err(e) => {
                    agree = false;
                    detail = format!("instance {idx}: {e}");
                    break;
                }
            }
        }
        if results.len() == 4 {
            if !results
                .windows(2)
                .all(|p| p[0].seeds == p[1].seeds && p[0].gain_sums == p[1].gain_sums)
            {
                agree = false;
                detail = format!("instance {idx}: selector seed lists differ");
            }
            let celf = results[1].total_round_evaluations();
            let ptree = results[2].total_round_evaluations();
            if ptree > 2 * celf {
                bound_ok = false;
            }
        }
    }
    checks.push(CheckResult {
        name: "four-way-agreement",
        passed: agree,
        detail: if agree {
            format!("{} instances, 4 selectors each", instances.len())
        } else {
            detail
        },
    });
    checks.push(CheckResult {
        name: "ptree-evaluations-within-2x-celf",
        passed: bound_ok,
        detail: "selection-round evaluation counters".into(),
    });

    // Compression transparency: identical marginal sums across alpha at
    // every seed-history prefix.
    let g = synthetic::erdos_renyi(40, 90, 7);
    let model = ProbabilityModel::Constant(0.3);
    let history = [11u32, 3, 28];
    let mut per_alpha: Vec<Vec<u64>> = Vec::new();
    for alpha in [0.0, 0.1, 1.0] {
        let centers = CenterSet::select(&g, alpha, cfg.rng_seed);
        let mut set = SketchSet::build(&g, model, 8, centers);
        let mut sums = Vec::new();
        for prefix in 0..=history.len() {
            for v in 0..40u32 {
                if !set.is_seed(v) {
                    sums.push(set.marginal_sum(v));
                }
            }
            if prefix < history.len() {
                set.mark_seed(history[prefix]);
            }
        }
        per_alpha.push(sums);
    }
    let transparent = per_alpha.windows(2).all(|p| p[0] == p[1]);
    checks.push(CheckResult {
        name: "compression-transparency",
        passed: transparent,
        detail: "marginal sums equal across alpha in {0, 0.1, 1}".into(),
    });

    // Sketch arrays against a materialized recomputation; the fault
    // injection hook must make this fail and name the invariant.
    let mut audit_detail = String::from("labels and sizes match materialized components");
    let mut audit_ok = true;
    for seed in 0..3u64 {
        let g = synthetic::erdos_renyi(50, 120, 20 + seed);
        let centers = CenterSet::select(&g, 0.5, cfg.rng_seed + seed);
        let mut set = SketchSet::build(&g, ProbabilityModel::Constant(0.25), 6, centers);
        if cfg.inject_fault && seed == 0 && !set.corrupt_sketch_for_fault_injection() {
            audit_ok = false;
            audit_detail = "fault injection found nothing to corrupt".into();
            break;
        }
        if let Err(e) = set.validate_fresh_sketches() {
            audit_ok = false;
            audit_detail = e;
            break;
        }
    }
    checks.push(CheckResult {
        name: "sketch-vs-materialized",
        passed: audit_ok,
        detail: audit_detail,
    });

    // Estimator cross-check on an exactly enumerable graph.
    let g = Graph::from_edges(
        8,
        &[(0, 1), (1, 2), (0, 2), (2, 3), (4, 5), (5, 6), (6, 7)],
    )
    .expect("static edges are valid");
    let model = ProbabilityModel::Constant(0.4);
    let seeds = [0u32, 5];
    let exact = simulate::exact_sigma_small(&g, &model, &seeds).expect("m <= 20");
    let centers = CenterSet::select(&g, 0.5, cfg.rng_seed);
    let mut set = SketchSet::build(&g, model, 4096, centers);
    let sketch_est = sketch_sigma(&mut set, &seeds);
    let sketch_err = (sketch_est - exact).abs() / exact;
    let mc = simulate::simulate_ic(&g, &model, &seeds, 20_000, cfg.rng_seed);
    let mc_dev = (mc.mean - exact).abs();
    let mc_ok = mc_dev <= 4.0 * mc.stderr;
    let est_ok = sketch_err <= 0.02 && mc_ok;
    checks.push(CheckResult {
        name: "estimator-cross-check",
        passed: est_ok,
        detail: format!(
            "exact {exact:.4}, sketch {sketch_est:.4} (rel err {:.4}), mc {:.4} +- {:.4}",
            sketch_err, mc.mean, mc.stderr
        ),
    });

    checks
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BenchRow {
    pub alpha: f64,
    pub method: Method,
    pub sketch_s: f64,
    pub select_s: f64,
    pub evals: u64,
    pub visits: u64,
    pub bytes: u64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// Sweeps alpha x method on one graph and reports the space/time tradeoff.
pub fn cmd_bench(
    cfg: &RunConfig,
    alphas: &[f64],
    methods: &[Method],
) -> Result<BenchReport, CliError> {
    validate_model(&cfg.model)?;
    if alphas.is_empty() || methods.is_empty() {
        return Err(usage("bench needs at least one alpha and one method"));
    }
    for &a in alphas {
        if !(0.0..=1.0).contains(&a) {
            return Err(usage(format!("--alphas entry {a} outside [0, 1]")));
        }
    }
    let graph = load_graph(cfg)?;
    if cfg.k == 0 || cfg.k > graph.n() {
        return Err(usage(format!(
            "--k {} out of range: need 1 <= k <= n = {}",
            cfg.k,
            graph.n()
        )));
    }
    let pool = build_pool(cfg.threads)?;
    pool.install(|| {
        let mut rows = Vec::new();
        for &alpha in alphas {
            let centers = CenterSet::select(&graph, alpha, cfg.rng_seed);
            for &method in methods {
                let t0 = Instant::now();
                let mut set =
                    SketchSet::build(&graph, cfg.model, cfg.r_count, centers.clone());
                let sketch_s = t0.elapsed().as_secs_f64();
                let t1 = Instant::now();
                let res = select::select(&mut set, cfg.k, method)
                    .map_err(|e| usage(e.to_string()))?;
                let select_s = t1.elapsed().as_secs_f64();
                rows.push(BenchRow {
                    alpha,
                    method,
                    sketch_s,
                    select_s,
                    evals: res.initial_evaluations + res.total_round_evaluations(),
                    visits: res.bfs_visits,
                    bytes: set.sketch_bytes(),
                });
            }
        }
        Ok(BenchReport { rows })
    })
}

pub fn render_bench(report: &BenchReport, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        _ => {
            let mut out = String::from("alpha,method,sketch_s,select_s,evals,visits,bytes\n");
            for r in &report.rows {
                out.push_str(&format!(
                    "{},{},{:.6},{:.6},{},{},{}\n",
                    r.alpha, r.method, r.sketch_s, r.select_s, r.evals, r.visits, r.bytes
                ));
            }
            out
        }
    }
}
