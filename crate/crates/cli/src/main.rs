//! Command-line front end: solve one problem, compare algorithms under
//! identical budgets, or list the built-in instances.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error.

mod artifacts;
mod config_file;
mod manifest;
mod runner;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use paretobb::problems::{builtin, builtin_names, load_problem, ProblemDefinition};

use artifacts::RunArtifacts;
use manifest::{AlgoSpec, RunManifest};

#[derive(Parser)]
#[command(name = "paretobb", version, about = "Global multiobjective solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and export archive, bounds and history.
    Solve(SolveArgs),
    /// Run several algorithms under identical seeds and budgets.
    Compare(CompareArgs),
    /// List the built-in problems.
    ListProblems(ListArgs),
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Built-in problem name (t51, t52, zdt2, t54, t55, t56).
    #[arg(long)]
    problem: Option<String>,
    /// Problem definition file.
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Dimension for the scalable instances (zdt2, t54).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Optional config file with a [minimoea] section; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Termination accuracy in (0, 0.02] (default 0.02).
    #[arg(long)]
    eps: Option<f64>,
    /// Iteration budget (default 6n).
    #[arg(long)]
    max_iters: Option<usize>,
    /// Repair period (default 3n, clamped to the iteration budget).
    #[arg(long)]
    repair_period: Option<usize>,
    #[arg(long, default_value_t = 200_000)]
    max_boxes: usize,
    #[arg(long)]
    threads: Option<usize>,
    /// Constraint penalty coefficient (default 1).
    #[arg(long)]
    rho: Option<f64>,
    /// Mini-MOEA population (default 10; 200 for the full baselines).
    #[arg(long)]
    population: Option<usize>,
    /// Mini-MOEA generations (default 20; 300 for the full baselines).
    #[arg(long)]
    generations: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Algorithm: basic-bb | pbb-nsga2 | pbb-moead | nsga2-full | moead-full.
    #[arg(long)]
    algo: Option<AlgoSpec>,
    /// Replay a previous run's manifest (overrides problem/algo/budget flags
    /// except --threads and --out).
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Comma-separated list of at least two algorithms.
    #[arg(long, value_delimiter = ',')]
    algos: Vec<AlgoSpec>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ListArgs {
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Compare(args) => cmd_compare(args),
        Command::ListProblems(args) => cmd_list_problems(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn config_error(err: anyhow::Error) -> anyhow::Result<ExitCode> {
    eprintln!("error: {err:#}");
    Ok(ExitCode::from(2))
}

fn load_problem_args(args: &ProblemArgs) -> anyhow::Result<ProblemDefinition> {
    match (&args.problem, &args.problem_file) {
        (Some(name), None) => builtin(name, args.n).map_err(|e| anyhow!(e)),
        (None, Some(path)) => {
            load_problem(path).with_context(|| format!("loading {}", path.display()))
        }
        (Some(_), Some(_)) => bail!("--problem and --problem-file are mutually exclusive"),
        (None, None) => bail!("one of --problem or --problem-file is required"),
    }
}

fn now_unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1)
}

fn build_manifest(
    problem: &ProblemDefinition,
    algo: AlgoSpec,
    budget: &BudgetArgs,
    file: &config_file::FileConfig,
) -> RunManifest {
    let n = problem.n;
    let max_iterations = budget.max_iters.unwrap_or(6 * n);
    let repair_period = budget
        .repair_period
        .unwrap_or_else(|| (3 * n).min(max_iterations).max(1));
    let full = algo.is_full_moea();
    RunManifest {
        problem: RunManifest::problem_manifest(problem),
        algo,
        seed: budget.seed.or(file.seed).unwrap_or(0),
        epsilon: budget.eps.unwrap_or(0.02),
        max_iterations,
        repair_period,
        max_boxes: budget.max_boxes,
        threads: budget.threads.unwrap_or_else(default_threads),
        rho: budget.rho.or(file.rho).unwrap_or(1.0),
        population: budget
            .population
            .or(file.population)
            .unwrap_or(if full { 200 } else { 10 }),
        generations: budget
            .generations
            .or(file.generations)
            .unwrap_or(if full { 300 } else { 20 }),
        created_unix_ms: now_unix_ms(),
    }
}

/// Resolves the algorithm from the flag or, failing that, from the config
/// file's variant (as its hybrid loop).
fn resolve_algo(
    flag: Option<AlgoSpec>,
    file: &config_file::FileConfig,
) -> Option<AlgoSpec> {
    flag.or_else(|| {
        file.variant.map(|v| match v {
            paretobb::minimoea::MiniMoeaVariant::Nsga2 => AlgoSpec::PbbNsga2,
            paretobb::minimoea::MiniMoeaVariant::MoeadDe => AlgoSpec::PbbMoead,
        })
    })
}

fn load_file_config(budget: &BudgetArgs) -> anyhow::Result<config_file::FileConfig> {
    match &budget.config {
        Some(path) => config_file::load(path),
        None => Ok(config_file::FileConfig::default()),
    }
}

fn validate_manifest(manifest: &RunManifest) -> anyhow::Result<()> {
    if manifest.algo.is_full_moea() {
        return Ok(());
    }
    let config = runner::solver_config(manifest, paretobb::engine::Algorithm::BasicBb);
    config.validate().map_err(|e| anyhow!(e))
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let (manifest, problem) = if let Some(path) = &args.manifest {
        let mut manifest = match RunManifest::load(path) {
            Ok(m) => m,
            Err(e) => return config_error(e),
        };
        if let Some(threads) = args.budget.threads {
            manifest.threads = threads;
        }
        manifest.created_unix_ms = now_unix_ms();
        let problem = manifest.build_problem()?;
        (manifest, problem)
    } else {
        let problem = match load_problem_args(&args.problem) {
            Ok(p) => p,
            Err(e) => return config_error(e),
        };
        let file = match load_file_config(&args.budget) {
            Ok(f) => f,
            Err(e) => return config_error(e),
        };
        let Some(algo) = resolve_algo(args.algo, &file) else {
            return config_error(anyhow!("--algo is required (or use --manifest/--config)"));
        };
        (build_manifest(&problem, algo, &args.budget, &file), problem)
    };
    if let Err(e) = validate_manifest(&manifest) {
        return config_error(e);
    }

    let artifacts = runner::execute(&manifest, &problem)?;
    artifacts::write_run(&args.out, &manifest, &artifacts)?;
    println!(
        "{}: {} iterations, {} subregions, {} archive points ({} feasible), {:?} in {} ms -> {}",
        manifest.algo,
        artifacts.history.len(),
        artifacts.boxes.len(),
        artifacts.archive.len(),
        artifacts.feasible_count,
        artifacts.termination,
        artifacts.total_wall_ms,
        args.out.display(),
    );
    Ok(ExitCode::SUCCESS)
}

fn csv_cell(gap: f64) -> String {
    if gap.is_finite() {
        gap.to_string()
    } else {
        String::new()
    }
}

fn cmd_compare(args: CompareArgs) -> anyhow::Result<ExitCode> {
    if args.algos.len() < 2 {
        return config_error(anyhow!("--algos needs at least two entries"));
    }
    let problem = match load_problem_args(&args.problem) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let file = match load_file_config(&args.budget) {
        Ok(f) => f,
        Err(e) => return config_error(e),
    };

    let mut bnv_curves = String::from("k,algo,bnv\n");
    let mut gap_curves = String::from("k,algo,gap\n");
    let mut summaries: Vec<(AlgoSpec, RunArtifacts)> = Vec::new();
    for algo in &args.algos {
        let manifest = build_manifest(&problem, *algo, &args.budget, &file);
        if let Err(e) = validate_manifest(&manifest) {
            return config_error(e);
        }
        let artifacts = runner::execute(&manifest, &problem)?;
        let run_dir = args.out.join(algo.to_string());
        artifacts::write_run(&run_dir, &manifest, &artifacts)?;
        for s in &artifacts.history {
            let _ = writeln!(bnv_curves, "{},{},{}", s.k, algo, s.bnv);
            let _ = writeln!(gap_curves, "{},{},{}", s.k, algo, csv_cell(s.gap));
        }
        summaries.push((*algo, artifacts));
    }
    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join("bnv_curves.csv"), bnv_curves)?;
    std::fs::write(args.out.join("gap_curves.csv"), gap_curves)?;

    println!(
        "{:<12} {:>6} {:>8} {:>8} {:>9} {:>9}",
        "algo", "iters", "bnv", "archive", "feasible", "wall_ms"
    );
    for (algo, artifacts) in &summaries {
        println!(
            "{:<12} {:>6} {:>8} {:>8} {:>9} {:>9}",
            algo.to_string(),
            artifacts.history.len(),
            artifacts.boxes.len(),
            artifacts.archive.len(),
            artifacts.feasible_count,
            artifacts.total_wall_ms,
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_list_problems(args: ListArgs) -> anyhow::Result<ExitCode> {
    #[derive(serde::Serialize)]
    struct Row {
        name: String,
        n: usize,
        m: usize,
        constraints: usize,
        scalable: bool,
    }
    let rows: Vec<Row> = builtin_names()
        .iter()
        .map(|name| {
            let p = builtin(name, None).expect("builtin exists");
            Row {
                name: p.name.clone(),
                n: p.n,
                m: p.m,
                constraints: p.constraints.len(),
                scalable: matches!(*name, "zdt2" | "t54"),
            }
        })
        .collect();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        println!(
            "{:<6} {:>3} {:>3} {:>12} {:>9}",
            "name", "n", "m", "constraints", "scalable"
        );
        for r in rows {
            println!(
                "{:<6} {:>3} {:>3} {:>12} {:>9}",
                r.name, r.n, r.m, r.constraints, r.scalable
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
