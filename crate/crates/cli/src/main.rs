//! `taskmapf` command-line tool.
//!
//! Exit codes: 0 solved or ok, 1 usage or input error, 2 infeasible (or an
//! invalid plan for `validate`), 3 timeout.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use taskmapf::adaptations::{run_variant, AdaptationConfig, Variant};
use taskmapf::harness::{
    aggregate, brute_force_oracle, missing_files, read_runs_csv, render_svg, run_benchmark, validate_solution,
    write_runs_csv, write_summary_csv, BenchConfig, CellSummary, OracleVerdict, PlotMetric,
};
use taskmapf::search::{SolveResult, SolveStatus, SolverConfig};
use taskmapf::sequencing::{build_cost_matrix, JointKBestStream, MatrixMode, SequenceKBest, TargetKind, TaskSequence};
use taskmapf::world::{adapt_dataset, parse_map, parse_scenario, shortest_distances, DatasetSpec, Instance, Mode};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "taskmapf", version, about = "Task-sequencing multi-agent path finding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the plan as JSON
    Solve(SolveArgs),
    /// Run a benchmark sweep described by a TOML file
    Bench(BenchArgs),
    /// Check a plan against an instance
    Validate(ValidateArgs),
    /// Exact optimum of a tiny instance by joint-state search
    Oracle(OracleArgs),
    /// Print the cheapest task sequences in emission order
    Sequences(SequencesArgs),
    /// Draw a bar chart from a runs CSV
    Plot(PlotArgs),
    /// Build an instance file from a MovingAI map and scenario
    Adapt(AdaptArgs),
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Sub-optimality bound; `inf` builds a single tree
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega: f64,
    #[arg(long, default_value = "cts")]
    variant: Variant,
    /// Seconds
    #[arg(long)]
    time_limit: Option<f64>,
    /// Per-agent path cost cap
    #[arg(long)]
    horizon: Option<u32>,
    /// Share of the time limit given to phase A of variant c
    #[arg(long, default_value_t = AdaptationConfig::DEFAULT_C_SPLIT)]
    c_split: f64,
    /// Record the search trace in the output
    #[arg(long)]
    trace: bool,
    /// Write the plan here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    config: PathBuf,
    #[arg(long, default_value = "bench-out")]
    out_dir: PathBuf,
    /// Also render an SVG chart of this metric
    #[arg(long)]
    plot: Option<PlotMetric>,
}

#[derive(Args)]
struct ValidateArgs {
    instance: PathBuf,
    /// Plan JSON as written by `solve`
    solution: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 32)]
    horizon: u32,
}

#[derive(Args)]
struct SequencesArgs {
    instance: PathBuf,
    /// Single-agent sequences of this agent instead of joint ones
    #[arg(long)]
    agent: Option<usize>,
    #[arg(long, default_value_t = 5)]
    k: usize,
}

#[derive(Args)]
struct PlotArgs {
    runs: PathBuf,
    #[arg(long, default_value = "success")]
    metric: PlotMetric,
    /// Runtime charged to unsolved runs; defaults to the longest recorded runtime
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AdaptArgs {
    map: PathBuf,
    scenario: PathBuf,
    #[arg(long)]
    agents: usize,
    #[arg(long)]
    tasks: usize,
    #[arg(long, default_value = "cts")]
    mode: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    fanout_min: usize,
    #[arg(long, default_value_t = 3)]
    fanout_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Sequences(a) => cmd_sequences(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Adapt(a) => cmd_adapt(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Instance::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn status_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Solved => 0,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::Timeout => EXIT_TIMEOUT,
    }
}

fn cmd_solve(a: SolveArgs) -> Result<u8> {
    let instance = load_instance(&a.instance)?;
    let time_limit = match a.time_limit {
        Some(t) if !(t > 0.0 && t.is_finite()) => bail!("--time-limit must be a positive number of seconds"),
        t => t.map(Duration::from_secs_f64),
    };
    if !(a.c_split > 0.0 && a.c_split < 1.0) {
        bail!("--c-split must lie in (0, 1)");
    }
    let base = SolverConfig { omega: a.omega, time_limit, horizon: a.horizon, trace: a.trace, ..SolverConfig::default() };
    base.validate()?;
    let config = AdaptationConfig { variant: a.variant, base, c_split: a.c_split };
    let result = run_variant(&instance, &config)?;
    write_or_print(a.out.as_deref(), &result.to_json())?;
    eprintln!("{}", result.summary());
    Ok(status_code(result.status))
}

fn cmd_bench(a: BenchArgs) -> Result<u8> {
    let config = BenchConfig::from_toml(&read(&a.config)?)?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let missing = missing_files(&config, base);
    if !missing.is_empty() {
        eprintln!("missing files:");
        for m in &missing {
            eprintln!("  {}", m.display());
        }
        return Ok(EXIT_USAGE);
    }
    let report = run_benchmark(&config, base)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    write_runs_csv(&a.out_dir.join("runs.csv"), &report.records)?;
    write_summary_csv(&a.out_dir.join("summary.csv"), &report.summary)?;
    if let Some(metric) = a.plot {
        fs::write(a.out_dir.join("plot.svg"), render_svg(&report.summary, metric))?;
    }
    print_summary(&report.summary);
    info!("wrote {} runs to {}", report.records.len(), a.out_dir.display());
    Ok(0)
}

fn print_summary(summary: &[CellSummary]) {
    println!(
        "{:<20} {:>3} {:>3} {:<5} {:>7} {:>6} {:>8} {:>9} {:>6} {:>8}",
        "map", "N", "M", "var", "omega", "succ", "runtime", "sqr", "roots", "tsp"
    );
    for c in summary {
        let sqr = c.mean_sqr.map_or("-".to_string(), |s| format!("{s:.3}"));
        println!(
            "{:<20} {:>3} {:>3} {:<5} {:>7} {:>6.2} {:>8.3} {:>9} {:>6.1} {:>8.1}",
            c.map,
            c.n_agents,
            c.n_tasks,
            c.variant.as_str(),
            c.omega,
            c.success_rate,
            c.mean_runtime,
            sqr,
            c.mean_roots_generated,
            c.mean_tsp_calls
        );
    }
}

fn cmd_validate(a: ValidateArgs) -> Result<u8> {
    let instance = load_instance(&a.instance)?;
    let result = SolveResult::from_json(&read(&a.solution)?).with_context(|| format!("parsing {}", a.solution.display()))?;
    if !result.is_solved() {
        bail!("{} holds no plan (status {})", a.solution.display(), result.status.as_str());
    }
    let violations = validate_solution(&instance, &result.paths);
    if violations.is_empty() {
        println!("valid: flowtime {}", result.paths.iter().map(|p| p.cost).sum::<u32>());
        return Ok(0);
    }
    for v in &violations {
        println!("{v}");
    }
    println!("{} violation(s)", violations.len());
    Ok(EXIT_INFEASIBLE)
}

fn cmd_oracle(a: OracleArgs) -> Result<u8> {
    let instance = load_instance(&a.instance)?;
    match brute_force_oracle(&instance, a.horizon)? {
        OracleVerdict::Optimal(c) => {
            println!("optimal flowtime {c}");
            Ok(0)
        }
        OracleVerdict::InfeasibleWithinHorizon => {
            println!("infeasible within horizon {}", a.horizon);
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn describe(seq: &TaskSequence) -> String {
    seq.targets
        .iter()
        .map(|t| match t.kind {
            TargetKind::Start => format!("start{}", t.vertex),
            TargetKind::Task(id) => format!("t{id}{}", t.vertex),
            TargetKind::Destination => format!("dest{}", t.vertex),
        })
        .collect::<Vec<_>>()
        .join(" -> ")
}

fn cmd_sequences(a: SequencesArgs) -> Result<u8> {
    if a.k == 0 {
        bail!("--k must be at least 1");
    }
    let instance = load_instance(&a.instance)?;
    let mode = match instance.mode() {
        Mode::Cts => MatrixMode::FixedTerminal,
        Mode::Mg => MatrixMode::Open,
    };
    let mut printed = 0;
    match a.agent {
        Some(id) => {
            if id == 0 || id > instance.num_agents() {
                bail!("agent {id} does not exist (1..={})", instance.num_agents());
            }
            let distances = shortest_distances(instance.map(), &instance.key_vertices())?;
            let mut kbest = SequenceKBest::new(id, build_cost_matrix(&instance, id, &distances, mode)?);
            for rank in 1..=a.k {
                let Some(seq) = kbest.get(rank)? else { break };
                println!("{rank}\tcost {}\t{}", seq.cost, describe(seq));
                printed += 1;
            }
        }
        None => {
            let mut stream = JointKBestStream::for_instance(&instance, mode)?;
            for rank in 1..=a.k {
                let Some(joint) = stream.next()? else { break };
                let ranks: Vec<String> = joint.priority.0.iter().map(|r| r.to_string()).collect();
                println!("{rank}\tcost {}\tranks [{}]", joint.cost, ranks.join(","));
                for seq in &joint.sequences {
                    println!("\tagent {}: {}", seq.agent, describe(seq));
                }
                printed += 1;
            }
        }
    }
    if printed < a.k {
        println!("exhausted after {printed} sequence(s)");
    }
    Ok(0)
}

fn cmd_plot(a: PlotArgs) -> Result<u8> {
    let records = read_runs_csv(&a.runs)?;
    let limit = a.time_limit.unwrap_or_else(|| records.iter().map(|r| r.runtime).fold(0.0, f64::max));
    let summary = aggregate(&records, limit);
    fs::write(&a.out, render_svg(&summary, a.metric)).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(0)
}

fn cmd_adapt(a: AdaptArgs) -> Result<u8> {
    let map = parse_map(&read(&a.map)?).with_context(|| format!("parsing {}", a.map.display()))?;
    let entries = parse_scenario(&read(&a.scenario)?).with_context(|| format!("parsing {}", a.scenario.display()))?;
    let mode = match a.mode.to_ascii_lowercase().as_str() {
        "cts" => Mode::Cts,
        "mg" => Mode::Mg,
        other => bail!("unknown mode '{other}' (cts, mg)"),
    };
    let spec = DatasetSpec { n_agents: a.agents, n_tasks: a.tasks, fanout: (a.fanout_min, a.fanout_max), seed: a.seed, mode };
    let instance = adapt_dataset(&map, &entries, spec)?;
    write_or_print(a.out.as_deref(), &instance.to_json())?;
    Ok(0)
}
