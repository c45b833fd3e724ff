use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_sqr, validate_solution, HarnessError};
use crate::adaptations::{run_variant, AdaptationConfig, Phase, Variant};
use crate::search::{SolveStatus, SolverConfig};
use crate::sequencing::{JointKBestStream, MatrixMode, SequencingError};
use crate::world::{adapt_dataset, parse_map, parse_scenario, DatasetSpec, GridMap, Instance, Mode, ScenarioEntry};
use crate::Cost;

/// One map with the scenario files drawn from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub map: PathBuf,
    pub scenarios: Vec<PathBuf>,
}

/// Benchmark sweep, read from TOML. Relative paths resolve against the
/// directory of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub suites: Vec<Suite>,
    pub n_agents: Vec<usize>,
    pub n_tasks: Vec<usize>,
    #[serde(default = "default_fanout")]
    pub fanout: (usize, usize),
    pub omegas: Vec<f64>,
    pub variants: Vec<Variant>,
    /// Seconds per run.
    pub time_limit: f64,
    pub seed: u64,
    /// Mode of instances for the `cts` and `scbs` variants; a, b and c always use MG.
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub horizon: Option<Cost>,
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_fanout() -> (usize, usize) {
    (1, 3)
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let config: BenchConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.suites.is_empty() || self.suites.iter().any(|s| s.scenarios.is_empty()) {
            return bad("every suite needs a map and at least one scenario");
        }
        if self.n_agents.is_empty() || self.n_tasks.is_empty() || self.omegas.is_empty() || self.variants.is_empty() {
            return bad("n_agents, n_tasks, omegas and variants must be non-empty");
        }
        if self.omegas.iter().any(|w| w.is_nan() || *w < 0.0) {
            return bad("omegas must be non-negative");
        }
        if !(self.time_limit > 0.0 && self.time_limit.is_finite()) {
            return bad("time_limit must be a positive number of seconds");
        }
        if self.fanout.0 == 0 || self.fanout.0 > self.fanout.1 {
            return bad("fanout must be a range [lo, hi] with 1 <= lo <= hi");
        }
        Ok(())
    }

    fn resolve(base: &Path, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    }
}

/// Every map or scenario file the config names that does not exist.
pub fn missing_files(config: &BenchConfig, base: &Path) -> Vec<PathBuf> {
    config
        .suites
        .iter()
        .flat_map(|s| std::iter::once(&s.map).chain(&s.scenarios))
        .map(|p| BenchConfig::resolve(base, p))
        .filter(|p| !p.is_file())
        .collect()
}

/// Outcome of one solver run. `status` is `solved`, `infeasible`, `timeout` or `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub map: String,
    pub scenario: String,
    pub scenario_index: usize,
    pub n_agents: usize,
    pub n_tasks: usize,
    pub seed: u64,
    pub variant: Variant,
    pub omega: f64,
    pub status: String,
    pub phase: Option<Phase>,
    pub runtime: f64,
    pub flowtime: Option<Cost>,
    pub cost_lb: Option<Cost>,
    pub sqr: Option<f64>,
    pub roots_generated: u64,
    pub tsp_calls: u64,
    pub hl_expansions: u64,
    pub violations: usize,
    pub error: String,
}

/// Aggregates over the scenarios of one (map, N, M, variant, omega) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub map: String,
    pub n_agents: usize,
    pub n_tasks: usize,
    pub variant: Variant,
    pub omega: f64,
    pub runs: usize,
    pub solved: usize,
    pub success_rate: f64,
    /// Unsolved runs count as the full time limit.
    pub mean_runtime: f64,
    pub mean_sqr: Option<f64>,
    pub mean_roots_generated: f64,
    pub mean_tsp_calls: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<RunRecord>,
    pub summary: Vec<CellSummary>,
}

impl BenchReport {
    pub fn any_errors(&self) -> bool {
        self.records.iter().any(|r| r.status == "error")
    }
}

/// Seed for one benchmark cell, derived by FNV-1a hashing so cells are
/// reproducible yet independent.
pub fn cell_seed(seed: u64, map: &str, scenario_index: usize, n_agents: usize, n_tasks: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(&seed.to_le_bytes());
    feed(map.as_bytes());
    feed(&(scenario_index as u64).to_le_bytes());
    feed(&(n_agents as u64).to_le_bytes());
    feed(&(n_tasks as u64).to_le_bytes());
    h
}

/// Cost of the cheapest joint task sequence: open terminals in MG mode, fixed ones in CTS mode.
pub fn sequence_lower_bound(instance: &Instance) -> Result<Option<Cost>, SequencingError> {
    let mode = match instance.mode() {
        Mode::Cts => MatrixMode::FixedTerminal,
        Mode::Mg => MatrixMode::Open,
    };
    let mut stream = JointKBestStream::for_instance(instance, mode)?;
    Ok(stream.next()?.map(|j| j.cost))
}

struct Job {
    map_name: String,
    scenario: String,
    scenario_index: usize,
    map: Arc<Result<GridMap, String>>,
    entries: Arc<Result<Vec<ScenarioEntry>, String>>,
    n_agents: usize,
    n_tasks: usize,
    seed: u64,
    variant: Variant,
    omega: f64,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string())
}

/// Runs every (scenario, N, M, variant, omega) combination and aggregates.
/// Records come back in sweep order regardless of how the pool scheduled them.
pub fn run_benchmark(config: &BenchConfig, base: &Path) -> Result<BenchReport, HarnessError> {
    config.validate()?;
    let mut jobs = Vec::new();
    for suite in &config.suites {
        let map_path = BenchConfig::resolve(base, &suite.map);
        let map_name = file_name(&suite.map);
        let map = Arc::new(read(&map_path).and_then(|t| parse_map(&t).map_err(|e| e.to_string())));
        for (scenario_index, scen) in suite.scenarios.iter().enumerate() {
            let scen_path = BenchConfig::resolve(base, scen);
            let entries = Arc::new(read(&scen_path).and_then(|t| parse_scenario(&t).map_err(|e| e.to_string())));
            for &n_agents in &config.n_agents {
                for &n_tasks in &config.n_tasks {
                    let seed = cell_seed(config.seed, &map_name, scenario_index, n_agents, n_tasks);
                    for &variant in &config.variants {
                        for &omega in &config.omegas {
                            jobs.push(Job {
                                map_name: map_name.clone(),
                                scenario: file_name(scen),
                                scenario_index,
                                map: Arc::clone(&map),
                                entries: Arc::clone(&entries),
                                n_agents,
                                n_tasks,
                                seed,
                                variant,
                                omega,
                            });
                        }
                    }
                }
            }
        }
    }
    info!("benchmark: {} runs", jobs.len());
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| HarnessError::Config(e.to_string()))?;
    let records: Vec<RunRecord> = pool.install(|| jobs.par_iter().map(|job| run_job(config, job)).collect());
    let summary = aggregate(&records, config.time_limit);
    Ok(BenchReport { records, summary })
}

fn run_job(config: &BenchConfig, job: &Job) -> RunRecord {
    let mut record = RunRecord {
        instance: format!("{}/{}#{}/n{}/m{}", job.map_name, job.scenario, job.scenario_index, job.n_agents, job.n_tasks),
        map: job.map_name.clone(),
        scenario: job.scenario.clone(),
        scenario_index: job.scenario_index,
        n_agents: job.n_agents,
        n_tasks: job.n_tasks,
        seed: job.seed,
        variant: job.variant,
        omega: job.omega,
        status: "error".into(),
        phase: None,
        runtime: 0.0,
        flowtime: None,
        cost_lb: None,
        sqr: None,
        roots_generated: 0,
        tsp_calls: 0,
        hl_expansions: 0,
        violations: 0,
        error: String::new(),
    };
    let (map, entries) = match (job.map.as_ref(), job.entries.as_ref()) {
        (Ok(m), Ok(e)) => (m, e),
        (Err(e), _) | (_, Err(e)) => {
            record.error = e.clone();
            return record;
        }
    };
    let mode = match job.variant {
        Variant::A | Variant::B | Variant::C => Mode::Mg,
        Variant::Cts | Variant::Scbs => config.mode.unwrap_or(Mode::Cts),
    };
    // a task cannot have more assignees than there are agents
    let fanout = (config.fanout.0.min(job.n_agents), config.fanout.1.min(job.n_agents));
    let spec = DatasetSpec { n_agents: job.n_agents, n_tasks: job.n_tasks, fanout, seed: job.seed, mode };
    let instance = match adapt_dataset(map, entries, spec) {
        Ok(i) => i,
        Err(e) => {
            record.error = e.to_string();
            return record;
        }
    };
    let base = SolverConfig {
        omega: job.omega,
        time_limit: Some(Duration::from_secs_f64(config.time_limit)),
        horizon: config.horizon,
        ..SolverConfig::default()
    };
    let result = match run_variant(&instance, &AdaptationConfig::new(job.variant, base)) {
        Ok(r) => r,
        Err(e) => {
            warn!("{}: {e}", record.instance);
            record.error = e.to_string();
            return record;
        }
    };
    record.status = result.status.as_str().into();
    record.phase = result.phase;
    record.runtime = result.stats.runtime;
    record.roots_generated = result.stats.roots_generated;
    record.tsp_calls = result.stats.tsp_calls;
    record.hl_expansions = result.stats.hl_expansions;
    record.cost_lb = sequence_lower_bound(&instance).ok().flatten();
    if result.status == SolveStatus::Solved {
        record.flowtime = result.flowtime;
        record.violations = validate_solution(&instance, &result.paths).len();
        if let (Some(lb), Some(sol)) = (record.cost_lb, result.flowtime) {
            match compute_sqr(lb, sol) {
                Ok(s) => record.sqr = Some(s),
                Err(e) => record.error = e.to_string(),
            }
        }
    }
    record
}

/// Per-cell success rate, mean runtime (failures charged the full limit),
/// mean SQR over solved runs and mean counters.
pub fn aggregate(records: &[RunRecord], time_limit: f64) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(String, usize, usize, Variant, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((r.map.clone(), r.n_agents, r.n_tasks, r.variant, r.omega.to_bits())).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((map, n_agents, n_tasks, variant, omega), runs)| {
            let solved: Vec<&&RunRecord> = runs.iter().filter(|r| r.status == "solved").collect();
            let n = runs.len() as f64;
            let sqrs: Vec<f64> = solved.iter().filter_map(|r| r.sqr).collect();
            CellSummary {
                map,
                n_agents,
                n_tasks,
                variant,
                omega: f64::from_bits(omega),
                runs: runs.len(),
                solved: solved.len(),
                success_rate: solved.len() as f64 / n,
                mean_runtime: runs.iter().map(|r| if r.status == "solved" { r.runtime } else { time_limit }).sum::<f64>() / n,
                mean_sqr: (!sqrs.is_empty()).then(|| sqrs.iter().sum::<f64>() / sqrs.len() as f64),
                mean_roots_generated: runs.iter().map(|r| r.roots_generated as f64).sum::<f64>() / n,
                mean_tsp_calls: runs.iter().map(|r| r.tsp_calls as f64).sum::<f64>() / n,
            }
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    Ok(())
}

pub fn write_runs_csv(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    write_csv(path, records)
}

pub fn write_summary_csv(path: &Path, summary: &[CellSummary]) -> Result<(), HarnessError> {
    write_csv(path, summary)
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(status: &str, runtime: f64, sqr: Option<f64>) -> RunRecord {
        RunRecord {
            instance: "x".into(),
            map: "m".into(),
            scenario: "s".into(),
            scenario_index: 0,
            n_agents: 2,
            n_tasks: 2,
            seed: 1,
            variant: Variant::Cts,
            omega: 0.0,
            status: status.into(),
            phase: None,
            runtime,
            flowtime: None,
            cost_lb: None,
            sqr,
            roots_generated: 1,
            tsp_calls: 2,
            hl_expansions: 3,
            violations: 0,
            error: String::new(),
        }
    }

    #[test]
    fn success_rate_counts_solved_runs() {
        let mut runs: Vec<RunRecord> = (0..7).map(|_| record("solved", 1.0, Some(1.0))).collect();
        runs.extend((0..3).map(|_| record("timeout", 9.0, None)));
        let s = aggregate(&runs, 10.0);
        assert_eq!(s.len(), 1);
        assert!((s[0].success_rate - 0.7).abs() < 1e-12);
        assert!((s[0].mean_runtime - (7.0 + 30.0) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn all_timeouts_average_to_the_limit() {
        let runs: Vec<RunRecord> = (0..4).map(|_| record("timeout", 2.5, None)).collect();
        let s = aggregate(&runs, 3.0);
        assert_eq!(s[0].mean_runtime, 3.0);
        assert_eq!(s[0].mean_sqr, None);
    }

    #[test]
    fn cell_seeds_differ_per_cell() {
        assert_eq!(cell_seed(1, "a.map", 0, 5, 10), cell_seed(1, "a.map", 0, 5, 10));
        assert_ne!(cell_seed(1, "a.map", 0, 5, 10), cell_seed(1, "a.map", 1, 5, 10));
        assert_ne!(cell_seed(1, "a.map", 0, 5, 10), cell_seed(2, "a.map", 0, 5, 10));
    }

    #[test]
    fn config_parses_and_validates() {
        let text = r#"
            seed = 7
            time_limit = 1.5
            n_agents = [2]
            n_tasks = [3]
            omegas = [0.0, 0.01, inf]
            variants = ["cts", "scbs"]
            [[suites]]
            map = "empty.map"
            scenarios = ["empty.scen"]
        "#;
        let c = BenchConfig::from_toml(text).unwrap();
        assert_eq!(c.fanout, (1, 3));
        assert!(c.omegas[2].is_infinite());
        assert!(BenchConfig::from_toml(&text.replace("[0.0, 0.01, inf]", "[-1.0]")).is_err());
        assert!(BenchConfig::from_toml(&text.replace("seed = 7", "seed = 7\nbogus = 1")).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        let mut r = record("solved", 0.5, Some(0.9));
        r.flowtime = Some(10);
        r.phase = Some(Phase::B);
        write_runs_csv(&path, &[r.clone()]).unwrap();
        assert_eq!(read_runs_csv(&path).unwrap(), vec![r]);
    }
}
