//! Multi-goal variants (A, B, C) and the sequential single-tree baseline,
//! all thin wrappers around [`solve`].
//!
//! - A sequences every agent with an open terminal, so it parks on whichever
//!   task it visits last.
//! - B first fixes a destination per agent (the last task of its cheapest open
//!   sequence, kept distinct across agents) and then solves a CTS instance.
//! - C runs A on part of the time budget and falls back to B.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::search::{solve, SolveError, SolveResult, SolveStatus, SolverConfig};
use crate::sequencing::{
    build_cost_matrix, solve_rtsp, Edge, EdgeConstraintSet, MatrixMode, NodeLabel, SequencingError,
};
use crate::world::{shortest_distances, AgentId, AgentSpec, Instance, Mode, TaskId, Vertex, WorldError};
use crate::Cost;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdaptationError {
    #[error("variant {0} needs an MG instance")]
    WrongMode(Variant),

    #[error("agent {0} has no assigned task to use as its destination")]
    NoTasks(AgentId),

    #[error("agent {0} has no task left that another agent has not already taken as destination")]
    NoDistinctDestination(AgentId),

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Sequencing(#[from] SequencingError),

    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Plain forest search on the instance as given.
    Cts,
    A,
    B,
    C,
    Scbs,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Cts => "cts",
            Variant::A => "a",
            Variant::B => "b",
            Variant::C => "c",
            Variant::Scbs => "scbs",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cts" | "cts-cbs" => Ok(Variant::Cts),
            "a" | "cts-cbs-a" => Ok(Variant::A),
            "b" | "cts-cbs-b" => Ok(Variant::B),
            "c" | "cts-cbs-c" => Ok(Variant::C),
            "scbs" | "s-cbs" => Ok(Variant::Scbs),
            other => Err(format!("unknown variant '{other}' (expected cts, a, b, c or scbs)")),
        }
    }
}

/// Which half of variant C produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationConfig {
    pub variant: Variant,
    pub base: SolverConfig,
    /// Share of the time limit given to phase A of variant C.
    pub c_split: f64,
}

impl AdaptationConfig {
    pub const DEFAULT_C_SPLIT: f64 = 2.0 / 3.0;

    pub fn new(variant: Variant, base: SolverConfig) -> Self {
        AdaptationConfig { variant, base, c_split: Self::DEFAULT_C_SPLIT }
    }
}

/// Dispatches on `config.variant`.
pub fn run_variant(instance: &Instance, config: &AdaptationConfig) -> Result<SolveResult, AdaptationError> {
    match config.variant {
        Variant::Cts => {
            let mut r = solve(instance, &config.base)?;
            r.variant = Some(Variant::Cts);
            Ok(r)
        }
        Variant::A => solve_mg_a(instance, &config.base),
        Variant::B => solve_mg_b(instance, &config.base),
        Variant::C => solve_mg_c(instance, &config.base, config.c_split),
        Variant::Scbs => solve_sequential(instance, &config.base),
    }
}

fn require_mg(instance: &Instance, variant: Variant) -> Result<(), AdaptationError> {
    if instance.mode() != Mode::Mg {
        return Err(AdaptationError::WrongMode(variant));
    }
    Ok(())
}

/// Variant A: open-terminal sequencing, so each agent ends on its last task.
pub fn solve_mg_a(instance: &Instance, config: &SolverConfig) -> Result<SolveResult, AdaptationError> {
    require_mg(instance, Variant::A)?;
    let mut r = solve(instance, config)?;
    r.variant = Some(Variant::A);
    Ok(r)
}

/// Variant B: fix a destination per agent, then solve the resulting CTS instance.
pub fn solve_mg_b(instance: &Instance, config: &SolverConfig) -> Result<SolveResult, AdaptationError> {
    require_mg(instance, Variant::B)?;
    let started = Instant::now();
    let fixed = with_chosen_destinations(instance)?;
    let mut r = solve(&fixed, config)?;
    r.stats.runtime = started.elapsed().as_secs_f64();
    r.variant = Some(Variant::B);
    Ok(r)
}

/// Variant C: A with `c_split` of the time limit, then B with what is left.
pub fn solve_mg_c(instance: &Instance, config: &SolverConfig, c_split: f64) -> Result<SolveResult, AdaptationError> {
    require_mg(instance, Variant::C)?;
    assert!(c_split > 0.0 && c_split < 1.0, "c_split must lie in (0, 1)");
    let started = Instant::now();
    let phase_a = SolverConfig { time_limit: config.time_limit.map(|l| l.mul_f64(c_split)), ..config.clone() };
    let mut first = solve(instance, &phase_a)?;
    first.variant = Some(Variant::C);
    first.phase = Some(Phase::A);
    if first.status != SolveStatus::Timeout {
        return Ok(first);
    }
    let remaining = config.time_limit.map(|l| l.saturating_sub(started.elapsed()));
    info!("phase A timed out after {:.3}s, switching to B", first.stats.runtime);
    let phase_b = SolverConfig { time_limit: remaining.map(|r| r.max(Duration::from_millis(1))), ..config.clone() };
    let mut second = match solve_mg_b(instance, &phase_b) {
        Ok(r) => r,
        Err(e) => {
            warn!("phase B could not run: {e}");
            first.stats.runtime = started.elapsed().as_secs_f64();
            return Ok(first);
        }
    };
    second.variant = Some(Variant::C);
    second.phase = Some(Phase::B);
    second.stats.roots_generated += first.stats.roots_generated;
    second.stats.tsp_calls += first.stats.tsp_calls;
    second.stats.hl_expansions += first.stats.hl_expansions;
    second.stats.ll_calls += first.stats.ll_calls;
    second.stats.runtime = started.elapsed().as_secs_f64();
    Ok(second)
}

/// The sequential baseline: one tree on the cheapest joint sequence.
pub fn solve_sequential(instance: &Instance, config: &SolverConfig) -> Result<SolveResult, AdaptationError> {
    let single = SolverConfig { omega: f64::INFINITY, ..config.clone() };
    let mut r = solve(instance, &single)?;
    r.variant = Some(Variant::Scbs);
    Ok(r)
}

/// Picks each agent's destination among its task cells.
///
/// Candidates are ranked by the cheapest open sequence that ends on them,
/// with the final task of the overall cheapest sequence winning ties, then
/// the smaller task id. Agents choose in id order and skip cells already
/// taken by an earlier agent.
pub fn choose_destinations(instance: &Instance) -> Result<Vec<(AgentId, TaskId, Vertex)>, AdaptationError> {
    let distances = shortest_distances(instance.map(), &instance.key_vertices())?;
    let mut taken: Vec<Vertex> = Vec::new();
    let mut out = Vec::new();
    for agent in instance.agents() {
        let matrix = build_cost_matrix(instance, agent.id, &distances, MatrixMode::Open)?;
        let n = matrix.len();
        let best_final = solve_rtsp(&matrix, &EdgeConstraintSet::new())?.and_then(|s| {
            let last_real = s.order[s.order.len() - 2];
            match matrix.labels()[last_real] {
                NodeLabel::Task { id, .. } => Some(id),
                _ => None,
            }
        });
        let mut candidates: Vec<(Cost, bool, TaskId, Vertex)> = Vec::new();
        for (i, label) in matrix.labels().iter().enumerate() {
            let NodeLabel::Task { id, vertex } = *label else { continue };
            let forced = EdgeConstraintSet::new().include(Edge::new(i, n - 1));
            if let Some(sol) = solve_rtsp(&matrix, &forced)? {
                candidates.push((sol.cost, Some(id) != best_final, id, vertex));
            }
        }
        if matrix.labels().iter().all(|l| !matches!(l, NodeLabel::Task { .. })) {
            return Err(AdaptationError::NoTasks(agent.id));
        }
        candidates.sort();
        let Some(&(_, _, task, vertex)) = candidates.iter().find(|c| !taken.contains(&c.3)) else {
            return Err(AdaptationError::NoDistinctDestination(agent.id));
        };
        taken.push(vertex);
        out.push((agent.id, task, vertex));
    }
    Ok(out)
}

/// The CTS instance variant B solves: same tasks, destinations from [`choose_destinations`].
pub fn with_chosen_destinations(instance: &Instance) -> Result<Instance, AdaptationError> {
    let chosen = choose_destinations(instance)?;
    let agents = instance
        .agents()
        .iter()
        .zip(&chosen)
        .map(|(a, &(_, _, dest))| AgentSpec { id: a.id, start: a.start, destination: Some(dest) })
        .collect();
    Ok(Instance::new(instance.map().clone(), agents, instance.tasks().to_vec(), Mode::Cts)?)
}
