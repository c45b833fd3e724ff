//! Conflict-based search over a forest of constraint trees.
//!
//! Each tree is rooted at one joint task sequence from the K-best stream.
//! Nodes from all trees share a single OPEN list ordered by cost. Before a
//! popped node is checked for conflicts, the forest may grow: whenever the
//! node costs more than `1 + omega` times the newest sequence, the next joint
//! sequence gets its own root.

mod conflict;
mod forest;

pub use conflict::{all_conflicts, detect_first_conflict, Conflict, ConflictKind};
pub use forest::{solve, solve_with_stream, CTNode, ConstraintChain, Forest};

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adaptations::{Phase, Variant};
use crate::pathing::{PathingError, TimedPath};
use crate::sequencing::SequencingError;
use crate::world::AgentId;
use crate::Cost;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Sequencing(#[from] SequencingError),

    #[error(transparent)]
    Pathing(#[from] PathingError),
}

/// Order among OPEN nodes of equal cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Older trees first, then older nodes.
    #[default]
    TreeThenNode,
    /// Creation order only.
    NodeOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Sub-optimality bound; `f64::INFINITY` keeps a single tree.
    pub omega: f64,
    pub time_limit: Option<Duration>,
    pub tie_break: TieBreak,
    /// Per-agent cap on path cost. Bounds the search on unsolvable instances.
    pub horizon: Option<Cost>,
    /// Record a [`TraceEvent`] log in the result.
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { omega: 0.0, time_limit: None, tie_break: TieBreak::default(), horizon: None, trace: false }
    }
}

impl SolverConfig {
    pub fn with_omega(omega: f64) -> Self {
        SolverConfig { omega, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.omega.is_nan() || self.omega < 0.0 {
            return Err(SolveError::Config(format!("omega must be non-negative, got {}", self.omega)));
        }
        Ok(())
    }

    pub fn single_tree(&self) -> bool {
        self.omega.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Solved,
    Infeasible,
    Timeout,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Solved => "solved",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub roots_generated: u64,
    pub tsp_calls: u64,
    pub hl_expansions: u64,
    pub ll_calls: u64,
    /// Wall-clock seconds.
    pub runtime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum TraceEvent {
    /// A root for tree `tree` (joint sequence cost `sequence_cost`) was built.
    Root { tree: usize, node: u64, sequence_cost: Cost, g: Option<Cost> },
    /// The new root replaced the popped node, which went back to OPEN.
    SwapRoot { returned: u64, reinserted: u64 },
    /// Conflict detection ran on a node.
    Expand { node: u64, tree: usize, g: Cost },
    Split { node: u64, conflict: Conflict },
    Goal { node: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// One path per agent, ordered by agent id; empty unless solved.
    pub paths: Vec<TimedPath>,
    pub flowtime: Option<Cost>,
    /// Cost of the cheapest joint task sequence, a lower bound on flowtime.
    pub lower_bound: Option<Cost>,
    /// Joint sequence rank that produced the solution.
    pub tree: Option<usize>,
    pub stats: SolveStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEvent>,
}

impl SolveResult {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    pub fn path(&self, agent: AgentId) -> Option<&TimedPath> {
        self.paths.iter().find(|p| p.agent == agent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// `g` values of the nodes conflict detection ran on, in order.
    pub fn expansion_costs(&self) -> Vec<Cost> {
        self.trace
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Expand { g, .. } => Some(*g),
                _ => None,
            })
            .collect()
    }

    pub fn summary(&self) -> String {
        let flow = self.flowtime.map_or("-".to_string(), |f| f.to_string());
        format!(
            "status={} flowtime={} runtime={:.3}s roots={} tsp_calls={}",
            self.status.as_str(),
            flow,
            self.stats.runtime,
            self.stats.roots_generated,
            self.stats.tsp_calls
        )
    }
}
