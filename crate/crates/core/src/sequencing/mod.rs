//! Task sequencing: exact restricted TSP and K-best single-agent and joint
//! task sequences.
//!
//! Each agent's sequencing problem is a Hamiltonian path over a small cost
//! matrix (start, assigned tasks, terminal). [`SequenceKBest`] enumerates an
//! agent's sequences in non-decreasing cost order by repeatedly partitioning
//! the solution space on the edges of the last returned path.
//! [`JointKBestStream`] combines those per-agent lists into joint sequences,
//! again in non-decreasing order of total cost.

mod joint;
mod kbest;
mod matrix;
mod rtsp;

pub use joint::{sequence_cost, JointKBestStream, JointSequence, PriorityVector};
pub use kbest::SequenceKBest;
pub use matrix::{build_cost_matrix, CostMatrix, MatrixMode, NodeLabel};
pub use rtsp::{solve_rtsp, Edge, EdgeConstraintSet, RtspSolution, MAX_FREE_NODES};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{AgentId, TaskId, Vertex, WorldError};
use crate::Cost;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequencingError {
    #[error("invalid edge constraints: {0}")]
    InvalidConstraints(String),

    #[error("malformed cost matrix: {0}")]
    MalformedMatrix(String),

    #[error("agent {0} has no destination; fixed-terminal sequencing needs one")]
    MissingDestination(AgentId),

    #[error("{0} free nodes after contraction exceeds the exact solver limit of {MAX_FREE_NODES}")]
    TooManyNodes(usize),

    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetKind {
    Start,
    Task(TaskId),
    Destination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Target {
    pub vertex: Vertex,
    pub kind: TargetKind,
}

/// An ordered visiting plan for one agent, starting at its start cell.
///
/// `cost` ignores other agents: it is the sum of shortest distances between
/// consecutive targets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaskSequence {
    pub agent: AgentId,
    pub targets: Vec<Target>,
    pub cost: Cost,
    /// Matrix node order the sequence was decoded from (includes a virtual terminal in open mode).
    pub(crate) nodes: Vec<usize>,
}

impl TaskSequence {
    pub fn start(&self) -> Vertex {
        self.targets[0].vertex
    }

    /// Targets after the start, in visiting order.
    pub fn goals(&self) -> &[Target] {
        &self.targets[1..]
    }

    /// Where the agent ends up: the last target (the start when there is nothing to visit).
    pub fn final_vertex(&self) -> Vertex {
        self.targets.last().map(|t| t.vertex).unwrap_or_else(|| self.start())
    }

    pub fn task_order(&self) -> impl Iterator<Item = TaskId> + '_ {
        self.targets.iter().filter_map(|t| match t.kind {
            TargetKind::Task(id) => Some(id),
            _ => None,
        })
    }

    pub fn matrix_nodes(&self) -> &[usize] {
        &self.nodes
    }
}
