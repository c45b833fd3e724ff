use serde::{Deserialize, Serialize};

use crate::sequencing::Target;
use crate::world::{AgentId, Vertex};
use crate::{Cost, Time};

/// The moment a sequence target counted as visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Visit {
    pub target: Target,
    pub time: Time,
}

/// One agent's vertex at every timestep from 0 until it settles on its final cell.
///
/// Past the end of `vertices` the agent stays on the last vertex forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimedPath {
    pub agent: AgentId,
    pub vertices: Vec<Vertex>,
    /// One entry per target after the start, in sequence order.
    pub visits: Vec<Visit>,
    pub cost: Cost,
}

impl TimedPath {
    pub fn new(agent: AgentId, vertices: Vec<Vertex>, visits: Vec<Visit>) -> Self {
        let mut path = TimedPath { agent, vertices, visits, cost: 0 };
        path.cost = path_cost(&path);
        path
    }

    /// Position at `t`, padding with the final vertex.
    pub fn at(&self, t: Time) -> Vertex {
        let t = t as usize;
        *self.vertices.get(t).unwrap_or_else(|| self.vertices.last().expect("paths are never empty"))
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn final_vertex(&self) -> Vertex {
        *self.vertices.last().expect("paths are never empty")
    }

    /// Last timestep stored explicitly.
    pub fn horizon(&self) -> Time {
        (self.vertices.len() - 1) as Time
    }
}

impl AsRef<TimedPath> for TimedPath {
    fn as_ref(&self) -> &TimedPath {
        self
    }
}

/// Arrival time at the final vertex after which the agent never moves again.
pub fn path_cost(path: &TimedPath) -> Cost {
    let last = path.final_vertex();
    let settled = path.vertices.iter().rev().take_while(|&&v| v == last).count();
    (path.vertices.len() - settled) as Cost
}
