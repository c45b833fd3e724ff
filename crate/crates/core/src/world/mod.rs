//! Grid world model: maps, agents, tasks and problem instances.

mod dataset;
mod distance;
mod format;
mod movingai;

pub use dataset::{adapt_dataset, DatasetSpec};
pub use distance::{shortest_distances, DistanceField, DistanceTable};
pub use format::InstanceFile;
pub use movingai::{parse_map, parse_scenario, serialize_map, ScenarioEntry};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type AgentId = usize;
pub type TaskId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorldError {
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("scenario row {row}: {reason}")]
    Scenario { row: usize, reason: String },

    #[error("vertex {0} is outside the map")]
    OutOfBounds(Vertex),

    #[error("vertex {0} is blocked")]
    Blocked(Vertex),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("dataset adaptation failed: {0}")]
    Dataset(String),

    #[error("instance format: {0}")]
    Format(String),
}

/// A grid cell addressed by `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

impl Vertex {
    pub const fn new(row: usize, col: usize) -> Self {
        Vertex { row, col }
    }

    /// True when `other` is one of the four cardinal neighbours.
    pub fn is_adjacent(&self, other: &Vertex) -> bool {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col) == 1
    }

    pub fn manhattan(&self, other: &Vertex) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }
}

impl From<[usize; 2]> for Vertex {
    fn from([row, col]: [usize; 2]) -> Self {
        Vertex { row, col }
    }
}

impl From<Vertex> for [usize; 2] {
    fn from(v: Vertex) -> Self {
        [v.row, v.col]
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// 4-connected grid with static obstacles. Every move costs one timestep.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridMap {
    width: usize,
    height: usize,
    blocked: Vec<bool>,
}

impl GridMap {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        GridMap { width, height, blocked: vec![false; width * height] }
    }

    pub fn with_blocked<I: IntoIterator<Item = Vertex>>(
        width: usize,
        height: usize,
        blocked: I,
    ) -> Result<Self, WorldError> {
        let mut map = GridMap::new(width, height);
        for v in blocked {
            if !map.in_bounds(v) {
                return Err(WorldError::OutOfBounds(v));
            }
            map.set_blocked(v, true);
        }
        Ok(map)
    }

    /// Builds a map from rows of `.` (free) and `@` (blocked) characters.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, WorldError> {
        let height = rows.len();
        let width = rows.first().map(|r| r.as_ref().chars().count()).unwrap_or(0);
        if height == 0 || width == 0 {
            return Err(WorldError::Format("map has no cells".into()));
        }
        let mut map = GridMap::new(width, height);
        for (row, line) in rows.iter().enumerate() {
            let line = line.as_ref();
            if line.chars().count() != width {
                return Err(WorldError::Parse {
                    line: row + 1,
                    reason: format!("expected {width} cells, found {}", line.chars().count()),
                });
            }
            for (col, ch) in line.chars().enumerate() {
                match movingai::cell_kind(ch) {
                    Some(blocked) => map.set_blocked(Vertex::new(row, col), blocked),
                    None => {
                        return Err(WorldError::Parse {
                            line: row + 1,
                            reason: format!("unknown cell character {ch:?}"),
                        })
                    }
                }
            }
        }
        Ok(map)
    }

    pub fn to_rows(&self) -> Vec<String> {
        (0..self.height)
            .map(|r| {
                (0..self.width)
                    .map(|c| if self.is_blocked(Vertex::new(r, c)) { '@' } else { '.' })
                    .collect()
            })
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn in_bounds(&self, v: Vertex) -> bool {
        v.row < self.height && v.col < self.width
    }

    /// Out-of-bounds cells count as blocked.
    pub fn is_blocked(&self, v: Vertex) -> bool {
        !self.in_bounds(v) || self.blocked[self.index(v)]
    }

    pub fn is_passable(&self, v: Vertex) -> bool {
        !self.is_blocked(v)
    }

    pub(crate) fn set_blocked(&mut self, v: Vertex, blocked: bool) {
        let i = self.index(v);
        self.blocked[i] = blocked;
    }

    pub fn index(&self, v: Vertex) -> usize {
        v.row * self.width + v.col
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        Vertex::new(index / self.width, index % self.width)
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|b| **b).count()
    }

    pub fn passable_count(&self) -> usize {
        self.area() - self.blocked_count()
    }

    pub fn blocked_cells(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.area()).filter(|i| self.blocked[*i]).map(|i| self.vertex(i))
    }

    pub fn passable_cells(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.area()).filter(|i| !self.blocked[*i]).map(|i| self.vertex(i))
    }

    /// Passable cardinal neighbours of `v`.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let Vertex { row, col } = v;
        let candidates = [
            row.checked_sub(1).map(|r| Vertex::new(r, col)),
            Some(Vertex::new(row + 1, col)),
            col.checked_sub(1).map(|c| Vertex::new(row, c)),
            Some(Vertex::new(row, col + 1)),
        ];
        candidates.into_iter().flatten().filter(move |n| self.is_passable(*n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Every agent ends at its own destination.
    #[serde(rename = "CTS")]
    Cts,
    /// Multi-goal: no destinations, an agent finishes at its last task.
    #[serde(rename = "MG")]
    Mg,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cts => "CTS",
            Mode::Mg => "MG",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentSpec {
    pub id: AgentId,
    pub start: Vertex,
    pub destination: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaskSpec {
    pub id: TaskId,
    pub location: Vertex,
    /// Ids of the agents that must visit this task.
    pub assignees: Vec<AgentId>,
}

/// A validated problem instance. Agent ids run `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    map: GridMap,
    agents: Vec<AgentSpec>,
    tasks: Vec<TaskSpec>,
    mode: Mode,
}

impl Instance {
    pub fn new(
        map: GridMap,
        agents: Vec<AgentSpec>,
        mut tasks: Vec<TaskSpec>,
        mode: Mode,
    ) -> Result<Self, WorldError> {
        let bad = |msg: String| Err(WorldError::Instance(msg));
        let mut starts = HashSet::new();
        let mut dests = HashSet::new();
        for (i, agent) in agents.iter().enumerate() {
            if agent.id != i + 1 {
                return bad(format!("agent ids must be contiguous from 1, found {} at position {}", agent.id, i));
            }
            check_cell(&map, agent.start)?;
            if !starts.insert(agent.start) {
                return bad(format!("agent {} shares its start {} with another agent", agent.id, agent.start));
            }
            match (mode, agent.destination) {
                (Mode::Cts, None) => return bad(format!("agent {} has no destination in CTS mode", agent.id)),
                (_, Some(d)) => {
                    check_cell(&map, d)?;
                    if mode == Mode::Cts && !dests.insert(d) {
                        return bad(format!("agent {} shares its destination {} with another agent", agent.id, d));
                    }
                }
                (Mode::Mg, None) => {}
            }
        }
        let mut task_ids = HashSet::new();
        for task in &mut tasks {
            check_cell(&map, task.location)?;
            if !task_ids.insert(task.id) {
                return bad(format!("duplicate task id {}", task.id));
            }
            task.assignees.sort_unstable();
            task.assignees.dedup();
            if task.assignees.is_empty() {
                return bad(format!("task {} has no assignees", task.id));
            }
            if let Some(a) = task.assignees.iter().find(|a| **a == 0 || **a > agents.len()) {
                return bad(format!("task {} names unknown agent {}", task.id, a));
            }
        }
        Ok(Instance { map, agents, tasks, mode })
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn agent(&self, id: AgentId) -> &AgentSpec {
        &self.agents[id - 1]
    }

    pub fn tasks(&self) -> &[TaskSpec] {
        &self.tasks
    }

    pub fn task(&self, id: TaskId) -> Option<&TaskSpec> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    /// Tasks agent `id` must visit, in task order.
    pub fn tasks_of(&self, id: AgentId) -> impl Iterator<Item = &TaskSpec> + '_ {
        self.tasks.iter().filter(move |t| t.assignees.contains(&id))
    }

    /// Every vertex that can appear in a task sequence, deduplicated.
    pub fn key_vertices(&self) -> Vec<Vertex> {
        let mut keys: Vec<Vertex> = self
            .agents
            .iter()
            .flat_map(|a| std::iter::once(a.start).chain(a.destination))
            .chain(self.tasks.iter().map(|t| t.location))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }
}

fn check_cell(map: &GridMap, v: Vertex) -> Result<(), WorldError> {
    if !map.in_bounds(v) {
        Err(WorldError::OutOfBounds(v))
    } else if map.is_blocked(v) {
        Err(WorldError::Blocked(v))
    } else {
        Ok(())
    }
}
