use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pathing::TimedPath;
use crate::search::{all_conflicts, ConflictKind};
use crate::sequencing::TargetKind;
use crate::world::{AgentId, Instance, Mode, TaskId, Vertex};
use crate::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Boundary,
    TaskCompletion,
    TaskOrder,
    Behavior,
    StaticCollision,
    VertexConflict,
    EdgeConflict,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::Boundary => "boundary",
            ViolationKind::TaskCompletion => "task-completion",
            ViolationKind::TaskOrder => "task-order",
            ViolationKind::Behavior => "behavior",
            ViolationKind::StaticCollision => "static-collision",
            ViolationKind::VertexConflict => "vertex-conflict",
            ViolationKind::EdgeConflict => "edge-conflict",
        }
    }
}

/// One broken rule, pinned to the agents, cell, timestep and task involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub agents: Vec<AgentId>,
    pub vertex: Option<Vertex>,
    pub time: Option<Time>,
    pub task: Option<TaskId>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, agent: AgentId, detail: String) -> Self {
        Violation { kind, agents: vec![agent], vertex: None, time: None, task: None, detail }
    }

    fn at(mut self, vertex: Vertex, time: Time) -> Self {
        self.vertex = Some(vertex);
        self.time = Some(time);
        self
    }

    fn task(mut self, task: TaskId) -> Self {
        self.task = Some(task);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.detail)
    }
}

/// Checks a joint plan against every rule of the problem and reports all
/// violations found (an empty list means the plan is valid).
///
/// Task visits are read from each path's visit annotations: every assigned
/// task needs an annotation whose timestep finds the agent on the task cell,
/// and annotations must be in time order.
pub fn validate_solution(instance: &Instance, paths: &[TimedPath]) -> Vec<Violation> {
    let mut out = Vec::new();
    let by_agent: HashMap<AgentId, &TimedPath> = paths.iter().map(|p| (p.agent, p)).collect();
    let map = instance.map();

    for agent in instance.agents() {
        let id = agent.id;
        let Some(path) = by_agent.get(&id).copied() else {
            out.push(Violation::new(ViolationKind::Boundary, id, format!("agent {id} has no path")));
            continue;
        };
        if path.vertices.is_empty() {
            out.push(Violation::new(ViolationKind::Boundary, id, format!("agent {id} has an empty path")));
            continue;
        }

        if path.start() != agent.start {
            out.push(
                Violation::new(ViolationKind::Boundary, id, format!("agent {id} starts at {} instead of {}", path.start(), agent.start))
                    .at(path.start(), 0),
            );
        }
        let end = path.final_vertex();
        let end_time = path.horizon();
        match (instance.mode(), agent.destination) {
            (Mode::Cts, Some(dest)) if end != dest => out.push(
                Violation::new(ViolationKind::Boundary, id, format!("agent {id} ends at {end} instead of {dest}")).at(end, end_time),
            ),
            (Mode::Mg, _) => {
                let cells: Vec<Vertex> = instance.tasks_of(id).map(|t| t.location).collect();
                let ok = if cells.is_empty() { end == agent.start } else { cells.contains(&end) };
                if !ok {
                    out.push(
                        Violation::new(ViolationKind::Boundary, id, format!("agent {id} ends at {end}, which is none of its task cells"))
                            .at(end, end_time),
                    );
                }
            }
            _ => {}
        }

        for (t, v) in path.vertices.iter().enumerate() {
            if !map.is_passable(*v) {
                out.push(
                    Violation::new(ViolationKind::StaticCollision, id, format!("agent {id} is on blocked cell {v} at t={t}"))
                        .at(*v, t as Time),
                );
            }
        }
        for (t, w) in path.vertices.windows(2).enumerate() {
            if w[0] != w[1] && !w[0].is_adjacent(&w[1]) {
                let t = t as Time + 1;
                out.push(
                    Violation::new(ViolationKind::Behavior, id, format!("agent {id} jumps {}->{} at t={t}", w[0], w[1])).at(w[1], t),
                );
            }
        }

        let task_visits: Vec<(TaskId, Time, Vertex)> = path
            .visits
            .iter()
            .filter_map(|v| match v.target.kind {
                TargetKind::Task(task) => Some((task, v.time, v.target.vertex)),
                _ => None,
            })
            .collect();
        for task in instance.tasks_of(id) {
            match task_visits.iter().find(|(t, _, _)| *t == task.id) {
                None => out.push(
                    Violation::new(ViolationKind::TaskCompletion, id, format!("agent {id} never visits task {}", task.id)).task(task.id),
                ),
                Some(&(_, time, _)) if path.at(time) != task.location => out.push(
                    Violation::new(
                        ViolationKind::TaskCompletion,
                        id,
                        format!("agent {id} claims task {} at t={time} but is at {}, not {}", task.id, path.at(time), task.location),
                    )
                    .task(task.id)
                    .at(path.at(time), time),
                ),
                Some(_) => {}
            }
        }
        for w in task_visits.windows(2) {
            if w[1].1 < w[0].1 {
                out.push(
                    Violation::new(
                        ViolationKind::TaskOrder,
                        id,
                        format!("agent {id} visits task {} (t={}) before task {} (t={})", w[1].0, w[1].1, w[0].0, w[0].1),
                    )
                    .task(w[1].0)
                    .at(w[1].2, w[1].1),
                );
            }
        }
    }

    let mut ordered: Vec<&TimedPath> = paths.iter().filter(|p| !p.vertices.is_empty()).collect();
    ordered.sort_by_key(|p| p.agent);
    for c in all_conflicts(&ordered) {
        let (kind, vertex, time, detail) = match c.kind {
            ConflictKind::Vertex { vertex, time } => (ViolationKind::VertexConflict, vertex, time, format!("{c}")),
            ConflictKind::Edge { from, to, time } => (ViolationKind::EdgeConflict, to, time, format!("{c} ({from}->{to})")),
        };
        out.push(Violation {
            kind,
            agents: vec![c.first, c.second],
            vertex: Some(vertex),
            time: Some(time),
            task: None,
            detail,
        });
    }
    out
}
