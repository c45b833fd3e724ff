use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pathing::{Constraint, TimedPath};
use crate::world::{AgentId, Vertex};
use crate::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConflictKind {
    Vertex { vertex: Vertex, time: Time },
    /// The first agent moves `from -> to` while the second moves `to -> from`, both arriving at `time`.
    Edge { from: Vertex, to: Vertex, time: Time },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conflict {
    pub first: AgentId,
    pub second: AgentId,
    pub kind: ConflictKind,
}

impl Conflict {
    pub fn time(&self) -> Time {
        match self.kind {
            ConflictKind::Vertex { time, .. } | ConflictKind::Edge { time, .. } => time,
        }
    }

    /// The two constraints that resolve the conflict, one per agent.
    pub fn split(&self) -> [Constraint; 2] {
        match self.kind {
            ConflictKind::Vertex { vertex, time } => {
                [Constraint::vertex(self.first, vertex, time), Constraint::vertex(self.second, vertex, time)]
            }
            ConflictKind::Edge { from, to, time } => {
                [Constraint::edge(self.first, from, to, time), Constraint::edge(self.second, to, from, time)]
            }
        }
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConflictKind::Vertex { vertex, time } => {
                write!(f, "vertex conflict a{}/a{} at {vertex} t={time}", self.first, self.second)
            }
            ConflictKind::Edge { from, to, time } => {
                write!(f, "edge conflict a{}/a{} on {from}<->{to} t={time}", self.first, self.second)
            }
        }
    }
}

/// Earliest conflict between any two paths.
///
/// Agents that reached the end of their path keep occupying its last vertex.
/// Ties are broken by `(time, first agent, second agent)`, and a vertex
/// conflict wins over an edge conflict of the same pair.
pub fn detect_first_conflict<P: AsRef<TimedPath>>(paths: &[P]) -> Option<Conflict> {
    let paths: Vec<&TimedPath> = paths.iter().map(|p| p.as_ref()).collect();
    let horizon = paths.iter().map(|p| p.horizon()).max()?;
    for t in 0..=horizon {
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                if let Some(c) = pair_conflict(a, b, t) {
                    return Some(c);
                }
            }
        }
    }
    None
}

fn pair_conflict(a: &TimedPath, b: &TimedPath, t: Time) -> Option<Conflict> {
    let (va, vb) = (a.at(t), b.at(t));
    if va == vb {
        return Some(Conflict { first: a.agent, second: b.agent, kind: ConflictKind::Vertex { vertex: va, time: t } });
    }
    if t > 0 {
        let (pa, pb) = (a.at(t - 1), b.at(t - 1));
        if pa == vb && pb == va && pa != va {
            return Some(Conflict { first: a.agent, second: b.agent, kind: ConflictKind::Edge { from: pa, to: va, time: t } });
        }
    }
    None
}

/// Every conflict in the joint plan, in the same order the detector would find them.
pub fn all_conflicts<P: AsRef<TimedPath>>(paths: &[P]) -> Vec<Conflict> {
    let paths: Vec<&TimedPath> = paths.iter().map(|p| p.as_ref()).collect();
    let Some(horizon) = paths.iter().map(|p| p.horizon()).max() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for t in 0..=horizon {
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                if let Some(c) = pair_conflict(a, b, t) {
                    out.push(c);
                }
            }
        }
    }
    out
}
