use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::world::{AgentId, Vertex};
use crate::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// The agent may not occupy `vertex` at time `time`.
    Vertex { vertex: Vertex, time: Time },
    /// The agent may not move `from -> to` arriving at time `time`.
    Edge { from: Vertex, to: Vertex, time: Time },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Constraint {
    pub agent: AgentId,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn vertex(agent: AgentId, vertex: Vertex, time: Time) -> Self {
        Constraint { agent, kind: ConstraintKind::Vertex { vertex, time } }
    }

    /// `from == to` forbids waiting at `from` from `time - 1` to `time`.
    pub fn edge(agent: AgentId, from: Vertex, to: Vertex, time: Time) -> Self {
        assert!(from == to || from.is_adjacent(&to), "edge constraint between non-adjacent cells {from} and {to}");
        assert!(time >= 1, "an edge move arrives at time 1 at the earliest");
        Constraint { agent, kind: ConstraintKind::Edge { from, to, time } }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConstraintKind::Vertex { vertex, time } => write!(f, "a{} !@ {vertex} t={time}", self.agent),
            ConstraintKind::Edge { from, to, time } => write!(f, "a{} !{from}->{to} t={time}", self.agent),
        }
    }
}

/// The constraint set of a constraint-tree node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    items: BTreeSet<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Constraint) -> bool {
        self.items.insert(c)
    }

    pub fn with(&self, c: Constraint) -> Self {
        let mut next = self.clone();
        next.insert(c);
        next
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.items.contains(c)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.items.iter()
    }

    pub fn is_superset(&self, other: &ConstraintSet) -> bool {
        self.items.is_superset(&other.items)
    }

    /// Constraints on one agent, indexed for the planner.
    pub fn for_agent(&self, agent: AgentId) -> AgentConstraints {
        let mut out = AgentConstraints::default();
        for c in self.items.iter().filter(|c| c.agent == agent) {
            match c.kind {
                ConstraintKind::Vertex { vertex, time } => {
                    out.vertex.entry(vertex).or_default().insert(time);
                }
                ConstraintKind::Edge { from, to, time } => {
                    out.edge.insert((from, to, time));
                }
            }
        }
        out
    }
}

impl FromIterator<Constraint> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = Constraint>>(iter: I) -> Self {
        ConstraintSet { items: iter.into_iter().collect() }
    }
}

/// One agent's constraints, keyed by vertex and by edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgentConstraints {
    pub vertex: HashMap<Vertex, BTreeSet<Time>>,
    pub edge: HashSet<(Vertex, Vertex, Time)>,
}

impl AgentConstraints {
    pub fn vertex_blocked(&self, v: Vertex, t: Time) -> bool {
        self.vertex.get(&v).is_some_and(|ts| ts.contains(&t))
    }

    pub fn edge_blocked(&self, from: Vertex, to: Vertex, t: Time) -> bool {
        self.edge.contains(&(from, to, t))
    }

    /// Latest constrained timestep at `v`, if any.
    pub fn last_vertex_time(&self, v: Vertex) -> Option<Time> {
        self.vertex.get(&v).and_then(|ts| ts.last().copied())
    }

    pub fn max_time(&self) -> Time {
        let v = self.vertex.values().filter_map(|ts| ts.last().copied()).max().unwrap_or(0);
        let e = self.edge.iter().map(|e| e.2).max().unwrap_or(0);
        v.max(e)
    }
}
