use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{AgentConstraints, ConstraintSet};
use crate::world::{AgentId, Vertex};
use crate::Time;

/// Inclusive time window; `end == None` means it never closes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub start: Time,
    pub end: Option<Time>,
}

impl Interval {
    pub const ALWAYS: Interval = Interval { start: 0, end: None };

    pub fn new(start: Time, end: Option<Time>) -> Self {
        Interval { start, end }
    }

    pub fn contains(&self, t: Time) -> bool {
        t >= self.start && self.end.is_none_or(|e| t <= e)
    }

    pub fn is_unbounded(&self) -> bool {
        self.end.is_none()
    }

    pub(crate) fn end_or_max(&self) -> Time {
        self.end.unwrap_or(Time::MAX)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            Some(e) => write!(f, "[{},{}]", self.start, e),
            None => write!(f, "[{},inf)", self.start),
        }
    }
}

/// Safe intervals per vertex plus forbidden edge transitions for one agent.
#[derive(Debug, Clone, Default)]
pub struct SafeIntervalIndex {
    intervals: HashMap<Vertex, Vec<Interval>>,
    edges: HashSet<(Vertex, Vertex, Time)>,
}

const ALWAYS: [Interval; 1] = [Interval::ALWAYS];

impl SafeIntervalIndex {
    pub fn from_agent_constraints(constraints: &AgentConstraints) -> Self {
        let mut intervals: HashMap<Vertex, Vec<Interval>> = constraints
            .vertex
            .iter()
            .map(|(&v, times)| {
                let mut out = Vec::with_capacity(times.len() + 1);
                let mut open_from = 0;
                for &t in times {
                    if t > open_from {
                        out.push(Interval::new(open_from, Some(t - 1)));
                    }
                    open_from = t + 1;
                }
                out.push(Interval::new(open_from, None));
                (v, out)
            })
            .collect();
        // A forbidden wait cuts an interval in two without removing any timestep.
        let mut waits: Vec<_> = constraints.edge.iter().filter(|(a, b, _)| a == b).map(|&(v, _, t)| (v, t)).collect();
        waits.sort();
        for (v, t) in waits {
            let list = intervals.entry(v).or_insert_with(|| vec![Interval::ALWAYS]);
            if let Some(i) = list.iter().position(|iv| iv.start < t && iv.contains(t)) {
                let tail = Interval::new(t, list[i].end);
                list[i].end = Some(t - 1);
                list.insert(i + 1, tail);
            }
        }
        SafeIntervalIndex { intervals, edges: constraints.edge.clone() }
    }

    /// Sorted, disjoint safe intervals of `v`.
    pub fn intervals(&self, v: Vertex) -> &[Interval] {
        self.intervals.get(&v).map(|v| v.as_slice()).unwrap_or(&ALWAYS)
    }

    /// Index of the safe interval of `v` containing `t`.
    pub fn interval_at(&self, v: Vertex, t: Time) -> Option<usize> {
        self.intervals(v).iter().position(|i| i.contains(t))
    }

    pub fn edge_forbidden(&self, from: Vertex, to: Vertex, arrival: Time) -> bool {
        self.edges.contains(&(from, to, arrival))
    }
}

/// Compiles one agent's vertex constraints into safe intervals.
pub fn build_safe_intervals(constraints: &ConstraintSet, agent: AgentId) -> SafeIntervalIndex {
    SafeIntervalIndex::from_agent_constraints(&constraints.for_agent(agent))
}
