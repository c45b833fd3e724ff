use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use super::{build_safe_intervals, ConstraintSet, PathingError, SafeIntervalIndex, TimedPath, Visit};
use crate::sequencing::{Target, TaskSequence};
use crate::world::{AgentId, DistanceField, GridMap, Vertex};
use crate::{Cost, Time};

#[derive(Debug, Clone, Copy)]
struct Node {
    vertex: Vertex,
    interval: usize,
    stage: usize,
    time: Time,
    parent: Option<usize>,
}

/// Stage-augmented safe-interval planner over one map.
///
/// A search state is `(vertex, safe interval, stage)` where the stage counts
/// sequence targets already visited. Distance fields towards targets are
/// cached across calls, so one planner should be reused for a whole solve.
#[derive(Debug)]
pub struct LowLevelPlanner<'m> {
    map: &'m GridMap,
    fields: HashMap<Vertex, DistanceField>,
    calls: u64,
}

impl<'m> LowLevelPlanner<'m> {
    pub fn new(map: &'m GridMap) -> Self {
        LowLevelPlanner { map, fields: HashMap::new(), calls: 0 }
    }

    pub fn map(&self) -> &'m GridMap {
        self.map
    }

    /// Number of searches run so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    fn field(&mut self, target: Vertex) -> &DistanceField {
        let map = self.map;
        self.fields.entry(target).or_insert_with(|| DistanceField::from_source(map, target))
    }

    /// Plans `sequence` under the constraints on its agent.
    pub fn plan(
        &mut self,
        sequence: &TaskSequence,
        constraints: &ConstraintSet,
        cost_cap: Option<Cost>,
    ) -> Result<Option<TimedPath>, PathingError> {
        let index = build_safe_intervals(constraints, sequence.agent);
        self.plan_with_index(sequence.agent, sequence.start(), sequence.goals(), &index, cost_cap)
    }

    /// Minimum-cost path from `start` visiting `goals` in order and then
    /// staying on the last one forever.
    pub fn plan_with_index(
        &mut self,
        agent: AgentId,
        start: Vertex,
        goals: &[Target],
        index: &SafeIntervalIndex,
        cost_cap: Option<Cost>,
    ) -> Result<Option<TimedPath>, PathingError> {
        self.calls += 1;
        for v in std::iter::once(start).chain(goals.iter().map(|g| g.vertex)) {
            if !self.map.is_passable(v) {
                return Err(PathingError::Blocked(v));
            }
        }
        let k = goals.len();
        let final_vertex = goals.last().map_or(start, |g| g.vertex);

        // suffix[s] = distance along goals[s..]; fields[s] points at goals[s] (or the final cell when s == k)
        let mut suffix = vec![0 as Cost; k + 1];
        for s in (0..k.saturating_sub(1)).rev() {
            let Some(d) = self.field(goals[s + 1].vertex).get(goals[s].vertex) else {
                return Ok(None);
            };
            suffix[s] = suffix[s + 1] + d;
        }
        let aims: Vec<Vertex> = (0..=k).map(|s| goals.get(s).map_or(final_vertex, |g| g.vertex)).collect();
        for &aim in &aims {
            self.field(aim);
        }
        let fields: Vec<&DistanceField> = aims.iter().map(|aim| &self.fields[aim]).collect();
        let h = |v: Vertex, s: usize| fields[s].get(v).map(|d| d + suffix[s]);
        let absorb = |mut s: usize, v: Vertex| {
            while s < k && goals[s].vertex == v {
                s += 1;
            }
            s
        };
        let cap = cost_cap.unwrap_or(Cost::MAX);

        let mut nodes: Vec<Node> = Vec::new();
        let mut best: HashMap<(Vertex, usize, usize), Time> = HashMap::new();
        let mut open = BinaryHeap::new();

        let Some(start_interval) = index.interval_at(start, 0) else {
            return Ok(None);
        };
        let stage0 = absorb(0, start);
        let Some(h0) = h(start, stage0) else {
            return Ok(None);
        };
        if h0 > cap {
            return Ok(None);
        }
        nodes.push(Node { vertex: start, interval: start_interval, stage: stage0, time: 0, parent: None });
        best.insert((start, start_interval, stage0), 0);
        open.push(Reverse((h0, 0 as Time, 0usize)));

        while let Some(Reverse((_, g, id))) = open.pop() {
            let node = nodes[id];
            if best.get(&(node.vertex, node.interval, node.stage)).is_some_and(|&t| t < g) {
                continue;
            }
            let here = index.intervals(node.vertex)[node.interval];
            if node.stage == k && node.vertex == final_vertex && here.is_unbounded() {
                return Ok(Some(self.reconstruct(agent, goals, &nodes, id)));
            }
            let latest_departure = here.end_or_max();
            let neighbors: Vec<Vertex> = self.map.neighbors(node.vertex).collect();
            for next in neighbors {
                let stage = absorb(node.stage, next);
                let Some(hn) = h(next, stage) else { continue };
                for (j, iv) in index.intervals(next).iter().enumerate() {
                    let earliest = node.time + 1;
                    if iv.end.is_some_and(|e| e < earliest) {
                        continue;
                    }
                    if iv.start > latest_departure.saturating_add(1) {
                        break;
                    }
                    let last = iv.end_or_max().min(latest_departure.saturating_add(1));
                    let mut t = earliest.max(iv.start);
                    while t <= last && index.edge_forbidden(node.vertex, next, t) {
                        t += 1;
                    }
                    if t > last {
                        continue;
                    }
                    let f = t.saturating_add(hn);
                    if f > cap {
                        continue;
                    }
                    match best.entry((next, j, stage)) {
                        Entry::Occupied(e) if *e.get() <= t => continue,
                        Entry::Occupied(mut e) => {
                            e.insert(t);
                        }
                        Entry::Vacant(e) => {
                            e.insert(t);
                        }
                    }
                    nodes.push(Node { vertex: next, interval: j, stage, time: t, parent: Some(id) });
                    open.push(Reverse((f, t, nodes.len() - 1)));
                }
            }
        }
        Ok(None)
    }

    fn reconstruct(&self, agent: AgentId, goals: &[Target], nodes: &[Node], goal: usize) -> TimedPath {
        let mut chain = Vec::new();
        let mut cur = Some(goal);
        while let Some(id) = cur {
            chain.push(nodes[id]);
            cur = nodes[id].parent;
        }
        chain.reverse();

        let mut vertices = vec![chain[0].vertex];
        let mut visits = Vec::with_capacity(goals.len());
        let mut stage = 0;
        for node in &chain {
            while vertices.len() < node.time as usize {
                let here = *vertices.last().expect("non-empty");
                vertices.push(here);
            }
            if node.time > 0 {
                vertices.push(node.vertex);
            }
            for target in &goals[stage..node.stage] {
                visits.push(Visit { target: *target, time: node.time });
            }
            stage = node.stage;
        }
        TimedPath::new(agent, vertices, visits)
    }
}

/// One-shot planning without a shared distance cache.
pub fn low_level_search(
    map: &GridMap,
    sequence: &TaskSequence,
    constraints: &ConstraintSet,
    cost_cap: Option<Cost>,
) -> Result<Option<TimedPath>, PathingError> {
    LowLevelPlanner::new(map).plan(sequence, constraints, cost_cap)
}
