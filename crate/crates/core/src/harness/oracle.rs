use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::world::{GridMap, Instance, Mode, Vertex};
use crate::{Cost, Time};

/// Outcome of an exhaustive joint-state search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleVerdict {
    Optimal(Cost),
    /// No joint plan in which every agent settles by the horizon.
    InfeasibleWithinHorizon,
}

impl OracleVerdict {
    pub fn cost(&self) -> Option<Cost> {
        match self {
            OracleVerdict::Optimal(c) => Some(*c),
            OracleVerdict::InfeasibleWithinHorizon => None,
        }
    }
}

const MAX_AGENTS: usize = 6;
const MAX_TASKS_PER_AGENT: usize = 12;
const UNREACHABLE: u32 = u32::MAX;

/// Plain breadth-first distances, kept apart from the solver's own tables.
fn bfs(map: &GridMap, source: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; map.area()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(i) = queue.pop_front() {
        for n in map.neighbors(map.vertex(i)) {
            let j = map.index(n);
            if dist[j] == UNREACHABLE {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    dist
}

struct AgentView {
    start: usize,
    /// Cells where the agent may settle once every task is visited.
    finals: Vec<usize>,
    tasks: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    pos: Vec<u16>,
    visited: Vec<u16>,
    done: u16,
    t: Time,
}

struct Oracle<'a> {
    map: &'a GridMap,
    agents: Vec<AgentView>,
    dist: HashMap<usize, Vec<u32>>,
    memo: HashMap<(usize, usize, u16), u32>,
}

impl Oracle<'_> {
    fn d(&self, from: usize, to: usize) -> u32 {
        self.dist[&to][from]
    }

    fn full(&self, a: usize) -> u16 {
        ((1u32 << self.agents[a].tasks.len()) - 1) as u16
    }

    /// Shortest tour from `pos` through every unvisited task to an allowed final cell.
    fn remaining(&mut self, a: usize, pos: usize, visited: u16) -> u32 {
        if let Some(&h) = self.memo.get(&(a, pos, visited)) {
            return h;
        }
        let view = &self.agents[a];
        let h = if visited == self.full(a) {
            view.finals.iter().map(|&f| self.d(pos, f)).min().unwrap_or(UNREACHABLE)
        } else {
            let mut best = UNREACHABLE;
            let tasks = view.tasks.clone();
            for (k, &cell) in tasks.iter().enumerate() {
                if visited & (1 << k) != 0 {
                    continue;
                }
                let leg = self.d(pos, cell);
                if leg == UNREACHABLE {
                    continue;
                }
                let next = self.mark(a, cell, visited);
                let rest = self.remaining(a, cell, next);
                if rest != UNREACHABLE {
                    best = best.min(leg + rest);
                }
            }
            best
        };
        self.memo.insert((a, pos, visited), h);
        h
    }

    fn mark(&self, a: usize, cell: usize, visited: u16) -> u16 {
        self.agents[a].tasks.iter().enumerate().fold(visited, |m, (k, &c)| if c == cell { m | (1 << k) } else { m })
    }

    fn settled_ok(&self, a: usize, pos: usize, visited: u16) -> bool {
        visited == self.full(a) && self.agents[a].finals.contains(&pos)
    }

    fn heuristic(&mut self, s: &State) -> Option<Cost> {
        let mut total: u64 = 0;
        for a in 0..self.agents.len() {
            if s.done & (1 << a) != 0 {
                continue;
            }
            let h = self.remaining(a, s.pos[a] as usize, s.visited[a]);
            if h == UNREACHABLE {
                return None;
            }
            total += h as u64;
        }
        Some(total as Cost)
    }
}

/// Exact minimum flowtime by A* over joint states.
///
/// Each step every unfinished agent waits or moves; agents may declare
/// themselves finished once all their tasks are visited and they stand on an
/// allowed final cell (the destination in CTS mode, any of their task cells
/// in MG mode, the start if they have no tasks), after which they occupy that
/// cell forever. A step costs one per unfinished agent.
pub fn brute_force_oracle(instance: &Instance, horizon: Time) -> Result<OracleVerdict, HarnessError> {
    let n = instance.num_agents();
    if n > MAX_AGENTS {
        return Err(HarnessError::OracleTooLarge(format!("{n} agents (limit {MAX_AGENTS})")));
    }
    let map = instance.map();
    let mut agents = Vec::with_capacity(n);
    for a in instance.agents() {
        let tasks: Vec<usize> = instance.tasks_of(a.id).map(|t| map.index(t.location)).collect();
        if tasks.len() > MAX_TASKS_PER_AGENT {
            return Err(HarnessError::OracleTooLarge(format!("agent {} has {} tasks", a.id, tasks.len())));
        }
        let finals = match (instance.mode(), a.destination) {
            (Mode::Cts, Some(d)) => vec![map.index(d)],
            _ if tasks.is_empty() => vec![map.index(a.start)],
            _ => tasks.clone(),
        };
        agents.push(AgentView { start: map.index(a.start), finals, tasks });
    }
    let mut dist = HashMap::new();
    for view in &agents {
        for &cell in view.tasks.iter().chain(&view.finals) {
            dist.entry(cell).or_insert_with(|| bfs(map, cell));
        }
    }
    let mut oracle = Oracle { map, agents, dist, memo: HashMap::new() };

    let start = State {
        pos: oracle.agents.iter().map(|a| a.start as u16).collect(),
        visited: (0..n).map(|a| oracle.mark(a, oracle.agents[a].start, 0)).collect(),
        done: 0,
        t: 0,
    };
    let all_done: u16 = ((1u32 << n) - 1) as u16;
    let Some(h0) = oracle.heuristic(&start) else {
        return Ok(OracleVerdict::InfeasibleWithinHorizon);
    };

    let mut states: Vec<State> = vec![start.clone()];
    let mut best: HashMap<State, Cost> = HashMap::from([(start, 0)]);
    let mut open = BinaryHeap::from([Reverse((h0, 0 as Cost, 0usize))]);
    let moves: [(isize, isize); 5] = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)];

    while let Some(Reverse((_, g, id))) = open.pop() {
        let s = states[id].clone();
        if best.get(&s).is_some_and(|&b| b < g) {
            continue;
        }
        if s.done == all_done {
            return Ok(OracleVerdict::Optimal(g));
        }
        if s.t > horizon {
            continue;
        }

        // per agent: list of (new position, declares done)
        let mut options: Vec<Vec<(usize, bool)>> = Vec::with_capacity(n);
        for a in 0..n {
            let here = s.pos[a] as usize;
            if s.done & (1 << a) != 0 {
                options.push(vec![(here, false)]);
                continue;
            }
            let mut opts = Vec::with_capacity(6);
            if oracle.settled_ok(a, here, s.visited[a]) {
                opts.push((here, true));
            }
            let v = oracle.map.vertex(here);
            for (dr, dc) in moves {
                let (r, c) = (v.row as isize + dr, v.col as isize + dc);
                if r < 0 || c < 0 {
                    continue;
                }
                let next = Vertex::new(r as usize, c as usize);
                if oracle.map.is_passable(next) {
                    opts.push((oracle.map.index(next), false));
                }
            }
            options.push(opts);
        }

        let mut choice = vec![0usize; n];
        'combos: loop {
            let picked: Vec<(usize, bool)> = (0..n).map(|a| options[a][choice[a]]).collect();
            let valid = (0..n).all(|i| {
                (i + 1..n).all(|j| {
                    let (pi, pj) = (picked[i].0, picked[j].0);
                    pi != pj && !(pi == s.pos[j] as usize && pj == s.pos[i] as usize)
                })
            });
            if valid {
                let mut done = s.done;
                for (a, &(_, declares)) in picked.iter().enumerate() {
                    if declares {
                        done |= 1 << a;
                    }
                }
                let (next, step) = if done == all_done {
                    (State { pos: s.pos.clone(), visited: s.visited.clone(), done, t: s.t }, 0)
                } else if s.t < horizon {
                    let active = (0..n).filter(|a| done & (1 << a) == 0).count() as Cost;
                    let pos: Vec<u16> = picked.iter().map(|p| p.0 as u16).collect();
                    let visited = (0..n).map(|a| oracle.mark(a, pos[a] as usize, s.visited[a])).collect();
                    (State { pos, visited, done, t: s.t + 1 }, active)
                } else {
                    (s.clone(), Cost::MAX)
                };
                if step != Cost::MAX {
                    let g2 = g + step;
                    if best.get(&next).is_none_or(|&b| g2 < b) {
                        if let Some(h) = oracle.heuristic(&next) {
                            best.insert(next.clone(), g2);
                            states.push(next);
                            open.push(Reverse((g2 + h, g2, states.len() - 1)));
                        }
                    }
                }
            }
            // odometer over the option lists
            let mut a = 0;
            loop {
                if a == n {
                    break 'combos;
                }
                choice[a] += 1;
                if choice[a] < options[a].len() {
                    break;
                }
                choice[a] = 0;
                a += 1;
            }
        }
    }
    Ok(OracleVerdict::InfeasibleWithinHorizon)
}
