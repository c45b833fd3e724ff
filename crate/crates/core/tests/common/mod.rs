//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taskmapf::harness::{random_instance, random_map};
use taskmapf::pathing::{Constraint, ConstraintSet};
use taskmapf::world::{GridMap, Instance, Mode, Vertex};
use taskmapf::{Cost, Time};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// Seeded CTS instance on a grid of at most 6x6 with at most 20% obstacles,
/// 1 to 3 agents and 0 to 3 tasks.
pub fn small_cts_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (w, h) = (rng.gen_range(3..=6), rng.gen_range(2..=6));
        let density = rng.gen_range(0.0..=0.2);
        let map = random_map(w, h, density, rng.gen());
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(0..=3);
        if let Some(inst) = random_instance(&map, n, m, (1, n), Mode::Cts, rng.gen()) {
            return inst;
        }
    }
}

/// All orderings of `items`.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Cost of every start-to-terminal route through all inner nodes of a cost
/// matrix, sorted. Infinite (missing) edges drop the route.
pub fn enumerate_route_costs(rows: &[Vec<Option<Cost>>]) -> Vec<Cost> {
    let n = rows.len();
    let inner: Vec<usize> = (1..n - 1).collect();
    let mut costs: Vec<Cost> = permutations(&inner)
        .into_iter()
        .filter_map(|p| {
            let order: Vec<usize> = std::iter::once(0).chain(p).chain([n - 1]).collect();
            order.windows(2).map(|w| rows[w[0]][w[1]]).sum::<Option<Cost>>()
        })
        .collect();
    costs.sort_unstable();
    costs
}

/// Single-agent earliest completion by layered breadth-first search over
/// (cell, goals reached) per timestep. The agent must end on the last goal
/// and be able to stay there forever.
pub fn space_time_bfs(
    map: &GridMap,
    agent: usize,
    start: Vertex,
    goals: &[Vertex],
    cs: &ConstraintSet,
    horizon: Time,
) -> Option<Cost> {
    let vertex_hit = |v: Vertex, t: Time| {
        cs.iter().any(|c| c.agent == agent && c.kind == taskmapf::pathing::ConstraintKind::Vertex { vertex: v, time: t })
    };
    let edge_hit = |a: Vertex, b: Vertex, t: Time| {
        cs.iter().any(|c| c.agent == agent && c.kind == taskmapf::pathing::ConstraintKind::Edge { from: a, to: b, time: t })
    };
    let last = *goals.last().unwrap_or(&start);
    let latest = cs
        .iter()
        .filter(|c| c.agent == agent)
        .map(|c| match c.kind {
            taskmapf::pathing::ConstraintKind::Vertex { time, .. } | taskmapf::pathing::ConstraintKind::Edge { time, .. } => time,
        })
        .max()
        .unwrap_or(0);
    // staying on `last` from t onwards must break no constraint
    let can_settle = |t: Time| (t + 1..=latest).all(|u| !vertex_hit(last, u) && !edge_hit(last, last, u));
    let advance = |mut s: usize, v: Vertex| {
        while s < goals.len() && goals[s] == v {
            s += 1;
        }
        s
    };
    if vertex_hit(start, 0) {
        return None;
    }
    let mut layer: HashSet<(Vertex, usize)> = HashSet::from([(start, advance(0, start))]);
    for t in 0..=horizon {
        if layer.contains(&(last, goals.len())) && can_settle(t) {
            return Some(t);
        }
        let mut next = HashSet::new();
        for &(v, s) in &layer {
            for u in std::iter::once(v).chain(map.neighbors(v)) {
                if !vertex_hit(u, t + 1) && !edge_hit(v, u, t + 1) {
                    next.insert((u, advance(s, u)));
                }
            }
        }
        layer = next;
    }
    None
}

/// Random vertex and edge constraints (edges include forbidden waits) for `agent`.
pub fn random_constraints(map: &GridMap, agent: usize, count: usize, max_time: Time, rng: &mut ChaCha8Rng) -> ConstraintSet {
    let cells: Vec<Vertex> = map.passable_cells().collect();
    let mut cs = ConstraintSet::new();
    for _ in 0..count {
        let a = cells[rng.gen_range(0..cells.len())];
        let t = rng.gen_range(1..=max_time);
        if rng.gen_bool(0.5) {
            cs.insert(Constraint::vertex(agent, a, t));
        } else {
            let options: Vec<Vertex> = std::iter::once(a).chain(map.neighbors(a)).collect();
            cs.insert(Constraint::edge(agent, a, options[rng.gen_range(0..options.len())], t));
        }
    }
    cs
}
