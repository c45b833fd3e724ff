//! Seeded synthetic maps and instances for tests and benchmarks.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::world::{AgentSpec, GridMap, Instance, Mode, TaskSpec, Vertex};

/// `width x height` grid with each cell blocked with probability `density`.
pub fn random_map(width: usize, height: usize, density: f64, seed: u64) -> GridMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocked: Vec<Vertex> = (0..height)
        .flat_map(|r| (0..width).map(move |c| Vertex::new(r, c)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    GridMap::with_blocked(width, height, blocked).expect("cells lie inside the grid")
}

/// Square map split into rooms of `room` cells by one-cell walls, with one
/// random door in every wall segment between neighbouring rooms.
pub fn room_map(side: usize, room: usize, seed: u64) -> GridMap {
    assert!(room >= 1 && side > room, "rooms must fit inside the map");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pitch = room + 1;
    let is_wall = |i: usize| i % pitch == room;
    let mut blocked = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if is_wall(r) || is_wall(c) {
                blocked.push(Vertex::new(r, c));
            }
        }
    }
    // a door in each vertical wall segment, then each horizontal one
    for band in (0..side).step_by(pitch) {
        let span = band..(band + room).min(side);
        for wall in (room..side).step_by(pitch) {
            let door = rng.gen_range(span.clone());
            blocked.retain(|v| *v != Vertex::new(door, wall));
            let door = rng.gen_range(span.clone());
            blocked.retain(|v| *v != Vertex::new(wall, door));
        }
    }
    GridMap::with_blocked(side, side, blocked).expect("cells lie inside the grid")
}

/// Passable cells of the largest 4-connected component, in row-major order.
pub fn largest_component(map: &GridMap) -> Vec<Vertex> {
    let mut seen = vec![false; map.area()];
    let mut best: Vec<Vertex> = Vec::new();
    for v in map.passable_cells() {
        if seen[map.index(v)] {
            continue;
        }
        seen[map.index(v)] = true;
        let mut comp = vec![v];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in map.neighbors(u) {
                if !seen[map.index(w)] {
                    seen[map.index(w)] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best.sort();
    best
}

/// Instance with `n_agents` agents and `n_tasks` tasks placed in the largest
/// component of `map`. Starts are distinct, as are destinations and task
/// cells; each task gets between `fanout.0` and `fanout.1` assignees (capped
/// at `n_agents`). Returns `None` when the component is too small.
pub fn random_instance(
    map: &GridMap,
    n_agents: usize,
    n_tasks: usize,
    fanout: (usize, usize),
    mode: Mode,
    seed: u64,
) -> Option<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = largest_component(map);
    if cells.len() < n_agents.max(n_tasks).max(2) {
        return None;
    }
    let pick = |rng: &mut ChaCha8Rng, k: usize| -> Vec<Vertex> { cells.choose_multiple(rng, k).copied().collect() };
    let starts = pick(&mut rng, n_agents);
    let dests = pick(&mut rng, n_agents);
    let agents = (0..n_agents)
        .map(|i| AgentSpec { id: i + 1, start: starts[i], destination: (mode == Mode::Cts).then_some(dests[i]) })
        .collect();
    let (lo, hi) = (fanout.0.clamp(1, n_agents.max(1)), fanout.1.clamp(1, n_agents.max(1)));
    let ids: Vec<usize> = (1..=n_agents).collect();
    let tasks = pick(&mut rng, n_tasks)
        .into_iter()
        .enumerate()
        .map(|(i, location)| {
            let size = rng.gen_range(lo..=hi.max(lo));
            let mut assignees: Vec<usize> = ids.choose_multiple(&mut rng, size).copied().collect();
            assignees.sort_unstable();
            TaskSpec { id: i + 1, location, assignees }
        })
        .collect();
    Instance::new(map.clone(), agents, tasks, mode).ok()
}
