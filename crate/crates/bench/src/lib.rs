//! Fixed instance suites shared by the benchmarks.

use taskmapf::harness::{random_instance, random_map, room_map};
use taskmapf::world::{GridMap, Instance, Mode};

/// `count` solvable-looking instances on one seeded map, skipping seeds whose
/// placement fails.
fn suite(map: &GridMap, n_agents: usize, n_tasks: usize, mode: Mode, count: usize, seed: u64) -> Vec<Instance> {
    (0..)
        .filter_map(|i| random_instance(map, n_agents, n_tasks, (1, 2), mode, seed.wrapping_add(i)))
        .take(count)
        .collect()
}

/// Obstacle-free 16x16 grid.
pub fn empty_suite(n_agents: usize, n_tasks: usize, count: usize) -> Vec<Instance> {
    suite(&GridMap::new(16, 16), n_agents, n_tasks, Mode::Cts, count, 11)
}

/// 16x16 grid with 10% random obstacles.
pub fn random_suite(n_agents: usize, n_tasks: usize, count: usize) -> Vec<Instance> {
    suite(&random_map(16, 16, 0.1, 23), n_agents, n_tasks, Mode::Cts, count, 29)
}

/// 16x16 map of 3x3 rooms joined by single doors.
pub fn room_suite(n_agents: usize, n_tasks: usize, mode: Mode, count: usize) -> Vec<Instance> {
    suite(&room_map(16, 3, 31), n_agents, n_tasks, mode, count, 37)
}
