use std::collections::HashMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AgentSpec, GridMap, Instance, Mode, ScenarioEntry, TaskSpec, WorldError};

/// Parameters for turning a MAPF scenario into a task-sequencing instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetSpec {
    pub n_agents: usize,
    pub n_tasks: usize,
    /// Inclusive range for the number of agents assigned to each task.
    pub fanout: (usize, usize),
    pub seed: u64,
    pub mode: Mode,
}

/// The first `n_agents` entries become agents, the start cells of the next
/// `n_tasks` entries become task locations. Goals of the task entries are
/// ignored; in MG mode agent goals are dropped as well.
pub fn adapt_dataset(map: &GridMap, entries: &[ScenarioEntry], spec: DatasetSpec) -> Result<Instance, WorldError> {
    let DatasetSpec { n_agents, n_tasks, fanout: (lo, hi), seed, mode } = spec;
    if entries.len() < n_agents + n_tasks {
        return Err(WorldError::Dataset(format!(
            "need {} scenario entries, found {}",
            n_agents + n_tasks,
            entries.len()
        )));
    }
    if n_tasks > 0 && (lo == 0 || lo > hi || hi > n_agents) {
        return Err(WorldError::Dataset(format!("fanout range [{lo},{hi}] not within [1,{n_agents}]")));
    }

    let agent_entries = &entries[..n_agents];
    check_distinct(agent_entries.iter().map(|e| e.start), "start")?;
    if mode == Mode::Cts {
        check_distinct(agent_entries.iter().map(|e| e.goal), "goal")?;
    }

    let agents = agent_entries
        .iter()
        .enumerate()
        .map(|(i, e)| AgentSpec {
            id: i + 1,
            start: e.start,
            destination: (mode == Mode::Cts).then_some(e.goal),
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tasks = entries[n_agents..n_agents + n_tasks]
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let size = rng.gen_range(lo..=hi);
            let mut assignees: Vec<usize> = sample(&mut rng, n_agents, size).into_iter().map(|a| a + 1).collect();
            assignees.sort_unstable();
            TaskSpec { id: i + 1, location: e.start, assignees }
        })
        .collect();

    Instance::new(map.clone(), agents, tasks, mode)
}

fn check_distinct(cells: impl Iterator<Item = super::Vertex>, what: &str) -> Result<(), WorldError> {
    let mut seen: HashMap<super::Vertex, usize> = HashMap::new();
    let mut clashes = Vec::new();
    for (i, v) in cells.enumerate() {
        if let Some(first) = seen.insert(v, i) {
            clashes.push(format!("entries {} and {} share {what} {v}", first, i));
        }
    }
    if clashes.is_empty() {
        Ok(())
    } else {
        Err(WorldError::Dataset(clashes.join("; ")))
    }
}
