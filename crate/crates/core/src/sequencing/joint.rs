use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use super::{build_cost_matrix, MatrixMode, SequenceKBest, SequencingError, TaskSequence};
use crate::world::{shortest_distances, AgentId, Instance};
use crate::Cost;

/// Per-agent ranks (1-based) selecting which K-best sequence each agent uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PriorityVector(pub Vec<usize>);

impl PriorityVector {
    pub fn ones(n: usize) -> Self {
        PriorityVector(vec![1; n])
    }

    fn bumped(&self, agent_index: usize) -> Self {
        let mut ranks = self.0.clone();
        ranks[agent_index] += 1;
        PriorityVector(ranks)
    }
}

impl fmt::Display for PriorityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranks: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", ranks.join(","))
    }
}

/// One task sequence per agent, ordered by agent id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointSequence {
    pub sequences: Vec<TaskSequence>,
    pub cost: Cost,
    pub priority: PriorityVector,
}

impl JointSequence {
    pub fn sequence(&self, agent: AgentId) -> &TaskSequence {
        &self.sequences[agent - 1]
    }
}

pub fn sequence_cost(joint: &JointSequence) -> Cost {
    joint.sequences.iter().map(|s| s.cost).sum()
}

/// Joint task sequences in non-decreasing cost order.
///
/// Popping a priority vector queues every vector that raises exactly one
/// agent's rank by one. Children are generated when the next sequence is
/// requested, so a stream can be resumed at any point. Vectors are queued at
/// most once; cost ties are broken by the lexicographically smaller vector.
#[derive(Debug, Clone)]
pub struct JointKBestStream {
    agents: Vec<SequenceKBest>,
    open: BinaryHeap<Reverse<(Cost, PriorityVector)>>,
    visited: HashSet<PriorityVector>,
    emitted: Vec<JointSequence>,
    pending: Option<(Cost, PriorityVector)>,
    started: bool,
}

impl JointKBestStream {
    /// `agents[i]` must enumerate sequences for agent `i + 1`.
    pub fn new(agents: Vec<SequenceKBest>) -> Self {
        JointKBestStream {
            agents,
            open: BinaryHeap::new(),
            visited: HashSet::new(),
            emitted: Vec::new(),
            pending: None,
            started: false,
        }
    }

    pub fn for_instance(instance: &Instance, mode: MatrixMode) -> Result<Self, SequencingError> {
        let distances = shortest_distances(instance.map(), &instance.key_vertices())?;
        let agents = instance
            .agents()
            .iter()
            .map(|a| Ok(SequenceKBest::new(a.id, build_cost_matrix(instance, a.id, &distances, mode)?)))
            .collect::<Result<_, SequencingError>>()?;
        Ok(JointKBestStream::new(agents))
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn agent_mut(&mut self, id: AgentId) -> &mut SequenceKBest {
        &mut self.agents[id - 1]
    }

    /// Total restricted-TSP solves across all agents.
    pub fn tsp_calls(&self) -> u64 {
        self.agents.iter().map(|a| a.tsp_calls()).sum()
    }

    /// Everything emitted so far; index `r` holds the `(r + 1)`-th best.
    pub fn emitted(&self) -> &[JointSequence] {
        &self.emitted
    }

    pub fn last(&self) -> Option<&JointSequence> {
        self.emitted.last()
    }

    /// Priority vectors currently waiting in the frontier, sorted.
    pub fn frontier(&self) -> Vec<PriorityVector> {
        let mut v: Vec<_> = self.open.iter().map(|Reverse((_, p))| p.clone()).collect();
        v.sort();
        v
    }

    /// The next-best joint sequence, or `None` once every combination is used up.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Option<&JointSequence>, SequencingError> {
        if !self.started {
            self.started = true;
            self.seed()?;
        }
        self.expand_pending()?;
        let Some(Reverse((cost, priority))) = self.open.pop() else {
            return Ok(None);
        };
        let mut sequences = Vec::with_capacity(self.agents.len());
        for (agent, &rank) in self.agents.iter_mut().zip(&priority.0) {
            let seq = agent.get(rank)?.expect("queued ranks exist");
            sequences.push(seq.clone());
        }
        self.pending = Some((cost, priority.clone()));
        self.emitted.push(JointSequence { sequences, cost, priority });
        Ok(self.emitted.last())
    }

    fn seed(&mut self) -> Result<(), SequencingError> {
        let mut cost = 0;
        for agent in &mut self.agents {
            match agent.cost_at(1)? {
                Some(c) => cost += c,
                None => return Ok(()),
            }
        }
        let root = PriorityVector::ones(self.agents.len());
        self.visited.insert(root.clone());
        self.open.push(Reverse((cost, root)));
        Ok(())
    }

    /// Queues the children of the most recently emitted vector.
    pub fn expand_pending(&mut self) -> Result<(), SequencingError> {
        let Some((cost, parent)) = self.pending.take() else {
            return Ok(());
        };
        for l in 0..self.agents.len() {
            let child = parent.bumped(l);
            if self.visited.contains(&child) {
                continue;
            }
            let rank = child.0[l];
            let Some(next) = self.agents[l].cost_at(rank)? else {
                continue;
            };
            let prev = self.agents[l].cost_at(rank - 1)?.expect("parent rank exists");
            self.visited.insert(child.clone());
            self.open.push(Reverse((cost - prev + next, child)));
        }
        Ok(())
    }
}
