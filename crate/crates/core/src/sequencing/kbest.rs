use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{solve_rtsp, CostMatrix, Edge, EdgeConstraintSet, SequencingError, TaskSequence};
use crate::world::AgentId;
use crate::Cost;

#[derive(Debug, Clone)]
struct Candidate {
    cost: Cost,
    serial: u64,
    order: Vec<usize>,
    constraints: EdgeConstraintSet,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.cost, self.serial).cmp(&(other.cost, other.serial))
    }
}

/// Lazily enumerated K-best task sequences for one agent.
///
/// Ranks already produced are served from the cache; asking for a new rank
/// partitions the most recently returned solution and solves the resulting
/// restricted problems.
#[derive(Debug, Clone)]
pub struct SequenceKBest {
    agent: AgentId,
    matrix: CostMatrix,
    found: Vec<TaskSequence>,
    open: BinaryHeap<Reverse<Candidate>>,
    /// Last popped candidate whose partition has not been generated yet.
    pending: Option<Candidate>,
    started: bool,
    serial: u64,
    tsp_calls: u64,
}

impl SequenceKBest {
    pub fn new(agent: AgentId, matrix: CostMatrix) -> Self {
        SequenceKBest {
            agent,
            matrix,
            found: Vec::new(),
            open: BinaryHeap::new(),
            pending: None,
            started: false,
            serial: 0,
            tsp_calls: 0,
        }
    }

    pub fn agent(&self) -> AgentId {
        self.agent
    }

    pub fn matrix(&self) -> &CostMatrix {
        &self.matrix
    }

    /// Number of restricted-TSP instances solved so far.
    pub fn tsp_calls(&self) -> u64 {
        self.tsp_calls
    }

    /// Sequences found so far, best first.
    pub fn found(&self) -> &[TaskSequence] {
        &self.found
    }

    /// The `rank`-th best sequence (1-based), or `None` if fewer exist.
    pub fn get(&mut self, rank: usize) -> Result<Option<&TaskSequence>, SequencingError> {
        assert!(rank >= 1, "ranks start at 1");
        if !self.started {
            self.started = true;
            self.try_push(EdgeConstraintSet::new())?;
        }
        while self.found.len() < rank {
            if let Some(done) = self.pending.take() {
                self.partition(&done)?;
            }
            let Some(Reverse(best)) = self.open.pop() else {
                return Ok(None);
            };
            self.found.push(self.matrix.decode(self.agent, best.order.clone(), best.cost));
            self.pending = Some(best);
        }
        Ok(self.found.get(rank - 1))
    }

    pub fn cost_at(&mut self, rank: usize) -> Result<Option<Cost>, SequencingError> {
        Ok(self.get(rank)?.map(|s| s.cost))
    }

    /// Splits the space below `parent` into disjoint subsets: child `l` keeps
    /// edges `e_1..e_{l-1}` of the parent path and forbids `e_l`.
    fn partition(&mut self, parent: &Candidate) -> Result<(), SequencingError> {
        let edges: Vec<Edge> = parent.order.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
        let mut included = parent.constraints.included.clone();
        for &edge in &edges {
            // forbidding an edge that is already forced gives an empty subset
            if !parent.constraints.included.contains(&edge) {
                let mut excluded = parent.constraints.excluded.clone();
                excluded.insert(edge);
                self.try_push(EdgeConstraintSet { included: included.clone(), excluded })?;
            }
            included.insert(edge);
        }
        Ok(())
    }

    fn try_push(&mut self, constraints: EdgeConstraintSet) -> Result<(), SequencingError> {
        self.tsp_calls += 1;
        if let Some(sol) = solve_rtsp(&self.matrix, &constraints)? {
            self.serial += 1;
            self.open.push(Reverse(Candidate { cost: sol.cost, serial: self.serial, order: sol.order, constraints }));
        }
        Ok(())
    }
}
