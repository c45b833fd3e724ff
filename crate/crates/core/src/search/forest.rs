use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::rc::Rc;
use std::time::Instant;

use log::{debug, trace};

use super::{detect_first_conflict, SolveError, SolveResult, SolveStats, SolveStatus, SolverConfig, TieBreak, TraceEvent};
use crate::pathing::{Constraint, ConstraintSet, LowLevelPlanner, TimedPath};
use crate::sequencing::{JointKBestStream, JointSequence, MatrixMode};
use crate::world::{AgentId, Instance, Mode};
use crate::Cost;

#[derive(Debug)]
struct Link {
    constraint: Constraint,
    next: Option<Rc<Link>>,
}

/// Constraints of a tree node, newest first. A child adds one link in front
/// of its parent's chain instead of copying the whole set.
#[derive(Debug, Clone, Default)]
pub struct ConstraintChain {
    head: Option<Rc<Link>>,
    len: usize,
}

impl ConstraintChain {
    pub fn new() -> Self {
        ConstraintChain::default()
    }

    pub fn with(&self, constraint: Constraint) -> Self {
        let link = Link { constraint, next: self.head.clone() };
        ConstraintChain { head: Some(Rc::new(link)), len: self.len + 1 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Newest first.
    pub fn iter(&self) -> impl Iterator<Item = &Constraint> + '_ {
        std::iter::successors(self.head.as_deref(), |l| l.next.as_deref()).map(|l| &l.constraint)
    }

    pub fn to_set(&self) -> ConstraintSet {
        self.iter().copied().collect()
    }

    /// The constraints on one agent.
    pub fn for_agent(&self, agent: AgentId) -> ConstraintSet {
        self.iter().filter(|c| c.agent == agent).copied().collect()
    }
}

impl Drop for ConstraintChain {
    fn drop(&mut self) {
        // unlink iteratively so long chains cannot overflow the stack
        let mut next = self.head.take();
        while let Some(link) = next {
            match Rc::try_unwrap(link) {
                Ok(mut l) => next = l.next.take(),
                Err(_) => break,
            }
        }
    }
}

/// A constraint-tree node. Paths are shared with the parent except for the
/// agent that was replanned.
#[derive(Debug, Clone)]
pub struct CTNode {
    pub constraints: ConstraintChain,
    pub paths: Vec<Rc<TimedPath>>,
    pub g: Cost,
    /// 1-based rank of the joint sequence this node follows.
    pub tree: usize,
    pub id: u64,
}

#[derive(Debug)]
struct Queued {
    key: (Cost, usize, u64),
    node: CTNode,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// State of one forest search: the shared OPEN list, the sequence stream
/// and the trees built so far.
#[derive(Debug)]
pub struct Forest<'a> {
    instance: &'a Instance,
    config: SolverConfig,
    stream: JointKBestStream,
    planner: LowLevelPlanner<'a>,
    trees: Vec<Rc<JointSequence>>,
    open: BinaryHeap<Reverse<Queued>>,
    next_id: u64,
    roots_generated: u64,
    hl_expansions: u64,
    exhausted: bool,
    trace: Vec<TraceEvent>,
    started: Instant,
}

impl<'a> Forest<'a> {
    pub fn new(instance: &'a Instance, config: SolverConfig) -> Result<Self, SolveError> {
        let mode = match instance.mode() {
            Mode::Cts => MatrixMode::FixedTerminal,
            Mode::Mg => MatrixMode::Open,
        };
        let started = Instant::now();
        let stream = JointKBestStream::for_instance(instance, mode)?;
        let mut forest = Self::with_stream(instance, config, stream)?;
        forest.started = started;
        Ok(forest)
    }

    /// Uses a caller-built sequence stream, e.g. one over hand-made cost matrices.
    pub fn with_stream(instance: &'a Instance, config: SolverConfig, stream: JointKBestStream) -> Result<Self, SolveError> {
        config.validate()?;
        Ok(Forest {
            instance,
            config,
            stream,
            planner: LowLevelPlanner::new(instance.map()),
            trees: Vec::new(),
            open: BinaryHeap::new(),
            next_id: 0,
            roots_generated: 0,
            hl_expansions: 0,
            exhausted: false,
            trace: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn open_len(&self) -> usize {
        self.open.len()
    }

    pub fn roots_generated(&self) -> u64 {
        self.roots_generated
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    /// Cost of the newest joint sequence pulled from the stream.
    pub fn latest_sequence_cost(&self) -> Option<Cost> {
        self.trees.last().map(|t| t.cost)
    }

    pub fn push(&mut self, node: CTNode) {
        let tree = match self.config.tie_break {
            TieBreak::TreeThenNode => node.tree,
            TieBreak::NodeOnly => 0,
        };
        self.open.push(Reverse(Queued { key: (node.g, tree, node.id), node }));
    }

    pub fn pop(&mut self) -> Option<CTNode> {
        self.open.pop().map(|Reverse(q)| q.node)
    }

    fn record(&mut self, event: TraceEvent) {
        if self.config.trace {
            self.trace.push(event);
        }
    }

    fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    fn timed_out(&self) -> bool {
        self.config.time_limit.is_some_and(|limit| self.started.elapsed() >= limit)
    }

    /// Pulls the next joint sequence and plans its root. `Ok(None)` once the
    /// stream is exhausted, `Ok(Some(None))` when the root has no feasible paths.
    pub fn next_root(&mut self) -> Result<Option<Option<CTNode>>, SolveError> {
        if self.exhausted {
            return Ok(None);
        }
        let Some(joint) = self.stream.next()?.cloned() else {
            self.exhausted = true;
            return Ok(None);
        };
        if let Some(cap) = self.config.horizon {
            // sequences come in cost order, so once one is out of reach all later ones are too
            if joint.cost as u64 > cap as u64 * joint.sequences.len() as u64 {
                self.exhausted = true;
                return Ok(None);
            }
        }
        self.roots_generated += 1;
        let joint = Rc::new(joint);
        self.trees.push(Rc::clone(&joint));
        let tree = self.trees.len();
        let empty = ConstraintChain::new();
        let mut paths = Vec::with_capacity(joint.sequences.len());
        for seq in &joint.sequences {
            match self.planner.plan(seq, &ConstraintSet::new(), self.config.horizon)? {
                Some(p) => paths.push(Rc::new(p)),
                None => {
                    debug!("root of tree {tree} has no feasible path for agent {}", seq.agent);
                    self.record(TraceEvent::Root { tree, node: 0, sequence_cost: joint.cost, g: None });
                    return Ok(Some(None));
                }
            }
        }
        let g = paths.iter().map(|p| p.cost).sum();
        let id = self.fresh_id();
        self.record(TraceEvent::Root { tree, node: id, sequence_cost: joint.cost, g: Some(g) });
        debug!("root {id} of tree {tree}: sequence cost {}, g {g}", joint.cost);
        Ok(Some(Some(CTNode { constraints: empty, paths, g, tree, id })))
    }

    fn needs_new_root(&self, g: Cost) -> bool {
        if self.config.single_tree() || self.exhausted {
            return false;
        }
        if self.open.is_empty() {
            return true;
        }
        let latest = self.latest_sequence_cost().unwrap_or(0) as f64;
        g as f64 > (1.0 + self.config.omega) * latest
    }

    /// Decides whether the popped node or a new root is worked on next.
    ///
    /// New roots are generated for as long as the current node still exceeds
    /// `1 + omega` times the newest sequence cost. A single generation step
    /// is not enough: the new root can itself be expensive, while a later
    /// sequence still promises something cheaper. Returns `None` on timeout,
    /// with the popped node back in OPEN.
    pub fn check_new_root(&mut self, popped: CTNode) -> Result<Option<CTNode>, SolveError> {
        let mut current = popped;
        while self.needs_new_root(current.g) {
            if self.timed_out() {
                self.push(current);
                return Ok(None);
            }
            let Some(root) = self.next_root()? else { break };
            let Some(root) = root else { continue };
            if root.g < current.g {
                self.record(TraceEvent::SwapRoot { returned: root.id, reinserted: current.id });
                self.push(current);
                current = root;
            } else {
                self.push(root);
            }
        }
        Ok(Some(current))
    }

    /// Children of `node` for `conflict`, one per constrained agent, skipping
    /// those without a feasible replanned path.
    fn split(&mut self, node: &CTNode, conflict: &super::Conflict) -> Result<Vec<CTNode>, SolveError> {
        let mut children = Vec::with_capacity(2);
        for constraint in conflict.split() {
            let agent = constraint.agent;
            let constraints = node.constraints.with(constraint);
            let seq = &self.trees[node.tree - 1].sequences[agent - 1];
            let Some(path) = self.planner.plan(seq, &constraints.for_agent(agent), self.config.horizon)? else {
                trace!("child of {} with {constraint} is infeasible", node.id);
                continue;
            };
            let mut paths = node.paths.clone();
            let g = node.g - paths[agent - 1].cost + path.cost;
            paths[agent - 1] = Rc::new(path);
            let id = self.fresh_id();
            children.push(CTNode { constraints, paths, g, tree: node.tree, id });
        }
        Ok(children)
    }

    fn finish(&self, status: SolveStatus, node: Option<&CTNode>) -> SolveResult {
        let paths: Vec<TimedPath> = node.map(|n| n.paths.iter().map(|p| (**p).clone()).collect()).unwrap_or_default();
        SolveResult {
            status,
            flowtime: node.map(|n| n.g),
            lower_bound: self.stream.emitted().first().map(|j| j.cost),
            tree: node.map(|n| n.tree),
            paths,
            stats: SolveStats {
                roots_generated: self.roots_generated,
                tsp_calls: self.stream.tsp_calls(),
                hl_expansions: self.hl_expansions,
                ll_calls: self.planner.calls(),
                runtime: self.started.elapsed().as_secs_f64(),
            },
            variant: None,
            phase: None,
            trace: self.trace.clone(),
        }
    }

    /// Runs the search to completion, infeasibility or timeout.
    pub fn run(mut self) -> Result<SolveResult, SolveError> {
        if let Some(Some(root)) = self.next_root()? {
            self.push(root);
        }
        loop {
            if self.timed_out() {
                return Ok(self.finish(SolveStatus::Timeout, None));
            }
            let Some(popped) = self.pop() else {
                // every tree so far is closed; fall back to the next sequence
                if self.config.single_tree() {
                    return Ok(self.finish(SolveStatus::Infeasible, None));
                }
                match self.next_root()? {
                    None => return Ok(self.finish(SolveStatus::Infeasible, None)),
                    Some(None) => continue,
                    Some(Some(root)) => {
                        self.push(root);
                        continue;
                    }
                }
            };
            let Some(node) = self.check_new_root(popped)? else {
                return Ok(self.finish(SolveStatus::Timeout, None));
            };
            self.hl_expansions += 1;
            self.record(TraceEvent::Expand { node: node.id, tree: node.tree, g: node.g });
            match detect_first_conflict(&node.paths) {
                None => {
                    self.record(TraceEvent::Goal { node: node.id });
                    return Ok(self.finish(SolveStatus::Solved, Some(&node)));
                }
                Some(conflict) => {
                    self.record(TraceEvent::Split { node: node.id, conflict });
                    for child in self.split(&node, &conflict)? {
                        self.push(child);
                    }
                }
            }
        }
    }
}

/// Solves a CTS instance (fixed destinations) or an MG instance (open
/// terminals) with the forest search.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    Forest::new(instance, config.clone())?.run()
}

pub fn solve_with_stream(
    instance: &Instance,
    config: &SolverConfig,
    stream: JointKBestStream,
) -> Result<SolveResult, SolveError> {
    Forest::with_stream(instance, config.clone(), stream)?.run()
}
