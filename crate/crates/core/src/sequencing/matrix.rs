use super::{SequencingError, Target, TargetKind, TaskSequence};
use crate::world::{AgentId, DistanceTable, Instance, TaskId, Vertex};
use crate::Cost;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixMode {
    /// Paths end at the agent's destination.
    FixedTerminal,
    /// Paths end at a zero-cost virtual terminal, so the last real node is free.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    Start(Vertex),
    Task { id: TaskId, vertex: Vertex },
    Destination(Vertex),
    VirtualTerminal,
}

impl NodeLabel {
    fn target(&self) -> Option<Target> {
        match *self {
            NodeLabel::Start(vertex) => Some(Target { vertex, kind: TargetKind::Start }),
            NodeLabel::Task { id, vertex } => Some(Target { vertex, kind: TargetKind::Task(id) }),
            NodeLabel::Destination(vertex) => Some(Target { vertex, kind: TargetKind::Destination }),
            NodeLabel::VirtualTerminal => None,
        }
    }
}

/// Square matrix of directed travel costs. Node 0 is the start and the last
/// node is the terminal; `None` marks an unusable edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    labels: Vec<NodeLabel>,
    costs: Vec<Option<Cost>>,
}

impl CostMatrix {
    pub fn new(labels: Vec<NodeLabel>, rows: Vec<Vec<Option<Cost>>>) -> Result<Self, SequencingError> {
        let n = labels.len();
        let bad = |m: String| Err(SequencingError::MalformedMatrix(m));
        if n < 2 {
            return bad(format!("need at least a start and a terminal, got {n} nodes"));
        }
        if !matches!(labels[0], NodeLabel::Start(_)) {
            return bad("first node must be the start".into());
        }
        if !matches!(labels[n - 1], NodeLabel::Destination(_) | NodeLabel::VirtualTerminal) {
            return bad("last node must be a destination or virtual terminal".into());
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return bad(format!("cost rows must form a {n}x{n} matrix"));
        }
        Ok(CostMatrix { labels, costs: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for a fixed-terminal matrix over dummy vertices.
    /// Node `i` sits at vertex `(0, i)`; middle nodes are tasks `1..`.
    pub fn from_costs(rows: Vec<Vec<Option<Cost>>>) -> Result<Self, SequencingError> {
        let n = rows.len();
        let labels = (0..n)
            .map(|i| match i {
                0 => NodeLabel::Start(Vertex::new(0, 0)),
                i if i + 1 == n => NodeLabel::Destination(Vertex::new(0, i)),
                i => NodeLabel::Task { id: i, vertex: Vertex::new(0, i) },
            })
            .collect();
        CostMatrix::new(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[NodeLabel] {
        &self.labels
    }

    pub fn cost(&self, from: usize, to: usize) -> Option<Cost> {
        self.costs[from * self.labels.len() + to]
    }

    /// Cost of visiting `nodes` in order, `None` if any leg is unusable.
    pub fn path_cost(&self, nodes: &[usize]) -> Option<Cost> {
        nodes.windows(2).try_fold(0, |acc: Cost, w| Some(acc + self.cost(w[0], w[1])?))
    }

    pub(crate) fn decode(&self, agent: AgentId, nodes: Vec<usize>, cost: Cost) -> TaskSequence {
        let targets = nodes.iter().filter_map(|&i| self.labels[i].target()).collect();
        TaskSequence { agent, targets, cost, nodes }
    }
}

/// Builds the sequencing matrix for one agent.
///
/// In open mode a virtual terminal is appended that every real node reaches
/// for free and that leads nowhere; an agent destination, if present, is then
/// an ordinary node.
pub fn build_cost_matrix(
    instance: &Instance,
    agent: AgentId,
    distances: &DistanceTable,
    mode: MatrixMode,
) -> Result<CostMatrix, SequencingError> {
    let spec = instance.agent(agent);
    let mut labels = vec![NodeLabel::Start(spec.start)];
    labels.extend(instance.tasks_of(agent).map(|t| NodeLabel::Task { id: t.id, vertex: t.location }));
    match mode {
        MatrixMode::FixedTerminal => {
            let dest = spec.destination.ok_or(SequencingError::MissingDestination(agent))?;
            labels.push(NodeLabel::Destination(dest));
        }
        MatrixMode::Open => {
            labels.extend(spec.destination.map(NodeLabel::Destination));
            labels.push(NodeLabel::VirtualTerminal);
        }
    }

    let vertex = |l: &NodeLabel| match *l {
        NodeLabel::Start(v) | NodeLabel::Destination(v) | NodeLabel::Task { vertex: v, .. } => Some(v),
        NodeLabel::VirtualTerminal => None,
    };
    for v in labels.iter().filter_map(vertex) {
        if !distances.contains(v) {
            return Err(SequencingError::MalformedMatrix(format!("distance table does not cover {v}")));
        }
    }
    let rows = labels
        .iter()
        .map(|from| {
            labels
                .iter()
                .map(|to| match (vertex(from), vertex(to)) {
                    (Some(a), Some(b)) => distances.distance(a, b),
                    (Some(_), None) => Some(0),
                    (None, _) => None,
                })
                .collect()
        })
        .collect();
    CostMatrix::new(labels, rows)
}
