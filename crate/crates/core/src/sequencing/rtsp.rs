//! Exact restricted path-TSP.
//!
//! Finds the cheapest Hamiltonian path from node 0 to the last node that uses
//! every included edge and no excluded edge. Included edges form chains; each
//! chain is contracted into one macro node before a Held-Karp style dynamic
//! program over subsets of the remaining macro nodes.

use std::collections::BTreeSet;

use super::{CostMatrix, SequencingError};
use crate::Cost;

/// Largest number of free macro nodes (besides start and terminal chains) the
/// subset dynamic program accepts.
pub const MAX_FREE_NODES: usize = 18;

const INF: Cost = Cost::MAX;

/// A directed edge between matrix nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub fn new(from: usize, to: usize) -> Self {
        Edge { from, to }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeConstraintSet {
    pub included: BTreeSet<Edge>,
    pub excluded: BTreeSet<Edge>,
}

struct Links {
    succ: Vec<Option<usize>>,
    pred: Vec<Option<usize>>,
}

impl EdgeConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn include(mut self, e: Edge) -> Self {
        self.included.insert(e);
        self
    }

    pub fn exclude(mut self, e: Edge) -> Self {
        self.excluded.insert(e);
        self
    }

    /// Checks the structural invariants and returns the included-edge links.
    fn links(&self, n: usize) -> Result<Links, SequencingError> {
        let bad = |m: String| Err(SequencingError::InvalidConstraints(m));
        for e in self.included.iter().chain(&self.excluded) {
            if e.from >= n || e.to >= n {
                return bad(format!("edge {}->{} outside a {n}-node matrix", e.from, e.to));
            }
        }
        if let Some(e) = self.included.intersection(&self.excluded).next() {
            return bad(format!("edge {}->{} is both included and excluded", e.from, e.to));
        }
        let mut succ = vec![None; n];
        let mut pred = vec![None; n];
        for e in &self.included {
            if e.from == e.to {
                return bad(format!("self-loop on node {}", e.from));
            }
            if succ[e.from].replace(e.to).is_some() {
                return bad(format!("node {} has two included out-edges", e.from));
            }
            if pred[e.to].replace(e.from).is_some() {
                return bad(format!("node {} has two included in-edges", e.to));
            }
        }
        // every node must be reachable from a chain head, otherwise there is a cycle
        let mut seen = vec![false; n];
        for head in (0..n).filter(|&v| pred[v].is_none()) {
            let mut cur = Some(head);
            while let Some(v) = cur {
                seen[v] = true;
                cur = succ[v];
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return bad(format!("included edges form a cycle through node {v}"));
        }
        Ok(Links { succ, pred })
    }

    pub fn validate(&self, n: usize) -> Result<(), SequencingError> {
        self.links(n).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtspSolution {
    /// Node visiting order, from 0 to the terminal.
    pub order: Vec<usize>,
    pub cost: Cost,
}

struct Chain {
    nodes: Vec<usize>,
    cost: Cost,
}

impl Chain {
    fn head(&self) -> usize {
        self.nodes[0]
    }

    fn tail(&self) -> usize {
        *self.nodes.last().unwrap()
    }
}

/// Solves the restricted TSP exactly. `Ok(None)` means no path satisfies the
/// constraints with finite cost.
pub fn solve_rtsp(matrix: &CostMatrix, constraints: &EdgeConstraintSet) -> Result<Option<RtspSolution>, SequencingError> {
    let n = matrix.len();
    let Links { succ, pred } = constraints.links(n)?;
    let terminal = n - 1;
    if pred[0].is_some() || succ[terminal].is_some() {
        return Ok(None);
    }

    let mut chains = Vec::new();
    let mut chain_of = vec![0; n];
    for head in (0..n).filter(|&v| pred[v].is_none()) {
        let mut nodes = vec![head];
        let mut cost: Cost = 0;
        while let Some(next) = succ[*nodes.last().unwrap()] {
            match matrix.cost(*nodes.last().unwrap(), next) {
                Some(c) => cost += c,
                None => return Ok(None),
            }
            nodes.push(next);
        }
        for &v in &nodes {
            chain_of[v] = chains.len();
        }
        chains.push(Chain { nodes, cost });
    }

    let first = chain_of[0];
    let last = chain_of[terminal];
    if first == last {
        return Ok((chains.len() == 1).then(|| RtspSolution { order: chains[first].nodes.clone(), cost: chains[first].cost }));
    }

    let transition = |a: &Chain, b: &Chain| -> Cost {
        let e = Edge::new(a.tail(), b.head());
        if constraints.excluded.contains(&e) {
            INF
        } else {
            matrix.cost(e.from, e.to).unwrap_or(INF)
        }
    };
    let fixed: Cost = chains.iter().map(|c| c.cost).sum();
    let middle: Vec<usize> = (0..chains.len()).filter(|&c| c != first && c != last).collect();
    let m = middle.len();
    if m > MAX_FREE_NODES {
        return Err(SequencingError::TooManyNodes(m));
    }

    if m == 0 {
        let c = transition(&chains[first], &chains[last]);
        return Ok((c != INF).then(|| RtspSolution {
            order: chains[first].nodes.iter().chain(&chains[last].nodes).copied().collect(),
            cost: fixed + c,
        }));
    }

    // best[mask * m + j]: cheapest way to leave the start chain, cover `mask`
    // and finish on middle chain j.
    let full = (1usize << m) - 1;
    let mut best = vec![INF; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        best[(1 << j) * m + j] = transition(&chains[first], &chains[middle[j]]);
    }
    for mask in 1..=full {
        for j in 0..m {
            let here = best[mask * m + j];
            if here == INF || mask & (1 << j) == 0 {
                continue;
            }
            for k in 0..m {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let step = transition(&chains[middle[j]], &chains[middle[k]]);
                if step == INF {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = here.saturating_add(step);
                if cand < best[next * m + k] {
                    best[next * m + k] = cand;
                    parent[next * m + k] = j as u8;
                }
            }
        }
    }

    let mut end = None;
    let mut total = INF;
    for j in 0..m {
        let here = best[full * m + j];
        let close = transition(&chains[middle[j]], &chains[last]);
        if here == INF || close == INF {
            continue;
        }
        if here + close < total {
            total = here + close;
            end = Some(j);
        }
    }
    let Some(mut j) = end else {
        return Ok(None);
    };

    let mut picked = Vec::with_capacity(m);
    let mut mask = full;
    loop {
        picked.push(middle[j]);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    picked.reverse();

    let mut order = chains[first].nodes.clone();
    for c in picked {
        order.extend(&chains[c].nodes);
    }
    order.extend(&chains[last].nodes);
    Ok(Some(RtspSolution { order, cost: fixed + total }))
}
