use std::collections::{HashMap, VecDeque};

use super::{GridMap, Vertex, WorldError};
use crate::Cost;

/// Breadth-first distances from one source to every cell of a map.
#[derive(Debug, Clone)]
pub struct DistanceField {
    width: usize,
    dist: Vec<Option<Cost>>,
}

impl DistanceField {
    pub fn from_source(map: &GridMap, source: Vertex) -> Self {
        let mut dist = vec![None; map.area()];
        let mut queue = VecDeque::new();
        if map.is_passable(source) {
            dist[map.index(source)] = Some(0);
            queue.push_back(source);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[map.index(v)].unwrap_or_default();
            for n in map.neighbors(v) {
                let slot = &mut dist[map.index(n)];
                if slot.is_none() {
                    *slot = Some(d + 1);
                    queue.push_back(n);
                }
            }
        }
        DistanceField { width: map.width(), dist }
    }

    /// `None` when `v` is unreachable or off the map.
    pub fn get(&self, v: Vertex) -> Option<Cost> {
        if v.col >= self.width {
            return None;
        }
        self.dist.get(v.row * self.width + v.col).copied().flatten()
    }
}

/// All-pairs shortest distances between a set of key vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    keys: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    dist: Vec<Option<Cost>>,
}

impl DistanceTable {
    pub fn keys(&self) -> &[Vertex] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Entry `(i, j)` by key position; `None` means unreachable.
    pub fn at(&self, i: usize, j: usize) -> Option<Cost> {
        self.dist[i * self.keys.len() + j]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    /// Distance between two key vertices. Panics if either is not a key.
    pub fn distance(&self, a: Vertex, b: Vertex) -> Option<Cost> {
        let i = self.index[&a];
        let j = self.index[&b];
        self.at(i, j)
    }
}

/// Shortest cardinal-move distances between every pair of `keys`.
pub fn shortest_distances(map: &GridMap, keys: &[Vertex]) -> Result<DistanceTable, WorldError> {
    let mut unique = Vec::with_capacity(keys.len());
    let mut index = HashMap::new();
    for &k in keys {
        if !map.in_bounds(k) {
            return Err(WorldError::OutOfBounds(k));
        }
        if map.is_blocked(k) {
            return Err(WorldError::Blocked(k));
        }
        index.entry(k).or_insert_with(|| {
            unique.push(k);
            unique.len() - 1
        });
    }
    let n = unique.len();
    let mut dist = vec![None; n * n];
    for (i, &src) in unique.iter().enumerate() {
        let field = DistanceField::from_source(map, src);
        for (j, &dst) in unique.iter().enumerate() {
            dist[i * n + j] = field.get(dst);
        }
    }
    Ok(DistanceTable { keys: unique, index, dist })
}
