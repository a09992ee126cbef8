//! Neighbor bookkeeping over a function's ON-set.
//!
//! For every ON coordinate the index stores its ON neighbors and, implicitly,
//! their count. The worklist orders all ON coordinates by ascending neighbor
//! count (ties by ascending coordinate); the minimizer walks it so that the
//! most constrained elements pick their cubes first.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{neighbors, Coordinate, TruthFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjacencyError {
    #[error("coordinate {0} is not in the ON-set")]
    NotInOnSet(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyIndex {
    n: u32,
    on_neighbors: HashMap<Coordinate, Vec<Coordinate>>,
    worklist: Vec<Coordinate>,
}

impl AdjacencyIndex {
    /// Builds the index in one pass. Neighbor lists keep the flip order of
    /// `neighbors`, so entries appear by flipped-variable index.
    pub fn build(f: &TruthFunction) -> Self {
        let n = f.dimension();
        let mut on_neighbors = HashMap::with_capacity(f.on_count());
        for &c in f.on_set() {
            let ne: Vec<Coordinate> =
                neighbors(c, n).into_iter().filter(|&b| f.contains(b)).collect();
            on_neighbors.insert(c, ne);
        }
        let mut worklist: Vec<Coordinate> = f.on_set().to_vec();
        worklist.sort_by_key(|c| (on_neighbors[c].len(), *c));
        AdjacencyIndex { n, on_neighbors, worklist }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.worklist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worklist.is_empty()
    }

    /// True when `c` is an ON coordinate of the indexed function.
    pub fn contains(&self, c: Coordinate) -> bool {
        self.on_neighbors.contains_key(&c)
    }

    /// ON neighbors of an ON coordinate, ordered by flipped-variable index.
    pub fn on_neighbors(&self, c: Coordinate) -> Result<&[Coordinate], AdjacencyError> {
        self.on_neighbors
            .get(&c)
            .map(Vec::as_slice)
            .ok_or(AdjacencyError::NotInOnSet(c.bits()))
    }

    /// Number of ON neighbors of an ON coordinate.
    pub fn neighbor_count(&self, c: Coordinate) -> Result<u32, AdjacencyError> {
        self.on_neighbors(c).map(|ne| ne.len() as u32)
    }

    /// All ON coordinates, ascending by (neighbor count, coordinate).
    pub fn worklist(&self) -> &[Coordinate] {
        &self.worklist
    }
}
