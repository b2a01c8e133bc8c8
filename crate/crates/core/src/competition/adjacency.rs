use serde::{Deserialize, Serialize};

use crate::corpus::CollaborationGraph;
use crate::error::{Error, Result};
use crate::similarity::SimilarityMatrix;

/// Weighted adjacency the particles walk on. Rows hold `(neighbor, weight)`
/// with positive weights, sorted by neighbor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adjacency {
    rows: Vec<Vec<(usize, f64)>>,
    strength: Vec<f64>,
}

impl Adjacency {
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        let mut clean = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            let mut row: Vec<(usize, f64)> = row.into_iter().filter(|&(_, w)| w != 0.0).collect();
            for &(j, w) in &row {
                if j >= n {
                    return Err(Error::InvalidParameter(format!(
                        "node {i} links to {j} outside 0..{n}"
                    )));
                }
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::Numerical(format!("a({i}, {j}) = {w}")));
                }
            }
            row.sort_by_key(|&(j, _)| j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidParameter(format!("node {i} has repeated neighbors")));
            }
            clean.push(row);
        }
        let strength = clean.iter().map(|r| r.iter().map(|&(_, w)| w).sum()).collect();
        Ok(Adjacency {
            rows: clean,
            strength,
        })
    }

    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            dense
                .iter()
                .map(|row| row.iter().copied().enumerate().collect())
                .collect(),
        )
    }

    pub fn from_similarity(matrix: &SimilarityMatrix) -> Result<Self> {
        Self::from_dense(&matrix.to_dense())
    }

    pub fn from_graph(graph: &CollaborationGraph) -> Self {
        let rows = (0..graph.node_count())
            .map(|i| graph.neighbors(i).collect())
            .collect();
        Self::from_rows(rows).expect("collaboration graphs have valid weights")
    }

    /// Gives every node without outgoing weight a unit self-loop.
    pub fn with_isolated_self_loops(mut self) -> Self {
        for i in 0..self.rows.len() {
            if self.rows[i].is_empty() {
                self.rows[i].push((i, 1.0));
                self.strength[i] = 1.0;
            }
        }
        self
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn strength(&self, i: usize) -> f64 {
        self.strength[i]
    }

    pub fn isolated_nodes(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].is_empty()).collect()
    }
}
