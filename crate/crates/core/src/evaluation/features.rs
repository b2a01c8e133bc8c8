use crate::corpus::CollaborationGraph;

/// Binary "has collaborated with" vectors: one row per ambiguous node, one
/// column per non-ambiguous node adjacent to at least one ambiguous node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborFeatureMatrix {
    /// Graph node of each row.
    pub rows: Vec<usize>,
    /// Graph node of each column.
    pub columns: Vec<usize>,
    pub values: Vec<Vec<u8>>,
}

impl NeighborFeatureMatrix {
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|r| r.iter().map(|&v| f64::from(v)).collect())
            .collect()
    }

    /// Shared-collaborator counts between rows, zero diagonal.
    pub fn overlap_graph(&self) -> Vec<Vec<f64>> {
        let n = self.values.len();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let shared = self.values[i]
                    .iter()
                    .zip(&self.values[j])
                    .filter(|(a, b)| **a == 1 && **b == 1)
                    .count() as f64;
                out[i][j] = shared;
                out[j][i] = shared;
            }
        }
        out
    }
}

pub fn neighbor_features(graph: &CollaborationGraph) -> NeighborFeatureMatrix {
    let rows = graph.ambiguous_nodes();
    let mut is_column = vec![false; graph.node_count()];
    for &a in &rows {
        for (j, w) in graph.neighbors(a) {
            if w > 0.0 && !graph.is_ambiguous(j) {
                is_column[j] = true;
            }
        }
    }
    let columns: Vec<usize> = (0..graph.node_count()).filter(|&j| is_column[j]).collect();
    let values = rows
        .iter()
        .map(|&a| {
            columns
                .iter()
                .map(|&c| u8::from(graph.weight(a, c) > 0.0))
                .collect()
        })
        .collect();
    NeighborFeatureMatrix {
        rows,
        columns,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_collaboration_graph, expand_mentions};
    use crate::fixtures;

    #[test]
    fn kim_four_only_knows_kong() {
        let records = fixtures::toy_corpus();
        let spec = fixtures::toy_ambiguity();
        let reg =
            expand_mentions(&records, &spec.ambiguous_names(), spec.grouping().as_ref()).unwrap();
        let g = build_collaboration_graph(&records, &reg).unwrap();
        let f = neighbor_features(&g);
        assert_eq!(f.rows.len(), 4);
        let kim4 = f.rows.iter().position(|&r| g.label(r) == "Kim 4").unwrap();
        let ones: Vec<&str> = f.columns
            .iter()
            .zip(&f.values[kim4])
            .filter(|(_, &v)| v == 1)
            .map(|(&c, _)| g.label(c))
            .collect();
        assert_eq!(ones, ["Kong"]);
    }

    #[test]
    fn isolated_ambiguous_node_has_zero_row() {
        let g = CollaborationGraph::from_edges(
            vec!["A 1".into(), "A 2".into(), "B".into()],
            vec![true, true, false],
            [(1, 2, 1.0)],
        )
        .unwrap();
        let f = neighbor_features(&g);
        assert_eq!(f.values, vec![vec![0], vec![1]]);
    }
}
