//! Small built-in datasets used by tests, examples and the CLI demo.

use crate::corpus::{AmbiguitySpec, CollaborationGraph, MentionGroup, PaperRecord};

/// Ten-paper toy database with six "Kim" mentions.
pub fn toy_corpus() -> Vec<PaperRecord> {
    let papers: [&[&str]; 10] = [
        &["Kim", "Rocha", "Simas"],
        &["Kim", "Xu", "Abe"],
        &["Kim", "Xu", "Lind"],
        &["Kim", "Hou", "Xu"],
        &["Kim", "Rocha"],
        &["Kim", "Kong"],
        &["Simas", "Hou"],
        &["Kong", "Shi"],
        &["Shi", "Kong"],
        &["Lind", "Xu", "Shi"],
    ];
    papers
        .iter()
        .enumerate()
        .map(|(i, authors)| PaperRecord::new((i + 1).to_string(), authors.iter()).unwrap())
        .collect()
}

/// "Kim" grouped into four nodes: papers {1,5}, {2}, {3,4}, {6}.
pub fn toy_ambiguity() -> AmbiguitySpec {
    let groups = [("1", "g1"), ("5", "g1"), ("2", "g2"), ("3", "g3"), ("4", "g3"), ("6", "g4")];
    let mut spec = AmbiguitySpec::default();
    spec.names.insert(
        "Kim".into(),
        groups
            .iter()
            .map(|(p, g)| MentionGroup {
                paper_id: p.to_string(),
                group: g.to_string(),
            })
            .collect(),
    );
    spec
}

/// Edges of the 15-node, three-community demo network, 1-based.
///
/// Reconstructed from a drawing: nodes 1–4, 5–10 and 11–15 form the
/// communities, joined by three bridge edges.
pub const DEMO_EDGES: [(usize, usize); 27] = [
    // 1..=4
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
    // 5..=10
    (5, 6),
    (5, 7),
    (5, 8),
    (6, 7),
    (6, 8),
    (7, 9),
    (7, 10),
    (8, 9),
    (8, 10),
    (9, 10),
    // 11..=15
    (11, 12),
    (11, 13),
    (11, 14),
    (12, 13),
    (12, 14),
    (13, 14),
    (13, 15),
    (14, 15),
    // bridges
    (4, 5),
    (10, 11),
    (3, 12),
];

/// Community of each demo node (0-based node index → class 0, 1 or 2).
pub fn demo_classes() -> Vec<usize> {
    (1..=15)
        .map(|n| match n {
            1..=4 => 0,
            5..=10 => 1,
            _ => 2,
        })
        .collect()
}

pub fn demo_network() -> CollaborationGraph {
    let labels = (1..=15).map(|i| i.to_string()).collect();
    CollaborationGraph::from_edges(
        labels,
        vec![true; 15],
        DEMO_EDGES.iter().map(|&(a, b)| (a - 1, b - 1, 1.0)),
    )
    .expect("demo edges are valid")
}
