use std::collections::{BTreeMap, BTreeSet};

use homonym::competition::{domination_levels, init_state, run, step, Adjacency, CompetitionParams};
use homonym::corpus::{build_collaboration_graph, expand_mentions, CollaborationGraph, PaperRecord};
use homonym::evaluation::{
    kmeans_baseline, modularity, modularity_greedy_baseline, pairwise_scores, PartitionPair,
};
use homonym::similarity::{
    forward_variables, passage_row, sparsify, RowStochasticMatrix, SimilarityMatrix, Sparsify,
};
use proptest::prelude::*;

const POOL: [&str; 8] = ["Ahn", "Bose", "Cruz", "Dias", "Egan", "Fry", "Gil", "Hahn"];

fn corpus() -> impl Strategy<Value = Vec<Vec<&'static str>>> {
    prop::collection::vec(prop::sample::subsequence(POOL.to_vec(), 1..=5), 1..12)
}

fn records(papers: &[Vec<&str>], offset: usize) -> Vec<PaperRecord> {
    papers
        .iter()
        .enumerate()
        .map(|(i, authors)| PaperRecord::new(format!("p{}", i + offset), authors).unwrap())
        .collect()
}

fn graph(records: &[PaperRecord]) -> CollaborationGraph {
    let registry = expand_mentions(records, &BTreeSet::new(), None).unwrap();
    build_collaboration_graph(records, &registry).unwrap()
}

fn weights_by_label(g: &CollaborationGraph) -> BTreeMap<(String, String), f64> {
    g.edges()
        .map(|(i, j, w)| {
            let (a, b) = (g.label(i).to_string(), g.label(j).to_string());
            (if a < b { (a, b) } else { (b, a) }, w)
        })
        .collect()
}

fn stochastic() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..9).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), n).prop_map(|mut rows| {
            for (i, row) in rows.iter_mut().enumerate() {
                let len = row.len();
                row[(i + 1) % len] += 0.1;
                let s: f64 = row.iter().sum();
                row.iter_mut().for_each(|x| *x /= s);
            }
            rows
        })
    })
}

fn labelled_pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (2usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(0usize..5, n),
            prop::collection::vec(0usize..5, n),
        )
    })
}

fn symmetric_weights() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (3usize..12).prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.4, 0.1f64..2.0), n * n).prop_map(move |cells| {
            let mut w = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = cells[i * n + j].unwrap_or(0.0);
                    w[i][j] = v;
                    w[j][i] = v;
                }
            }
            w
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn collaboration_weights_are_symmetric(papers in corpus()) {
        let g = graph(&records(&papers, 0));
        for i in 0..g.node_count() {
            for j in 0..g.node_count() {
                prop_assert_eq!(g.weight(i, j), g.weight(j, i));
            }
        }
    }

    #[test]
    fn strength_counts_each_paper_once(papers in corpus()) {
        let recs = records(&papers, 0);
        let g = graph(&recs);
        for i in 0..g.node_count() {
            let expected: f64 = recs
                .iter()
                .filter(|r| r.authors.iter().any(|a| a == g.label(i)))
                .map(|r| (r.authors.len() - 1) as f64 / r.authors.len() as f64)
                .sum();
            prop_assert!((g.strength(i) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_add_over_disjoint_corpora(a in corpus(), b in corpus()) {
        let ra = records(&a, 0);
        let rb = records(&b, 1000);
        let both: Vec<PaperRecord> = ra.iter().chain(&rb).cloned().collect();
        let wa = weights_by_label(&graph(&ra));
        let wb = weights_by_label(&graph(&rb));
        let wab = weights_by_label(&graph(&both));
        for (key, w) in &wab {
            let sum = wa.get(key).unwrap_or(&0.0) + wb.get(key).unwrap_or(&0.0);
            prop_assert!((w - sum).abs() < 1e-12);
        }
        prop_assert_eq!(wab.len(), wa.keys().chain(wb.keys()).collect::<BTreeSet<_>>().len());
    }

    #[test]
    fn duplicated_corpus_doubles_weights(papers in corpus()) {
        let once = records(&papers, 0);
        let twice: Vec<PaperRecord> = once.iter().cloned().chain(records(&papers, 1000)).collect();
        let w1 = weights_by_label(&graph(&once));
        let w2 = weights_by_label(&graph(&twice));
        prop_assert_eq!(w1.len(), w2.len());
        for (key, w) in &w1 {
            prop_assert!((w2[key] - 2.0 * w).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_variables_are_distributions(rows in stochastic(), l in 1usize..20) {
        let p = RowStochasticMatrix::from_dense(&rows).unwrap();
        for source in 0..p.dim() {
            let table = forward_variables(&p, source, l).unwrap();
            for t in 1..=l {
                let s: f64 = table.at_step(t).iter().sum();
                prop_assert!((s - 1.0).abs() < 1e-12);
                prop_assert!(table.at_step(t).iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn passage_rows_total_r_times_l(rows in stochastic(), l in 1usize..20, r in 1usize..50) {
        let p = RowStochasticMatrix::from_dense(&rows).unwrap();
        for source in 0..p.dim() {
            let s: f64 = passage_row(&p, source, l, r).unwrap().iter().sum();
            prop_assert!((s - (r * l) as f64).abs() < 1e-9 * (r * l) as f64);
        }
    }

    #[test]
    fn sparsified_matrices_stay_symmetric(w in symmetric_weights(), k in 1usize..5, tau in 0.0f64..1.5) {
        let a = SimilarityMatrix::from_dense(&w, 1, 1).unwrap();
        for mode in [Sparsify::Knn(k), Sparsify::Threshold(tau)] {
            let out = sparsify(&a, mode).unwrap().matrix;
            prop_assert!(out.is_symmetric());
            for i in 0..out.dim() {
                for j in 0..out.dim() {
                    let v = out.get(i, j);
                    prop_assert!(v == 0.0 || v == a.get(i, j));
                }
            }
        }
    }

    #[test]
    fn scores_swap_with_the_partitions((pred, truth) in labelled_pair()) {
        let pair = PartitionPair::new(&pred, &truth).unwrap();
        let s = pairwise_scores(&pair).unwrap();
        let t = pairwise_scores(&pair.swapped()).unwrap();
        prop_assert_eq!(s.precision, t.recall);
        prop_assert_eq!(s.recall, t.precision);
        prop_assert!((s.f - t.f).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&s.f));
    }

    #[test]
    fn scores_ignore_label_names((pred, truth) in labelled_pair(), shift in 1usize..100) {
        let renamed: Vec<usize> = pred.iter().map(|&x| (4 - x) * 7 + shift).collect();
        let a = pairwise_scores(&PartitionPair::new(&pred, &truth).unwrap()).unwrap();
        let b = pairwise_scores(&PartitionPair::new(&renamed, &truth).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        let identical = pairwise_scores(&PartitionPair::new(&truth, &truth).unwrap()).unwrap();
        prop_assert_eq!(identical.f, 1.0);
    }

    #[test]
    fn baselines_are_deterministic(w in symmetric_weights(), seed in any::<u64>(), k in 1usize..4) {
        let first = kmeans_baseline(&w, k, seed).unwrap();
        prop_assert_eq!(&first, &kmeans_baseline(&w, k, seed).unwrap());
        prop_assert!(first.iter().all(|&c| c < k));
        let greedy = modularity_greedy_baseline(&w).unwrap();
        prop_assert_eq!(&greedy, &modularity_greedy_baseline(&w).unwrap());
        prop_assert!(modularity(&w, &greedy) >= modularity(&w, &vec![0; w.len()]) - 1e-12);
    }

    #[test]
    fn competition_conserves_visits(
        w in symmetric_weights(),
        seed in any::<u64>(),
        k in 1usize..4,
        lambda in 0.0f64..=1.0,
    ) {
        let adjacency = Adjacency::from_dense(&w).unwrap().with_isolated_self_loops();
        let params = CompetitionParams {
            particles: k,
            lambda,
            max_iters: 300,
            conv_tol: 0.0,
            seed,
            ..CompetitionParams::default()
        };
        let mut state = init_state(&adjacency, &params).unwrap();
        let start = state.visits().total();
        for t in 1..=300u64 {
            step(&mut state, &adjacency, &params).unwrap();
            prop_assert_eq!(state.visits().total(), start + t * k as u64);
            prop_assert!(state.energy().iter().all(|&e| (params.omega_min..=params.omega_max).contains(&e)));
        }
        let dom = domination_levels(state.visits());
        for i in 0..dom.nodes() {
            prop_assert!((dom.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        prop_assert_eq!(run(&adjacency, &params, None).unwrap().final_state, state);
    }
}
