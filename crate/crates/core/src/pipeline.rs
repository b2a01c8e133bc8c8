//! End-to-end disambiguation: corpus to mention clusters.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::competition::{run, Adjacency, ClusterAssignment, CompetitionParams};
use crate::corpus::{
    build_collaboration_graph, expand_mentions, AmbiguitySpec, CollaborationGraph, NodeRegistry,
    PaperRecord,
};
use crate::error::{Error, Result};
use crate::derive_seed;
use crate::evaluation::{
    kmeans_baseline, modularity_greedy_baseline, neighbor_features, pairwise_scores, MentionTruth,
    PartitionPair, ScoreReport, SynthBenchmark,
};
use crate::similarity::{
    normalize_transition, reduced_passage_similarity, sparsify, SimilarityMatrix, Sparsify,
};

pub const DEFAULT_WALK_LENGTH: usize = 5;
pub const DEFAULT_SPARSIFY: Sparsify = Sparsify::Knn(5);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub walk_length: usize,
    pub repetitions: usize,
    #[serde(with = "sparsify_text")]
    pub sparsify: Sparsify,
    pub competition: CompetitionParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            walk_length: DEFAULT_WALK_LENGTH,
            repetitions: 1,
            sparsify: DEFAULT_SPARSIFY,
            competition: CompetitionParams::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walk_length == 0 || self.repetitions == 0 {
            return Err(Error::InvalidParameter(
                "walk length and repetitions must be at least 1".into(),
            ));
        }
        self.competition.validate()
    }
}

mod sparsify_text {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::similarity::Sparsify;

    pub fn serialize<S: Serializer>(mode: &Sparsify, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(mode)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sparsify, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Registry and co-authorship graph for a corpus.
pub fn build_network(
    records: &[PaperRecord],
    ambiguity: &AmbiguitySpec,
) -> Result<(NodeRegistry, CollaborationGraph)> {
    let registry = expand_mentions(
        records,
        &ambiguity.ambiguous_names(),
        ambiguity.grouping().as_ref(),
    )?;
    let graph = build_collaboration_graph(records, &registry)?;
    Ok((registry, graph))
}

/// Similarity network over the ambiguous nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedNetwork {
    /// Graph node behind each reduced index.
    pub nodes: Vec<usize>,
    pub similarity: SimilarityMatrix,
    pub components: usize,
    pub adjacency: Adjacency,
}

pub fn reduced_network(graph: &CollaborationGraph, config: &PipelineConfig) -> Result<ReducedNetwork> {
    config.validate()?;
    let p = normalize_transition(graph);
    let reduced = reduced_passage_similarity(
        &p,
        graph.ambiguous_mask(),
        config.walk_length,
        config.repetitions,
    )?;
    let outcome = sparsify(&reduced, config.sparsify)?;
    if outcome.components > 1 {
        log::info!(
            "similarity network has {} connected components",
            outcome.components
        );
    }
    let adjacency = Adjacency::from_similarity(&outcome.matrix)?.with_isolated_self_loops();
    Ok(ReducedNetwork {
        nodes: graph.ambiguous_nodes(),
        similarity: outcome.matrix,
        components: outcome.components,
        adjacency,
    })
}

/// Cluster assigned to one ambiguous name occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionPrediction {
    pub paper_id: String,
    pub name: String,
    pub node: String,
    pub cluster: usize,
}

/// Expands per-node cluster labels (aligned with `nodes`) to mentions.
pub fn mention_predictions(
    registry: &NodeRegistry,
    nodes: &[usize],
    labels: &[usize],
) -> Vec<MentionPrediction> {
    let mut out = Vec::new();
    for (&node, &cluster) in nodes.iter().zip(labels) {
        for paper in registry.mentions(node) {
            out.push(MentionPrediction {
                paper_id: paper.clone(),
                name: registry.base_name(node).to_string(),
                node: registry.label(node).to_string(),
                cluster,
            });
        }
    }
    out.sort_by(|a, b| (&a.paper_id, &a.name).cmp(&(&b.paper_id, &b.name)));
    out
}

/// Majority entity per node, lowest entity on ties. `None` when no mention
/// of the node has a truth entry.
pub fn node_classes(
    registry: &NodeRegistry,
    nodes: &[usize],
    truth: &[MentionTruth],
) -> Vec<Option<usize>> {
    let lookup: BTreeMap<(&str, &str), usize> = truth
        .iter()
        .map(|t| ((t.paper_id.as_str(), t.name.as_str()), t.entity))
        .collect();
    nodes
        .iter()
        .map(|&node| {
            let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
            for paper in registry.mentions(node) {
                if let Some(&e) = lookup.get(&(paper.as_str(), registry.base_name(node))) {
                    *votes.entry(e).or_default() += 1;
                }
            }
            votes
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(e, _)| e)
        })
        .collect()
}

/// Mention-level pairwise scores over the mentions present in both sets.
pub fn score_mentions(predicted: &[MentionPrediction], truth: &[MentionTruth]) -> Result<ScoreReport> {
    let truth_map: BTreeMap<(String, String), usize> = truth
        .iter()
        .map(|t| ((t.paper_id.clone(), t.name.clone()), t.entity))
        .collect();
    let mut pred_map = BTreeMap::new();
    let mut true_map = BTreeMap::new();
    for m in predicted {
        let key = (m.paper_id.clone(), m.name.clone());
        if let Some(&e) = truth_map.get(&key) {
            true_map.insert(key.clone(), e);
            pred_map.insert(key, m.cluster);
        }
    }
    if pred_map.len() < truth_map.len() {
        log::warn!(
            "{} truth mentions have no prediction",
            truth_map.len() - pred_map.len()
        );
    }
    pairwise_scores(&PartitionPair::from_maps(&pred_map, &true_map)?)
}

#[derive(Debug, Clone)]
pub struct Disambiguation {
    pub registry: NodeRegistry,
    pub graph: CollaborationGraph,
    pub network: ReducedNetwork,
    pub assignment: ClusterAssignment,
    pub mentions: Vec<MentionPrediction>,
}

/// Corpus to mention clusters. With `truth`, the assignment also carries
/// the per-class domination trajectory.
pub fn disambiguate(
    records: &[PaperRecord],
    ambiguity: &AmbiguitySpec,
    config: &PipelineConfig,
    truth: Option<&[MentionTruth]>,
) -> Result<Disambiguation> {
    let (registry, graph) = build_network(records, ambiguity)?;
    let network = reduced_network(&graph, config)?;
    let classes = truth.and_then(|t| {
        let classes = node_classes(&registry, &network.nodes, t);
        let known: Option<Vec<usize>> = classes.into_iter().collect();
        if known.is_none() {
            log::warn!("some ambiguous nodes have no truth entry; trajectory disabled");
        }
        known.map(dense_classes)
    });
    let assignment = compete(&network.adjacency, &config.competition, classes.as_deref())?;
    let mentions = mention_predictions(&registry, &network.nodes, &assignment.labels);
    Ok(Disambiguation {
        registry,
        graph,
        network,
        assignment,
        mentions,
    })
}

/// [`run`], except that on a disconnected network without explicit start
/// nodes the particles are spread over the largest components first.
pub fn compete(
    adjacency: &Adjacency,
    params: &CompetitionParams,
    classes: Option<&[usize]>,
) -> Result<ClusterAssignment> {
    let mut params = params.clone();
    if params.initial_positions.is_none() && components(adjacency).iter().any(|&c| c > 0) {
        params.initial_positions =
            Some(spread_positions(adjacency, params.particles, params.seed)?);
    }
    run(adjacency, &params, classes)
}

/// Connected component of every node, numbered by first appearance.
pub fn components(adjacency: &Adjacency) -> Vec<usize> {
    let n = adjacency.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &(j, _) in adjacency.row(i) {
                if comp[j] == usize::MAX {
                    comp[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Start nodes for `k` particles on a possibly disconnected network: one
/// particle in each of the `k` largest components (ties to the earlier
/// component), the rest anywhere else, all uniformly and without
/// replacement.
pub fn spread_positions(adjacency: &Adjacency, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = adjacency.node_count();
    if k > n {
        return Err(Error::TooManyParticles { k, nodes: n });
    }
    let comp = components(adjacency);
    let count = comp.iter().max().map_or(0, |&c| c + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (node, &c) in comp.iter().enumerate() {
        members[c].push(node);
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| members[b].len().cmp(&members[a].len()).then(a.cmp(&b)));

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, 0x5eed]));
    let mut taken = vec![false; n];
    let mut positions = Vec::with_capacity(k);
    for &c in order.iter().take(k) {
        let node = *members[c].choose(&mut rng).expect("components are non-empty");
        taken[node] = true;
        positions.push(node);
    }
    let mut rest: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
    rest.shuffle(&mut rng);
    positions.extend(rest.into_iter().take(k - positions.len()));
    Ok(positions)
}

pub fn dense_classes(classes: Vec<usize>) -> Vec<usize> {
    let mut ids: Vec<usize> = classes.clone();
    ids.sort_unstable();
    ids.dedup();
    classes
        .iter()
        .map(|c| ids.binary_search(c).unwrap())
        .collect()
}

pub const METHOD_PARTICLES: &str = "particles";
pub const METHOD_KMEANS: &str = "kmeans";
pub const METHOD_MODULARITY: &str = "modularity";

/// K-means on binary collaborator vectors of the ambiguous nodes.
pub fn kmeans_predictions(
    registry: &NodeRegistry,
    graph: &CollaborationGraph,
    k: usize,
    seed: u64,
) -> Result<Vec<MentionPrediction>> {
    let features = neighbor_features(graph);
    let labels = kmeans_baseline(&features.to_f64(), k, seed)?;
    Ok(mention_predictions(registry, &features.rows, &labels))
}

/// Greedy modularity on the shared-collaborator graph of the ambiguous nodes.
pub fn modularity_predictions(
    registry: &NodeRegistry,
    graph: &CollaborationGraph,
) -> Result<Vec<MentionPrediction>> {
    let features = neighbor_features(graph);
    let labels = modularity_greedy_baseline(&features.overlap_graph())?;
    Ok(mention_predictions(registry, &features.rows, &labels))
}

/// Scores of every method on one synthetic benchmark, all asked for `k`
/// clusters (modularity picks its own count).
pub fn evaluate_benchmark(
    bench: &SynthBenchmark,
    k: usize,
    config: &PipelineConfig,
) -> Result<Vec<(&'static str, ScoreReport)>> {
    let mut config = config.clone();
    config.competition.particles = k;
    let result = disambiguate(&bench.records, &bench.ambiguity(), &config, None)?;
    let seed = config.competition.seed;
    let kmeans = kmeans_predictions(&result.registry, &result.graph, k, seed)?;
    let modularity = modularity_predictions(&result.registry, &result.graph)?;
    Ok(vec![
        (METHOD_PARTICLES, score_mentions(&result.mentions, &bench.truth)?),
        (METHOD_KMEANS, score_mentions(&kmeans, &bench.truth)?),
        (METHOD_MODULARITY, score_mentions(&modularity, &bench.truth)?),
    ])
}
