//! Scoring, significance testing, baselines and synthetic benchmarks.

mod features;
mod kmeans;
mod modularity;
mod report;
mod scores;
mod significance;
mod synth;

pub use features::{neighbor_features, NeighborFeatureMatrix};
pub use kmeans::{kmeans, kmeans_baseline, KMeansFit};
pub use modularity::{modularity, modularity_greedy_baseline};
pub use report::{aggregate, mean_std, write_aggregate, write_records, AggregateRow, ScoreRecord};
pub use scores::{pairwise_scores, PartitionPair, ScoreReport};
pub use significance::sign_test_pvalue;
pub use synth::{synth_ambiguity_benchmark, MentionTruth, SynthBenchmark, SynthSpec, AMBIGUOUS_NAME};
