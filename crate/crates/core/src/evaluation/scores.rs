use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Predicted clusters and true entities over the same nodes, as dense ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPair {
    predicted: Vec<usize>,
    truth: Vec<usize>,
}

fn dense_ids<T: Eq + Hash + Clone>(labels: impl IntoIterator<Item = T>) -> Vec<usize> {
    let mut ids = HashMap::new();
    labels
        .into_iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect()
}

impl PartitionPair {
    /// Index-aligned labels.
    pub fn new<P, T>(predicted: &[P], truth: &[T]) -> Result<Self>
    where
        P: Eq + Hash + Clone,
        T: Eq + Hash + Clone,
    {
        if predicted.len() != truth.len() {
            return Err(Error::MismatchedPartitions);
        }
        Ok(PartitionPair {
            predicted: dense_ids(predicted.iter().cloned()),
            truth: dense_ids(truth.iter().cloned()),
        })
    }

    /// Keyed labels; both maps must cover the same keys.
    pub fn from_maps<K, P, T>(predicted: &BTreeMap<K, P>, truth: &BTreeMap<K, T>) -> Result<Self>
    where
        K: Ord,
        P: Eq + Hash + Clone,
        T: Eq + Hash + Clone,
    {
        if predicted.len() != truth.len() || !predicted.keys().eq(truth.keys()) {
            return Err(Error::MismatchedPartitions);
        }
        Ok(PartitionPair {
            predicted: dense_ids(predicted.values().cloned()),
            truth: dense_ids(truth.values().cloned()),
        })
    }

    pub fn len(&self) -> usize {
        self.predicted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicted.is_empty()
    }

    pub fn swapped(&self) -> Self {
        PartitionPair {
            predicted: self.truth.clone(),
            truth: self.predicted.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Pair-counting precision, recall and f-measure.
///
/// A pair is positive when both nodes share a cluster. Empty denominators
/// score 1 for precision and recall; f is 0 when both are 0.
pub fn pairwise_scores(pair: &PartitionPair) -> Result<ScoreReport> {
    if pair.len() < 2 {
        return Err(Error::InvalidParameter(
            "pairwise scores need at least two nodes".into(),
        ));
    }
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut pred_sizes: HashMap<usize, u64> = HashMap::new();
    let mut truth_sizes: HashMap<usize, u64> = HashMap::new();
    for (&p, &t) in pair.predicted.iter().zip(&pair.truth) {
        *joint.entry((p, t)).or_default() += 1;
        *pred_sizes.entry(p).or_default() += 1;
        *truth_sizes.entry(t).or_default() += 1;
    }
    let tp: u64 = joint.values().map(|&n| pairs(n)).sum();
    let predicted_pairs: u64 = pred_sizes.values().map(|&n| pairs(n)).sum();
    let true_pairs: u64 = truth_sizes.values().map(|&n| pairs(n)).sum();
    let fp = predicted_pairs - tp;
    let fn_ = true_pairs - tp;

    let precision = if predicted_pairs == 0 {
        1.0
    } else {
        tp as f64 / predicted_pairs as f64
    };
    let recall = if true_pairs == 0 {
        1.0
    } else {
        tp as f64 / true_pairs as f64
    };
    let f = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(ScoreReport {
        precision,
        recall,
        f,
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
    })
}
