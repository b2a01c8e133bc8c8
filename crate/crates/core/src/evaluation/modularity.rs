//! Greedy agglomerative modularity maximisation (Clauset–Newman–Moore
//! merge rule, dense bookkeeping).

use crate::error::{Error, Result};

const GAIN_EPS: f64 = 1e-12;

/// Merges the pair of connected communities with the largest modularity
/// gain until no merge gains anything. Ties go to the lowest pair of ids.
/// Labels are renumbered in order of first appearance.
pub fn modularity_greedy_baseline(weights: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = weights.len();
    if weights.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("weight matrix is not square".into()));
    }
    for (i, row) in weights.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) || (w - weights[j][i]).abs() > 1e-9 * w.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "weights must be symmetric and non-negative at ({i}, {j})"
                )));
            }
        }
    }
    let total: f64 = weights.iter().flatten().sum();
    let mut community: Vec<usize> = (0..n).collect();
    if total <= 0.0 {
        return Ok(community);
    }

    // e[c][d]: fraction of edge ends between c and d; a[c] = Σ_d e[c][d]
    let mut e: Vec<Vec<f64>> = weights
        .iter()
        .map(|r| r.iter().map(|w| w / total).collect())
        .collect();
    let mut a: Vec<f64> = e.iter().map(|r| r.iter().sum()).collect();
    let mut alive = vec![true; n];

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for c in 0..n {
            if !alive[c] {
                continue;
            }
            for d in c + 1..n {
                if !alive[d] || e[c][d] <= 0.0 {
                    continue;
                }
                let gain = 2.0 * (e[c][d] - a[c] * a[d]);
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, c, d));
                }
            }
        }
        let Some((gain, c, d)) = best else { break };
        if gain <= GAIN_EPS {
            break;
        }
        for x in 0..n {
            e[c][x] += e[d][x];
        }
        for x in 0..n {
            e[x][c] += e[x][d];
        }
        // the d row/column is dead; keep c's self term consistent
        for x in 0..n {
            e[d][x] = 0.0;
            e[x][d] = 0.0;
        }
        a[c] += a[d];
        a[d] = 0.0;
        alive[d] = false;
        for label in community.iter_mut() {
            if *label == d {
                *label = c;
            }
        }
    }

    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    Ok(community
        .into_iter()
        .map(|c| {
            if remap[c] == usize::MAX {
                remap[c] = next;
                next += 1;
            }
            remap[c]
        })
        .collect())
}

/// Weighted modularity of a labelling.
pub fn modularity(weights: &[Vec<f64>], labels: &[usize]) -> f64 {
    let total: f64 = weights.iter().flatten().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let strength: Vec<f64> = weights.iter().map(|r| r.iter().sum()).collect();
    let mut q = 0.0;
    for i in 0..weights.len() {
        for j in 0..weights.len() {
            if labels[i] == labels[j] {
                q += weights[i][j] - strength[i] * strength[j] / total;
            }
        }
    }
    q / total
}
