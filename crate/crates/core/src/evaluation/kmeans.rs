//! Lloyd's k-means with D² (k-means++) seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seed::derive_seed;

pub const MAX_ITERS: usize = 300;
pub const SHIFT_TOL: f64 = 1e-6;
pub const RESTARTS: u64 = 10;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_centers(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centers = vec![points[first].clone()];
    let mut dist: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = dist.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in dist.iter().enumerate() {
                acc += d;
                if d > 0.0 && target < acc {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| dist.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            // every point coincides with a center: take any unused one
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[next] = true;
        centers.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            dist[i] = dist[i].min(sq_dist(p, &points[next]));
        }
    }
    centers
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub inertia: f64,
    pub iterations: usize,
}

pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansFit> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} with {n} rows"
        )));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidParameter("rows differ in length".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_centers(points, k, &mut rng);
    let mut labels = vec![0; n];
    let mut iterations = 0;
    for _ in 0..MAX_ITERS {
        iterations += 1;
        for (i, p) in points.iter().enumerate() {
            labels[i] = nearest(p, &centers).0;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&labels) {
            counts[c] += 1;
            sums[c].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            let next = if counts[c] > 0 {
                sums[c].iter().map(|s| s / counts[c] as f64).collect()
            } else {
                // empty cluster: restart it on the point worst served
                let far = (0..n)
                    .max_by(|&a, &b| {
                        nearest(&points[a], &centers)
                            .1
                            .total_cmp(&nearest(&points[b], &centers).1)
                            .then(b.cmp(&a))
                    })
                    .unwrap();
                points[far].clone()
            };
            shift = shift.max(sq_dist(&next, &centers[c]).sqrt());
            centers[c] = next;
        }
        if shift < SHIFT_TOL {
            break;
        }
    }
    let mut inertia = 0.0;
    for (i, p) in points.iter().enumerate() {
        let (c, d) = nearest(p, &centers);
        labels[i] = c;
        inertia += d;
    }
    Ok(KMeansFit {
        labels,
        centers,
        inertia,
        iterations,
    })
}

/// Labels of the lowest-inertia fit among [`RESTARTS`] seeded restarts.
pub fn kmeans_baseline(points: &[Vec<f64>], k: usize, seed: u64) -> Result<Vec<usize>> {
    let mut best: Option<KMeansFit> = None;
    for restart in 0..RESTARTS {
        let fit = kmeans(points, k, derive_seed(&[seed, restart]))?;
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart").labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks() -> Vec<Vec<f64>> {
        let mut rows = Vec::new();
        for i in 0..5 {
            let mut r = vec![0.0; 6];
            r[i % 3] = 1.0;
            r[(i + 1) % 3] = 1.0;
            rows.push(r);
        }
        for i in 0..4 {
            let mut r = vec![0.0; 6];
            r[3 + i % 3] = 1.0;
            rows.push(r);
        }
        rows
    }

    #[test]
    fn separated_blocks() {
        let labels = kmeans_baseline(&blocks(), 2, 11).unwrap();
        assert!(labels[..5].iter().all(|&l| l == labels[0]));
        assert!(labels[5..].iter().all(|&l| l == labels[5]));
        assert_ne!(labels[0], labels[5]);
    }

    #[test]
    fn one_cluster_per_row() {
        let rows = blocks();
        let mut labels = kmeans_baseline(&rows, rows.len(), 3).unwrap();
        labels.sort_unstable();
        labels.dedup();
        // duplicate rows exist in `blocks`, so count distinct rows instead
        let mut distinct = rows.clone();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        assert_eq!(labels.len(), distinct.len());
        let unique = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let mut l = kmeans_baseline(&unique, 4, 0).unwrap();
        l.sort_unstable();
        assert_eq!(l, vec![0, 1, 2, 3]);
    }

    #[test]
    fn identical_rows() {
        let rows = vec![vec![1.0, 0.0, 1.0]; 6];
        let a = kmeans(&rows, 2, 5).unwrap();
        let b = kmeans(&rows, 2, 5).unwrap();
        assert_eq!(a.inertia, 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn too_many_clusters() {
        assert!(kmeans_baseline(&[vec![0.0]], 2, 0).is_err());
    }
}
