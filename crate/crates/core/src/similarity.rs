//! Truncated passage-time similarity.
//!
//! A walk of length `l` starting at `v_s` is repeated `r` times; the weight
//! `A(v_s, v_e)` is the expected number of visits paid to `v_e` over steps
//! `1..=l`. The expectation is computed exactly with forward variables
//! (`α(·, t) = α(·, t-1) P`), and a Monte Carlo walker is kept as an
//! independent check.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::CollaborationGraph;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// Row sums must be within this of 1.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Sparse row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RowStochasticMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl RowStochasticMatrix {
    /// Rows are `(column, probability)` lists. Zero entries are dropped and
    /// columns sorted.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("transition matrix is empty".into()));
        }
        let mut clean = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
            for (j, p) in row {
                if j >= n {
                    return Err(Error::InvalidParameter(format!(
                        "row {i} references column {j} outside 0..{n}"
                    )));
                }
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::Numerical(format!("P({i}, {j}) = {p}")));
                }
                if p > 0.0 {
                    *merged.entry(j).or_insert(0.0) += p;
                }
            }
            let sum: f64 = merged.values().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Numerical(format!("row {i} sums to {sum}")));
            }
            clean.push(merged.into_iter().collect());
        }
        Ok(RowStochasticMatrix { rows: clean })
    }

    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            dense
                .iter()
                .map(|row| row.iter().copied().enumerate().collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0.0, |pos| self.rows[i][pos].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; n];
                for &(j, p) in row {
                    dense[j] = p;
                }
                dense
            })
            .collect()
    }

    /// `out = dist · P`.
    fn propagate(&self, dist: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for (i, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(j, p) in &self.rows[i] {
                out[j] += mass * p;
            }
        }
    }

    fn sample<R: Rng>(&self, from: usize, rng: &mut R) -> usize {
        sample_sparse(&self.rows[from], rng)
    }
}

fn sample_sparse<R: Rng>(row: &[(usize, f64)], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(j, p) in row {
        acc += p;
        if u < acc {
            return j;
        }
    }
    row.last().map(|&(j, _)| j).expect("stochastic rows are non-empty")
}

/// Row-normalises the collaboration weights. Isolated nodes get a self-loop.
pub fn normalize_transition(graph: &CollaborationGraph) -> RowStochasticMatrix {
    let rows = (0..graph.node_count())
        .map(|i| {
            let strength = graph.strength(i);
            if strength > 0.0 {
                graph.neighbors(i).map(|(j, w)| (j, w / strength)).collect()
            } else {
                vec![(i, 1.0)]
            }
        })
        .collect();
    RowStochasticMatrix { rows }
}

/// Forward variables `α^{v_s}(v, t)` for `t = 1..=l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTable {
    source: usize,
    values: Vec<Vec<f64>>,
}

impl ForwardTable {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// Occupancy distribution after `t` steps, `1 <= t <= horizon`.
    pub fn at_step(&self, t: usize) -> &[f64] {
        &self.values[t - 1]
    }

    pub fn get(&self, v: usize, t: usize) -> f64 {
        self.values[t - 1][v]
    }
}

pub fn forward_variables(
    p: &RowStochasticMatrix,
    source: usize,
    walk_length: usize,
) -> Result<ForwardTable> {
    if walk_length == 0 {
        return Err(Error::InvalidParameter("walk length must be at least 1".into()));
    }
    check_source(p, source)?;
    let n = p.dim();
    let mut values = Vec::with_capacity(walk_length);
    let mut first = vec![0.0; n];
    for &(j, prob) in p.row(source) {
        first[j] = prob;
    }
    values.push(first);
    for t in 1..walk_length {
        let mut next = vec![0.0; n];
        p.propagate(&values[t - 1], &mut next);
        values.push(next);
    }
    Ok(ForwardTable { source, values })
}

fn check_source(p: &RowStochasticMatrix, source: usize) -> Result<()> {
    if source >= p.dim() {
        return Err(Error::InvalidParameter(format!(
            "source {source} outside 0..{}",
            p.dim()
        )));
    }
    Ok(())
}

/// Dense matrix of expected visit counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    dim: usize,
    values: Vec<f64>,
    walk_length: usize,
    repetitions: usize,
}

impl SimilarityMatrix {
    pub fn from_dense(rows: &[Vec<f64>], walk_length: usize, repetitions: usize) -> Result<Self> {
        let dim = rows.len();
        let mut values = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::Numerical(format!("row {i} has entry {bad}")));
            }
            values.extend_from_slice(row);
        }
        Ok(SimilarityMatrix {
            dim,
            values,
            walk_length,
            repetitions,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn walk_length(&self) -> usize {
        self.walk_length
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.dim + j] = v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Number of connected components when positive entries are read as
    /// undirected edges.
    pub fn component_count(&self) -> usize {
        let n = self.dim;
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if !seen[j] && (self.get(i, j) > 0.0 || self.get(j, i) > 0.0) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        components
    }

    /// `SIM <dim> <l> <r>` header, then `i\tj\tvalue` for non-zero entries.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "SIM {} {} {}", self.dim, self.walk_length, self.repetitions)?;
        for i in 0..self.dim {
            for (j, &v) in self.row(i).iter().enumerate() {
                if v != 0.0 {
                    writeln!(out, "{i}\t{j}\t{v}")?;
                }
            }
        }
        Ok(())
    }

    /// Reads the text format; entries may come in any order.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = loop {
            let Some((idx, line)) = lines.next() else {
                return Err(Error::parse(1, "missing `SIM` header"));
            };
            let line = line.map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            if !line.trim().is_empty() {
                break (idx + 1, line);
            }
        };
        let parts: Vec<&str> = header.1.split_whitespace().collect();
        let parsed = match parts.as_slice() {
            ["SIM", d, l, r] => d
                .parse::<usize>()
                .ok()
                .zip(l.parse::<usize>().ok())
                .zip(r.parse::<usize>().ok()),
            _ => None,
        };
        let ((dim, walk_length), repetitions) =
            parsed.ok_or_else(|| Error::parse(header.0, "expected `SIM <dim> <l> <r>`"))?;
        let mut matrix = SimilarityMatrix {
            dim,
            values: vec![0.0; dim * dim],
            walk_length,
            repetitions,
        };
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [i, j, v] = fields.as_slice() else {
                return Err(Error::parse(lineno, "expected `i<TAB>j<TAB>value`"));
            };
            let i: usize = i.parse().map_err(|_| Error::parse(lineno, "bad row index"))?;
            let j: usize = j.parse().map_err(|_| Error::parse(lineno, "bad column index"))?;
            let v: f64 = v.parse().map_err(|_| Error::parse(lineno, "bad value"))?;
            if i >= dim || j >= dim {
                return Err(Error::parse(lineno, format!("entry ({i}, {j}) outside 0..{dim}")));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::parse(lineno, format!("invalid value {v}")));
            }
            matrix.set(i, j, v);
        }
        Ok(matrix)
    }
}

/// Expected visit counts of `r` walks of length `l` from `source`,
/// counted at steps `1..=l`.
pub fn passage_row(
    p: &RowStochasticMatrix,
    source: usize,
    walk_length: usize,
    repetitions: usize,
) -> Result<Vec<f64>> {
    if walk_length == 0 || repetitions == 0 {
        return Err(Error::InvalidParameter(
            "walk length and repetitions must be at least 1".into(),
        ));
    }
    check_source(p, source)?;
    let n = p.dim();
    let mut alpha = vec![0.0; n];
    for &(j, prob) in p.row(source) {
        alpha[j] = prob;
    }
    let mut total = alpha.clone();
    let mut next = vec![0.0; n];
    for _ in 1..walk_length {
        p.propagate(&alpha, &mut next);
        std::mem::swap(&mut alpha, &mut next);
        total.iter_mut().zip(&alpha).for_each(|(acc, a)| *acc += a);
    }
    let scale = repetitions as f64;
    total.iter_mut().for_each(|x| *x *= scale);
    Ok(total)
}

/// Full similarity matrix; rows are computed in parallel.
pub fn passage_similarity(
    p: &RowStochasticMatrix,
    walk_length: usize,
    repetitions: usize,
) -> Result<SimilarityMatrix> {
    let rows = (0..p.dim())
        .into_par_iter()
        .map(|s| passage_row(p, s, walk_length, repetitions))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimilarityMatrix {
        dim: p.dim(),
        values: rows.concat(),
        walk_length,
        repetitions,
    })
}

/// Simulated visit counts of `r` walks from `source`. Each walk draws from
/// its own stream keyed by `(seed, source, walk index)`.
pub fn monte_carlo_passage(
    p: &RowStochasticMatrix,
    source: usize,
    walk_length: usize,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    check_source(p, source)?;
    let mut counts = vec![0u64; p.dim()];
    for walk in 0..repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, source as u64, walk as u64]));
        let mut at = source;
        for _ in 0..walk_length {
            at = p.sample(at, &mut rng);
            counts[at] += 1;
        }
    }
    Ok(counts)
}

/// Stationary distribution by power iteration from the uniform vector.
/// Expects an irreducible aperiodic chain.
pub fn stationary_distribution(
    p: &RowStochasticMatrix,
    tol: f64,
    max_iters: usize,
) -> Result<Vec<f64>> {
    let n = p.dim();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iters {
        p.propagate(&pi, &mut next);
        let diff = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if diff < tol {
            return Ok(pi);
        }
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge in {max_iters} iterations"
    )))
}

/// Keeps the rows and columns flagged in `mask` (in ascending index order),
/// averages the result with its transpose and zeroes the diagonal.
pub fn reduce_network(a: &SimilarityMatrix, mask: &[bool]) -> Result<SimilarityMatrix> {
    if mask.len() != a.dim() {
        return Err(Error::InvalidParameter(format!(
            "mask has {} entries for a {}-node matrix",
            mask.len(),
            a.dim()
        )));
    }
    let keep: Vec<usize> = (0..a.dim()).filter(|&i| mask[i]).collect();
    if keep.len() < 2 {
        return Err(Error::TooFewAmbiguous(keep.len()));
    }
    let m = keep.len();
    let mut out = SimilarityMatrix {
        dim: m,
        values: vec![0.0; m * m],
        walk_length: a.walk_length,
        repetitions: a.repetitions,
    };
    for (x, &i) in keep.iter().enumerate() {
        for (y, &j) in keep.iter().enumerate().skip(x + 1) {
            let v = (a.get(i, j) + a.get(j, i)) / 2.0;
            out.set(x, y, v);
            out.set(y, x, v);
        }
    }
    Ok(out)
}

/// Same result as `reduce_network(&passage_similarity(p, l, r)?, mask)`,
/// but only the rows of flagged sources are computed.
pub fn reduced_passage_similarity(
    p: &RowStochasticMatrix,
    mask: &[bool],
    walk_length: usize,
    repetitions: usize,
) -> Result<SimilarityMatrix> {
    if mask.len() != p.dim() {
        return Err(Error::InvalidParameter(format!(
            "mask has {} entries for a {}-node matrix",
            mask.len(),
            p.dim()
        )));
    }
    let keep: Vec<usize> = (0..p.dim()).filter(|&i| mask[i]).collect();
    if keep.len() < 2 {
        return Err(Error::TooFewAmbiguous(keep.len()));
    }
    let rows = keep
        .par_iter()
        .map(|&s| {
            passage_row(p, s, walk_length, repetitions)
                .map(|row| keep.iter().map(|&j| row[j]).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let m = keep.len();
    let mut out = SimilarityMatrix {
        dim: m,
        values: vec![0.0; m * m],
        walk_length,
        repetitions,
    };
    for x in 0..m {
        for y in x + 1..m {
            let v = (rows[x][y] + rows[y][x]) / 2.0;
            out.set(x, y, v);
            out.set(y, x, v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Sparsify {
    #[default]
    None,
    /// Zero entries below the threshold.
    Threshold(f64),
    /// Keep each row's κ largest entries, then symmetrise by max.
    Knn(usize),
}

impl std::str::FromStr for Sparsify {
    type Err = Error;

    /// `none`, `threshold:<τ>` or `knn:<κ>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad sparsify mode {s:?}"));
        match s.trim().split_once(':') {
            None if s.trim() == "none" => Ok(Sparsify::None),
            Some(("threshold", v)) => {
                let tau: f64 = v.trim().parse().map_err(|_| bad())?;
                if !(tau >= 0.0) {
                    return Err(bad());
                }
                Ok(Sparsify::Threshold(tau))
            }
            Some(("knn", v)) => {
                let k: usize = v.trim().parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(Sparsify::Knn(k))
            }
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for Sparsify {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sparsify::None => write!(f, "none"),
            Sparsify::Threshold(t) => write!(f, "threshold:{t}"),
            Sparsify::Knn(k) => write!(f, "knn:{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyOutcome {
    pub matrix: SimilarityMatrix,
    pub components: usize,
}

/// Drops weak similarities. Connectivity is reported, not enforced.
pub fn sparsify(a: &SimilarityMatrix, mode: Sparsify) -> Result<SparsifyOutcome> {
    let n = a.dim();
    let matrix = match mode {
        Sparsify::None => a.clone(),
        Sparsify::Threshold(tau) => {
            if !(tau >= 0.0) {
                return Err(Error::InvalidParameter(format!("threshold {tau} < 0")));
            }
            let mut out = a.clone();
            out.values.iter_mut().filter(|v| **v < tau).for_each(|v| *v = 0.0);
            out
        }
        Sparsify::Knn(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter("knn needs κ >= 1".into()));
            }
            if k >= n {
                log::warn!("knn κ = {k} >= dimension {n}; leaving the matrix unchanged");
                a.clone()
            } else {
                let mut kept = vec![false; n * n];
                for i in 0..n {
                    let mut order: Vec<usize> = (0..n).collect();
                    // stable sort: ties keep the lower column
                    order.sort_by(|&x, &y| a.get(i, y).total_cmp(&a.get(i, x)));
                    for &j in order.iter().take(k) {
                        kept[i * n + j] = true;
                    }
                }
                let mut out = a.clone();
                for i in 0..n {
                    for j in 0..n {
                        let lhs = if kept[i * n + j] { a.get(i, j) } else { 0.0 };
                        let rhs = if kept[j * n + i] { a.get(j, i) } else { 0.0 };
                        out.set(i, j, lhs.max(rhs));
                    }
                }
                out
            }
        }
    };
    let components = matrix.component_count();
    Ok(SparsifyOutcome { matrix, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_collaboration_graph, expand_mentions};
    use crate::fixtures;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn star_center_row_is_uniform() {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let g = CollaborationGraph::from_edges(
            labels,
            vec![false; 4],
            [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)],
        )
        .unwrap();
        let p = normalize_transition(&g);
        assert_eq!(p.to_dense()[0], vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(p.get(1, 0), 1.0);
    }

    #[test]
    fn toy_kong_row() {
        let records = fixtures::toy_corpus();
        let spec = fixtures::toy_ambiguity();
        let reg =
            expand_mentions(&records, &spec.ambiguous_names(), spec.grouping().as_ref()).unwrap();
        let g = build_collaboration_graph(&records, &reg).unwrap();
        let p = normalize_transition(&g);
        let kong = g.find("Kong").unwrap();
        let kim4 = g.find("Kim 4").unwrap();
        let shi = g.find("Shi").unwrap();
        assert!(close(p.get(kong, kim4), 1.0 / 3.0, 1e-15));
        assert!(close(p.get(kong, shi), 2.0 / 3.0, 1e-15));
        assert_eq!(p.row(kong).len(), 2);
    }

    #[test]
    fn isolated_node_self_loop() {
        let g = CollaborationGraph::empty(vec!["a".into()], vec![false]).unwrap();
        let p = normalize_transition(&g);
        assert_eq!(p.to_dense(), vec![vec![1.0]]);
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        assert!(RowStochasticMatrix::from_dense(&[vec![0.5, 0.4], vec![0.0, 1.0]]).is_err());
        assert!(RowStochasticMatrix::from_dense(&[vec![1.5, -0.5], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn first_step_is_source_row() {
        let p = RowStochasticMatrix::from_dense(&[
            vec![0.1, 0.6, 0.3],
            vec![0.5, 0.0, 0.5],
            vec![0.2, 0.2, 0.6],
        ])
        .unwrap();
        let table = forward_variables(&p, 0, 3).unwrap();
        assert_eq!(table.at_step(1), &[0.1, 0.6, 0.3]);
        assert_eq!(table.horizon(), 3);
    }

    #[test]
    fn two_cycle_alternates() {
        let p = RowStochasticMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let table = forward_variables(&p, 0, 5).unwrap();
        for t in 1..=5 {
            let expected = if t % 2 == 1 { [0.0, 1.0] } else { [1.0, 0.0] };
            assert_eq!(table.at_step(t), &expected);
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        let p = RowStochasticMatrix::from_dense(&[vec![1.0]]).unwrap();
        assert!(forward_variables(&p, 0, 0).is_err());
        assert!(passage_similarity(&p, 0, 1).is_err());
    }

    #[test]
    fn monte_carlo_two_cycle() {
        let p = RowStochasticMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(monte_carlo_passage(&p, 0, 4, 1, 7).unwrap(), vec![2, 2]);
        assert_eq!(monte_carlo_passage(&p, 0, 3, 5, 7).unwrap(), vec![5, 10]);
    }

    #[test]
    fn monte_carlo_single_step_is_multinomial() {
        let p = RowStochasticMatrix::from_dense(&[vec![0.25, 0.75], vec![1.0, 0.0]]).unwrap();
        let counts = monte_carlo_passage(&p, 0, 1, 40_000, 3).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 40_000);
        // 5 standard deviations
        assert!((counts[0] as f64 - 10_000.0).abs() < 5.0 * (40_000.0f64 * 0.25 * 0.75).sqrt());
    }

    #[test]
    fn passage_is_linear_in_repetitions() {
        let p = RowStochasticMatrix::from_dense(&[
            vec![0.1, 0.6, 0.3],
            vec![0.5, 0.0, 0.5],
            vec![0.2, 0.2, 0.6],
        ])
        .unwrap();
        let one = passage_similarity(&p, 4, 1).unwrap();
        let three = passage_similarity(&p, 4, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(three.get(i, j), 3.0 * one.get(i, j), 1e-12));
            }
            assert!(close(three.row(i).iter().sum::<f64>(), 12.0, 1e-9));
        }
    }

    #[test]
    fn reduce_all_ambiguous_symmetrises() {
        let a = SimilarityMatrix::from_dense(
            &[vec![1.0, 2.0, 0.0], vec![4.0, 1.0, 1.0], vec![0.0, 3.0, 5.0]],
            2,
            1,
        )
        .unwrap();
        let r = reduce_network(&a, &[true, true, true]).unwrap();
        assert_eq!(
            r.to_dense(),
            vec![vec![0.0, 3.0, 0.0], vec![3.0, 0.0, 2.0], vec![0.0, 2.0, 0.0]]
        );
        let again = reduce_network(&r, &[true; 3]).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn reduce_symmetric_is_selection() {
        let a = SimilarityMatrix::from_dense(
            &[vec![0.0, 2.0, 7.0], vec![2.0, 0.0, 1.0], vec![7.0, 1.0, 0.0]],
            2,
            1,
        )
        .unwrap();
        let r = reduce_network(&a, &[true, false, true]).unwrap();
        assert_eq!(r.to_dense(), vec![vec![0.0, 7.0], vec![7.0, 0.0]]);
    }

    #[test]
    fn reduce_needs_two_nodes() {
        let a = SimilarityMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1, 1).unwrap();
        assert!(matches!(
            reduce_network(&a, &[true, false]),
            Err(Error::TooFewAmbiguous(1))
        ));
    }

    #[test]
    fn toy_reduction_is_four_by_four() {
        let records = fixtures::toy_corpus();
        let spec = fixtures::toy_ambiguity();
        let reg =
            expand_mentions(&records, &spec.ambiguous_names(), spec.grouping().as_ref()).unwrap();
        let g = build_collaboration_graph(&records, &reg).unwrap();
        let a = passage_similarity(&normalize_transition(&g), 3, 1).unwrap();
        let r = reduce_network(&a, g.ambiguous_mask()).unwrap();
        assert_eq!(r.dim(), 4);
        assert!(r.is_symmetric());
        let direct =
            reduced_passage_similarity(&normalize_transition(&g), g.ambiguous_mask(), 3, 1).unwrap();
        assert_eq!(direct, r);
    }

    #[test]
    fn sparsify_identities() {
        let a = SimilarityMatrix::from_dense(
            &[vec![0.0, 2.0, 7.0], vec![2.0, 0.0, 1.0], vec![7.0, 1.0, 0.0]],
            2,
            1,
        )
        .unwrap();
        assert_eq!(sparsify(&a, Sparsify::Threshold(0.0)).unwrap().matrix, a);
        assert_eq!(sparsify(&a, Sparsify::Knn(2)).unwrap().matrix, a);
        assert_eq!(sparsify(&a, Sparsify::Knn(5)).unwrap().matrix, a);
        let t = sparsify(&a, Sparsify::Threshold(1.5)).unwrap();
        assert_eq!(t.matrix.get(1, 2), 0.0);
        assert_eq!(t.components, 1);
    }

    #[test]
    fn knn_keeps_dominant_entries() {
        // row maxima: 0→1 (5), 1→0 (5), 2→1 (2)
        let a = SimilarityMatrix::from_dense(
            &[vec![0.0, 5.0, 1.0], vec![5.0, 0.0, 2.0], vec![1.0, 2.0, 0.0]],
            2,
            1,
        )
        .unwrap();
        let out = sparsify(&a, Sparsify::Knn(1)).unwrap();
        assert_eq!(
            out.matrix.to_dense(),
            vec![vec![0.0, 5.0, 0.0], vec![5.0, 0.0, 2.0], vec![0.0, 2.0, 0.0]]
        );
        assert_eq!(out.components, 1);
    }

    #[test]
    fn sparsify_mode_parsing() {
        assert_eq!("none".parse::<Sparsify>().unwrap(), Sparsify::None);
        assert_eq!("knn:3".parse::<Sparsify>().unwrap(), Sparsify::Knn(3));
        assert_eq!(
            "threshold:0.5".parse::<Sparsify>().unwrap(),
            Sparsify::Threshold(0.5)
        );
        assert!("knn:0".parse::<Sparsify>().is_err());
        assert!("threshold:-1".parse::<Sparsify>().is_err());
        assert!("bogus".parse::<Sparsify>().is_err());
    }

    #[test]
    fn text_format_accepts_any_order() {
        let text = "SIM 2 3 4\n1\t0\t2.5\n0\t1\t1.5\n";
        let m = SimilarityMatrix::read_text(text.as_bytes()).unwrap();
        assert_eq!(m.to_dense(), vec![vec![0.0, 1.5], vec![2.5, 0.0]]);
        assert_eq!((m.walk_length(), m.repetitions()), (3, 4));
        let mut out = Vec::new();
        m.write_text(&mut out).unwrap();
        assert_eq!(SimilarityMatrix::read_text(&out[..]).unwrap(), m);
        assert!(SimilarityMatrix::read_text("SIM 2 1\n".as_bytes()).is_err());
        assert!(SimilarityMatrix::read_text("SIM 2 1 1\n3\t0\t1\n".as_bytes()).is_err());
    }
}
