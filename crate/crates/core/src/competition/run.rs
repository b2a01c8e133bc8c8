use std::io::Write;

use rayon::prelude::*;

use super::dynamics::{domination_levels, step, DominationMatrix};
use super::state::{argmax_first, init_state, CompetitionState};
use super::{Adjacency, CompetitionParams};
use crate::error::{Error, Result};

/// Mean domination per (true class, particle) at each logged step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    nodes: usize,
    classes: usize,
    particles: usize,
    steps: Vec<u64>,
    values: Vec<f64>,
}

impl Trajectory {
    fn new(nodes: usize, classes: usize, particles: usize) -> Self {
        Trajectory {
            nodes,
            classes,
            particles,
            steps: Vec::new(),
            values: Vec::new(),
        }
    }

    fn record(&mut self, state: &CompetitionState, truth: &[usize]) {
        let mut sums = vec![0.0; self.classes * self.particles];
        let mut sizes = vec![0usize; self.classes];
        for (node, &class) in truth.iter().enumerate() {
            sizes[class] += 1;
            for k in 0..self.particles {
                sums[class * self.particles + k] += state.visits.domination(node, k);
            }
        }
        for (c, &size) in sizes.iter().enumerate() {
            for k in 0..self.particles {
                let v = &mut sums[c * self.particles + k];
                *v = if size > 0 { *v / size as f64 } else { 0.0 };
            }
        }
        self.steps.push(state.t);
        self.values.extend(sums);
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[u64] {
        &self.steps
    }

    /// Mean domination of `particle` over the nodes of `class` at the
    /// `index`-th logged step.
    pub fn mean(&self, index: usize, class: usize, particle: usize) -> f64 {
        let width = self.classes * self.particles;
        self.values[index * width + class * self.particles + particle]
    }

    /// `TRAJ <V> <K> <classes>`, then `t,m[0][0],m[0][1],...` per step,
    /// class-major.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "TRAJ {} {} {}", self.nodes, self.particles, self.classes)?;
        let width = self.classes * self.particles;
        for (i, t) in self.steps.iter().enumerate() {
            write!(out, "{t}")?;
            for v in &self.values[i * width..(i + 1) * width] {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Owning particle of each node.
    pub labels: Vec<usize>,
    pub domination: DominationMatrix,
    pub trajectory: Option<Trajectory>,
    pub converged: bool,
    pub final_state: CompetitionState,
}

impl ClusterAssignment {
    pub fn iterations(&self) -> u64 {
        self.final_state.t()
    }

    /// `node<TAB>particle<TAB>domination_of_winner` per node.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (node, &k) in self.labels.iter().enumerate() {
            writeln!(out, "{node}\t{k}\t{}", self.domination.get(node, k))?;
        }
        Ok(())
    }
}

fn check_truth(truth: Option<&[usize]>, nodes: usize) -> Result<()> {
    if let Some(truth) = truth {
        if truth.len() != nodes {
            return Err(Error::InvalidParameter(format!(
                "truth covers {} nodes, network has {nodes}",
                truth.len()
            )));
        }
    }
    Ok(())
}

/// Runs from a fresh state until `max_iters` or convergence.
pub fn run(
    adjacency: &Adjacency,
    params: &CompetitionParams,
    truth: Option<&[usize]>,
) -> Result<ClusterAssignment> {
    let state = init_state(adjacency, params)?;
    resume(adjacency, params, state, truth)
}

/// Continues an existing state until `t = max_iters` or convergence.
///
/// Convergence is checked whenever `t` is a multiple of `conv_window`,
/// against the levels seen at the previous multiple.
pub fn resume(
    adjacency: &Adjacency,
    params: &CompetitionParams,
    mut state: CompetitionState,
    truth: Option<&[usize]>,
) -> Result<ClusterAssignment> {
    params.validate()?;
    check_truth(truth, adjacency.node_count())?;
    let mut trajectory = truth.map(|truth| {
        let classes = truth.iter().max().map_or(0, |&c| c + 1);
        Trajectory::new(adjacency.node_count(), classes, state.particles())
    });
    if let (Some(traj), Some(truth)) = (trajectory.as_mut(), truth) {
        traj.record(&state, truth);
    }

    let mut reference: Option<DominationMatrix> = None;
    let mut converged = false;
    while state.t < params.max_iters {
        step(&mut state, adjacency, params)?;
        if let (Some(traj), Some(truth)) = (trajectory.as_mut(), truth) {
            traj.record(&state, truth);
        }
        if params.conv_tol > 0.0 && state.t % params.conv_window == 0 {
            let current = domination_levels(&state.visits);
            if let Some(prev) = &reference {
                let shift = (0..current.nodes())
                    .flat_map(|i| current.row(i).iter().zip(prev.row(i)))
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if shift < params.conv_tol {
                    converged = true;
                    break;
                }
            }
            reference = Some(current);
        }
    }

    let domination = domination_levels(&state.visits);
    Ok(ClusterAssignment {
        labels: domination.labels(),
        domination,
        trajectory,
        converged,
        final_state: state,
    })
}

/// Relabels `labels` so that each cluster maps to the reference cluster it
/// overlaps most, pairing the largest overlaps first. Clusters left without
/// a partner keep fresh ids above the reference range.
pub fn align_labels(reference: &[usize], labels: &[usize]) -> Vec<usize> {
    let ref_k = reference.iter().max().map_or(0, |&m| m + 1);
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut overlap = vec![vec![0usize; ref_k]; k];
    for (&r, &l) in reference.iter().zip(labels) {
        overlap[l][r] += 1;
    }
    let mut pairs: Vec<(usize, usize, usize)> = (0..k)
        .flat_map(|l| (0..ref_k).map(move |r| (l, r)))
        .map(|(l, r)| (overlap[l][r], l, r))
        .collect();
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut mapping: Vec<Option<usize>> = vec![None; k];
    let mut taken = vec![false; ref_k];
    for (_, l, r) in pairs {
        if mapping[l].is_none() && !taken[r] {
            mapping[l] = Some(r);
            taken[r] = true;
        }
    }
    let mut fresh = ref_k;
    let mapping: Vec<usize> = mapping
        .into_iter()
        .map(|m| {
            m.unwrap_or_else(|| {
                fresh += 1;
                fresh - 1
            })
        })
        .collect();
    labels.iter().map(|&l| mapping[l]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleAssignment {
    pub labels: Vec<usize>,
    /// Fraction of runs agreeing with the majority label, per node.
    pub support: Vec<f64>,
}

/// Majority vote over one run per seed, after aligning every run's labels
/// with the first one.
pub fn run_ensemble(
    adjacency: &Adjacency,
    params: &CompetitionParams,
    seeds: &[u64],
) -> Result<EnsembleAssignment> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("ensemble needs at least one seed".into()));
    }
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let params = CompetitionParams {
                seed,
                ..params.clone()
            };
            run(adjacency, &params, None).map(|a| a.labels)
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = &runs[0];
    let aligned: Vec<Vec<usize>> = runs.iter().map(|l| align_labels(reference, l)).collect();
    let width = aligned.iter().flatten().max().map_or(0, |&m| m + 1);
    let n = adjacency.node_count();
    let mut labels = Vec::with_capacity(n);
    let mut support = Vec::with_capacity(n);
    for node in 0..n {
        let mut votes = vec![0usize; width];
        for run in &aligned {
            votes[run[node]] += 1;
        }
        let winner = argmax_first(&votes);
        labels.push(winner);
        support.push(votes[winner] as f64 / aligned.len() as f64);
    }
    Ok(EnsembleAssignment { labels, support })
}
