//! Transition rules and the one-step update of the competition.
//!
//! An active particle at node `i` moves with the mixture
//! `λ·P_pref + (1-λ)·P_rand`; an exhausted one is teleported uniformly to a
//! node it currently owns. Every rule has a sparse form used by [`step`] and a
//! dense form exposed for inspection and tests; both go through the same code.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::{argmax_first, VisitMatrix};
use super::{Adjacency, CompetitionParams, CompetitionState};
use crate::error::{Error, Result};

/// Relative visit frequencies `N̄_i^(k)`, node-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationMatrix {
    nodes: usize,
    particles: usize,
    values: Vec<f64>,
}

impl DominationMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let particles = rows.first().map_or(0, Vec::len);
        if particles == 0 || rows.iter().any(|r| r.len() != particles) {
            return Err(Error::InvalidParameter(
                "domination rows must share a positive width".into(),
            ));
        }
        Ok(DominationMatrix {
            nodes: rows.len(),
            particles,
            values: rows.concat(),
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn get(&self, node: usize, particle: usize) -> f64 {
        self.values[node * self.particles + particle]
    }

    pub fn row(&self, node: usize) -> &[f64] {
        &self.values[node * self.particles..(node + 1) * self.particles]
    }

    /// Owner of every node.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.nodes).map(|i| owner(self, i)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nodes).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Read access to domination levels, shared by the dense matrix and the raw
/// visit counts so both produce identical rows.
pub(crate) trait Dominance {
    fn node_count(&self) -> usize;
    fn level(&self, node: usize, particle: usize) -> f64;
    fn owner_of(&self, node: usize) -> usize;
}

impl Dominance for DominationMatrix {
    fn node_count(&self) -> usize {
        self.nodes
    }

    fn level(&self, node: usize, particle: usize) -> f64 {
        self.get(node, particle)
    }

    fn owner_of(&self, node: usize) -> usize {
        argmax_first(self.row(node))
    }
}

impl Dominance for VisitMatrix {
    fn node_count(&self) -> usize {
        self.nodes()
    }

    fn level(&self, node: usize, particle: usize) -> f64 {
        self.domination(node, particle)
    }

    fn owner_of(&self, node: usize) -> usize {
        self.owner(node)
    }
}

pub fn domination_levels(visits: &VisitMatrix) -> DominationMatrix {
    let values = (0..visits.nodes())
        .flat_map(|i| (0..visits.particles()).map(move |k| visits.domination(i, k)))
        .collect();
    DominationMatrix {
        nodes: visits.nodes(),
        particles: visits.particles(),
        values,
    }
}

/// Argmax particle of the node's domination row, lowest index on ties.
pub fn owner(domination: &DominationMatrix, node: usize) -> usize {
    domination.owner_of(node)
}

fn densify(nodes: usize, sparse: &[(usize, f64)]) -> Vec<f64> {
    let mut dense = vec![0.0; nodes];
    for &(j, p) in sparse {
        dense[j] += p;
    }
    dense
}

fn random_sparse(adjacency: &Adjacency, node: usize) -> Result<Vec<(usize, f64)>> {
    let strength = adjacency.strength(node);
    if strength <= 0.0 {
        return Err(Error::ZeroDegree(node));
    }
    Ok(adjacency
        .row(node)
        .iter()
        .map(|&(j, w)| (j, w / strength))
        .collect())
}

fn preferential_sparse<D: Dominance>(
    adjacency: &Adjacency,
    domination: &D,
    particle: usize,
    node: usize,
) -> Result<Vec<(usize, f64)>> {
    let weighted: Vec<(usize, f64)> = adjacency
        .row(node)
        .iter()
        .map(|&(j, w)| (j, w * domination.level(j, particle)))
        .collect();
    let total: f64 = weighted.iter().map(|&(_, w)| w).sum();
    if total > 0.0 {
        Ok(weighted.into_iter().map(|(j, w)| (j, w / total)).collect())
    } else {
        random_sparse(adjacency, node)
    }
}

fn reanimation_sparse<D: Dominance>(domination: &D, particle: usize) -> Vec<(usize, f64)> {
    let n = domination.node_count();
    let owned: Vec<usize> = (0..n)
        .filter(|&i| domination.owner_of(i) == particle)
        .collect();
    if owned.is_empty() {
        let p = 1.0 / n as f64;
        (0..n).map(|i| (i, p)).collect()
    } else {
        let p = 1.0 / owned.len() as f64;
        owned.into_iter().map(|i| (i, p)).collect()
    }
}

fn transition_sparse<D: Dominance>(
    adjacency: &Adjacency,
    domination: &D,
    position: usize,
    exhausted: bool,
    particle: usize,
    lambda: f64,
) -> Result<Vec<(usize, f64)>> {
    if exhausted {
        return Ok(reanimation_sparse(domination, particle));
    }
    let random = random_sparse(adjacency, position)?;
    let preferential = preferential_sparse(adjacency, domination, particle, position)?;
    // both rows are supported on the same neighbor list, in the same order
    Ok(random
        .iter()
        .zip(&preferential)
        .map(|(&(j, r), &(_, p))| (j, lambda * p + (1.0 - lambda) * r))
        .collect())
}

/// `a_ij / Σ_u a_iu`.
pub fn random_row(adjacency: &Adjacency, node: usize) -> Result<Vec<f64>> {
    Ok(densify(adjacency.node_count(), &random_sparse(adjacency, node)?))
}

/// `a_ij N̄_j^(k) / Σ_u a_iu N̄_u^(k)`, or the random row when the
/// denominator vanishes.
pub fn preferential_row(
    adjacency: &Adjacency,
    domination: &DominationMatrix,
    particle: usize,
    node: usize,
) -> Result<Vec<f64>> {
    let sparse = preferential_sparse(adjacency, domination, particle, node)?;
    Ok(densify(adjacency.node_count(), &sparse))
}

/// Uniform over the nodes owned by `particle`, or over all nodes if it owns
/// none.
pub fn reanimation_row(domination: &DominationMatrix, particle: usize) -> Vec<f64> {
    densify(domination.nodes(), &reanimation_sparse(domination, particle))
}

/// Movement distribution of `particle` given the current state.
pub fn transition_row(
    adjacency: &Adjacency,
    domination: &DominationMatrix,
    state: &CompetitionState,
    particle: usize,
    lambda: f64,
) -> Result<Vec<f64>> {
    let sparse = transition_sparse(
        adjacency,
        domination,
        state.positions[particle],
        state.exhausted[particle],
        particle,
        lambda,
    )?;
    Ok(densify(adjacency.node_count(), &sparse))
}

fn sample<R: Rng>(row: &[(usize, f64)], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(j, p) in row {
        acc += p;
        if u < acc {
            return j;
        }
    }
    row.iter()
        .rev()
        .find(|&&(_, p)| p > 0.0)
        .or(row.last())
        .map(|&(j, _)| j)
        .expect("transition rows are non-empty")
}

/// Energy after one visit. Values within a tiny fraction of `Δ` of a bound
/// snap onto it so that exhaustion is exact despite rounding.
pub fn update_energy(energy: f64, owns_target: bool, params: &CompetitionParams) -> f64 {
    let eps = params.delta * 1e-9;
    let next = if owns_target {
        (energy + params.delta).min(params.omega_max)
    } else {
        (energy - params.delta).max(params.omega_min)
    };
    if next - params.omega_min <= eps {
        params.omega_min
    } else if params.omega_max - next <= eps {
        params.omega_max
    } else {
        next
    }
}

/// Advances the system by one step.
///
/// Particles are processed in index order. All of them read the domination
/// levels of time `t`: moves and energy updates are decided first, and the
/// visit counts are incremented afterwards.
pub fn step(
    state: &mut CompetitionState,
    adjacency: &Adjacency,
    params: &CompetitionParams,
) -> Result<()> {
    if adjacency.node_count() != state.nodes() {
        return Err(Error::InvalidParameter(format!(
            "state has {} nodes, adjacency {}",
            state.nodes(),
            adjacency.node_count()
        )));
    }
    let k_count = state.particles();
    let mut targets = Vec::with_capacity(k_count);
    for k in 0..k_count {
        let row = transition_sparse(
            adjacency,
            &state.visits,
            state.positions[k],
            state.exhausted[k],
            k,
            params.lambda,
        )?;
        let target = sample(&row, &mut state.rng);
        let owns = state.visits.owner(target) == k;
        targets.push((target, owns));
    }
    for (k, (target, owns)) in targets.into_iter().enumerate() {
        state.positions[k] = target;
        state.visits.visit(target, k);
        state.energy[k] = update_energy(state.energy[k], owns, params);
        state.exhausted[k] = state.energy[k] == params.omega_min;
    }
    state.t += 1;
    Ok(())
}
