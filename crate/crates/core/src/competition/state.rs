use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Adjacency, CompetitionParams};
use crate::error::{Error, Result};

/// Visit counts `N_i^(k)`, node-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitMatrix {
    nodes: usize,
    particles: usize,
    counts: Vec<u64>,
    node_totals: Vec<u64>,
}

impl VisitMatrix {
    /// Every entry starts at `fill`.
    pub fn filled(nodes: usize, particles: usize, fill: u64) -> Self {
        VisitMatrix {
            nodes,
            particles,
            counts: vec![fill; nodes * particles],
            node_totals: vec![fill * particles as u64; nodes],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let particles = rows.first().map_or(0, Vec::len);
        if particles == 0 || rows.iter().any(|r| r.len() != particles) {
            return Err(Error::InvalidParameter("visit rows must share a positive width".into()));
        }
        Ok(VisitMatrix {
            nodes: rows.len(),
            particles,
            counts: rows.concat(),
            node_totals: rows.iter().map(|r| r.iter().sum()).collect(),
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn get(&self, node: usize, particle: usize) -> u64 {
        self.counts[node * self.particles + particle]
    }

    pub fn row(&self, node: usize) -> &[u64] {
        &self.counts[node * self.particles..(node + 1) * self.particles]
    }

    pub fn node_total(&self, node: usize) -> u64 {
        self.node_totals[node]
    }

    pub fn total(&self) -> u64 {
        self.node_totals.iter().sum()
    }

    pub(crate) fn visit(&mut self, node: usize, particle: usize) {
        self.counts[node * self.particles + particle] += 1;
        self.node_totals[node] += 1;
    }

    /// `N̄_i^(k)`; a node with no visits at all yields 0.
    pub fn domination(&self, node: usize, particle: usize) -> f64 {
        match self.node_totals[node] {
            0 => 0.0,
            total => self.get(node, particle) as f64 / total as f64,
        }
    }

    /// Particle with the most visits at `node`, lowest index on ties.
    pub fn owner(&self, node: usize) -> usize {
        argmax_first(self.row(node))
    }
}

pub(crate) fn argmax_first<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

/// Internal state `X(t) = [p(t), N(t), E(t), S(t)]` plus the RNG that drives
/// the next transition, so a serialised state resumes bit-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitionState {
    pub(crate) t: u64,
    pub(crate) positions: Vec<usize>,
    pub(crate) visits: VisitMatrix,
    pub(crate) energy: Vec<f64>,
    pub(crate) exhausted: Vec<bool>,
    pub(crate) rng: ChaCha8Rng,
}

impl CompetitionState {
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn visits(&self) -> &VisitMatrix {
        &self.visits
    }

    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    pub fn exhausted(&self) -> &[bool] {
        &self.exhausted
    }

    pub fn particles(&self) -> usize {
        self.positions.len()
    }

    pub fn nodes(&self) -> usize {
        self.visits.nodes()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Places the particles and sets the prior: one visit from every particle
/// on every node, one extra visit on each particle's start node, full energy.
pub fn init_state(adjacency: &Adjacency, params: &CompetitionParams) -> Result<CompetitionState> {
    params.validate()?;
    let n = adjacency.node_count();
    let k = params.particles;
    if k > n {
        return Err(Error::TooManyParticles { k, nodes: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let positions = match &params.initial_positions {
        Some(given) => {
            if given.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "{} initial positions for {k} particles",
                    given.len()
                )));
            }
            if let Some(&bad) = given.iter().find(|&&p| p >= n) {
                return Err(Error::InvalidParameter(format!(
                    "initial position {bad} outside 0..{n}"
                )));
            }
            given.clone()
        }
        None => index::sample(&mut rng, n, k).into_vec(),
    };
    let mut visits = VisitMatrix::filled(n, k, 1);
    for (particle, &node) in positions.iter().enumerate() {
        visits.visit(node, particle);
    }
    let energy = vec![params.omega_max; k];
    let exhausted = energy.iter().map(|&e| e == params.omega_min).collect();
    Ok(CompetitionState {
        t: 0,
        positions,
        visits,
        energy,
        exhausted,
        rng,
    })
}
