//! Stochastic particle competition.
//!
//! `K` particles walk the network, each raising its share of visits on the
//! nodes it frequents. A particle gains energy on nodes it owns and loses it
//! on rival nodes; once its energy reaches the floor it is teleported back to
//! its own territory. Each node is finally labelled with the particle that
//! dominates it.

mod adjacency;
mod dynamics;
mod run;
mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use adjacency::Adjacency;
pub use dynamics::{
    domination_levels, owner, preferential_row, random_row, reanimation_row, step,
    transition_row, update_energy, DominationMatrix,
};
pub use run::{
    align_labels, resume, run, run_ensemble, ClusterAssignment, EnsembleAssignment, Trajectory,
};
pub use state::{init_state, CompetitionState, VisitMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitionParams {
    /// Number of particles `K`.
    pub particles: usize,
    /// Weight of the preferential walk in the movement mixture.
    pub lambda: f64,
    /// Energy gained or lost per visit.
    pub delta: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub max_iters: u64,
    /// Stop early once no domination level moved more than this over the
    /// last `conv_window` steps. Zero disables the check.
    pub conv_tol: f64,
    pub conv_window: u64,
    pub seed: u64,
    /// Start nodes, one per particle. Repeats are allowed.
    pub initial_positions: Option<Vec<usize>>,
}

impl Default for CompetitionParams {
    fn default() -> Self {
        CompetitionParams {
            particles: 2,
            lambda: 0.6,
            delta: 0.05,
            omega_min: 0.0,
            omega_max: 1.0,
            max_iters: 1000,
            conv_tol: 1e-3,
            conv_window: 100,
            seed: 0,
            initial_positions: None,
        }
    }
}

impl CompetitionParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.particles == 0 {
            return fail("need at least one particle".into());
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return fail(format!("lambda {} outside [0, 1]", self.lambda));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return fail(format!("delta {} must be positive", self.delta));
        }
        if !(self.omega_min.is_finite()
            && self.omega_max.is_finite()
            && self.omega_max >= self.omega_min)
        {
            return fail(format!(
                "energy bounds [{}, {}] are invalid",
                self.omega_min, self.omega_max
            ));
        }
        if !(self.conv_tol.is_finite() && self.conv_tol >= 0.0) {
            return fail(format!("conv_tol {} must be >= 0", self.conv_tol));
        }
        if self.conv_window == 0 {
            return fail("conv_window must be positive".into());
        }
        Ok(())
    }
}
