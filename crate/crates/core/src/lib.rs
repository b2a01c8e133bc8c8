//! Disambiguation of homonymous authors in collaboration networks.
//!
//! The pipeline builds a weighted co-authorship graph from paper records,
//! turns it into a truncated passage-time similarity between the ambiguous
//! mentions, and clusters those mentions with a stochastic particle
//! competition. Evaluation metrics, two baseline clusterers and a synthetic
//! benchmark generator are included for comparison.

pub mod competition;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod pipeline;
pub mod similarity;

mod seed;

pub use error::{Error, Result};
pub use seed::derive_seed;
