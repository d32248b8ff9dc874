//! Influence diffusion on enhanced configuration-model random graphs.
//!
//! Three tracks estimate the fraction of the population reached by a viral
//! campaign and the fraction of pioneers from which it goes viral:
//!
//! * [`diffusion`] simulates the campaign on a realized [`graph::EnhancedGraph`],
//! * [`estimators`] works from a sample of pioneer degrees only,
//! * [`analytic`] evaluates the large-graph limits from a [`population::JointDegreeLaw`].

pub mod analytic;
pub mod diffusion;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod population;
pub mod sample;
pub mod special;

pub use error::{Error, Result};
