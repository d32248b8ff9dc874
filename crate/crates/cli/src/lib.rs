//! Experiment front end for `viralcm`: configuration handling and the
//! `simulate`, `sweep`, `analytic` and `evaluate` commands.

pub mod commands;
pub mod config;
