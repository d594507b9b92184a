//! Online convex optimization with quadratic switching costs and a window
//! of exact predictions.
//!
//! The total cost of a trajectory `x_1, …, x_T` in a box `X` is
//! `Σ f_t(x_t) + (β/2)‖x_t − x_{t−1}‖²`. This crate provides the online
//! methods (OGD, RHGD, RHAG, MPC), exact offline solutions to compare
//! against, adversarial instance generators with the matching regret
//! bounds, and scenario builders.

pub mod adversary;
mod clock;
pub mod cost;
pub mod error;
pub mod experiment;
pub mod gate;
pub mod mpc;
mod instance;
pub mod online;
pub mod oracle;
pub mod pgm;
pub mod scenarios;
pub mod space;

pub use cost::{CostSequence, FunctionClassParams, QuadraticStageCost, Trajectory};
pub use error::{Error, Result};
pub use gate::InformationGate;
pub use online::{
    offline_gd_iterates, offline_nag_iterates, ogd_initialization, run_ogd, run_rhag, run_rhgd, AlgoConfig, RunOutput,
};
pub use space::{ActionSpace, Point};
