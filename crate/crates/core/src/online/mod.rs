//! Online algorithms: OGD, receding horizon gradient descent (RHGD) and
//! receding horizon accelerated gradient (RHAG), plus the offline gradient
//! iterations they reproduce exactly.

mod buffer;
mod offline;
mod receding;

pub use buffer::HorizonBuffer;
pub use offline::{offline_gd_iterates, offline_nag_iterates, ogd_initialization};
pub use receding::{run_ogd, run_rhag, run_rhgd};

use crate::cost::{CostSequence, Trajectory};
use crate::error::{Error, Result};
use crate::space::{ActionSpace, Point};

/// Step sizes and prediction window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoConfig {
    /// Initialization (OGD) step.
    pub gamma: f64,
    /// Update step for the receding-horizon sweeps.
    pub eta: f64,
    /// Momentum for the accelerated sweep.
    pub lambda: f64,
    pub window: usize,
}

impl AlgoConfig {
    /// `γ = 1/l`, `η = 1/L`, `λ = (1 − √(αη)) / (1 + √(αη))`.
    pub fn defaults(seq: &CostSequence, window: usize) -> Self {
        let class = seq.class_params();
        let (big_l, _) = seq.smoothness_params();
        let eta = 1.0 / big_l;
        let root = (class.alpha * eta).sqrt();
        AlgoConfig {
            gamma: 1.0 / class.l,
            eta,
            lambda: (1.0 - root) / (1.0 + root),
            window,
        }
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidConfig(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidConfig(format!("eta must be positive, got {}", self.eta)));
        }
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(Error::InvalidConfig(format!("lambda must lie in [0, 1), got {}", self.lambda)));
        }
        Ok(())
    }

    /// A window past the horizon behaves as `W = T`.
    pub(crate) fn effective_window(&self, horizon: usize) -> usize {
        self.window.min(horizon)
    }
}

/// What an online run produced, with per-stage instrumentation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    /// Wall time of stage `t` at index `t − 1` (initialization plus sweep).
    pub stage_seconds: Vec<f64>,
    /// Stage-cost gradient evaluations of stage `t` at index `t − 1`.
    pub stage_gradients: Vec<u64>,
    /// Work done at stages `s ≤ 0` before the first emission.
    pub warmup_gradients: u64,
}

/// `Π_X(from − η·g)`.
pub(crate) fn descend(space: &ActionSpace, from: &Point, eta: f64, g: &Point) -> Point {
    space.project_unchecked(&(from - g * eta))
}

/// `(1 + λ)·x_new − λ·x_old`.
pub(crate) fn extrapolate(x_new: &Point, x_old: &Point, lambda: f64) -> Point {
    x_new * (1.0 + lambda) - x_old * lambda
}
