//! Randomized lower-bound instances and regret bound constants.
//!
//! All generators draw from ChaCha8 seeded by `seed`; realization `k` of a
//! Monte-Carlo study uses stream `k` of the same key, so every realization
//! is reproducible on its own.

mod bounds;

pub use bounds::{bound_report, rho_of, BoundInputs, BoundReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::{CostSequence, FunctionClassParams, QuadraticStageCost};
use crate::error::{Error, Result};
use crate::space::{ActionSpace, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdversaryConfig {
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(rename = "W")]
    pub window: usize,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    /// Path-length budget `L_T`.
    #[serde(rename = "L_T")]
    pub budget: f64,
    pub seed: u64,
}

impl AdversaryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("T must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig(format!("beta must be nonnegative, got {}", self.beta)));
        }
        if !(self.diameter > 0.0 && self.diameter.is_finite()) {
            return Err(Error::InvalidConfig(format!("D must be positive, got {}", self.diameter)));
        }
        let cap = self.diameter * self.horizon as f64;
        if !(self.budget > 0.0 && self.budget <= cap) {
            return Err(Error::InvalidConfig(format!(
                "L_T must lie in (0, D*T] = (0, {cap}], got {}",
                self.budget
            )));
        }
        Ok(())
    }

    /// Bound constants for the class `F_X(α, α, αD)` these instances live in.
    pub fn bounds(&self) -> Result<BoundReport> {
        bound_report(BoundInputs {
            alpha: self.alpha,
            l: self.alpha,
            beta: self.beta,
            g: self.alpha * self.diameter,
            diameter: self.diameter,
            budget: self.budget,
            window: self.window,
        })
    }

    fn rng(&self, realization: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(realization);
        rng
    }
}

/// Segment length `Δ = ⌈T/⌊L_T/D⌋⌉` and count `K = ⌈T/Δ⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentPlan {
    pub delta: usize,
    pub segments: usize,
}

pub fn segment_plan(cfg: &AdversaryConfig) -> Result<SegmentPlan> {
    cfg.validate()?;
    let jumps = (cfg.budget / cfg.diameter).floor();
    if jumps < 1.0 {
        return Err(Error::InvalidConfig(format!(
            "segmented construction needs L_T >= D, got L_T = {} and D = {}",
            cfg.budget, cfg.diameter
        )));
    }
    let jumps = jumps as usize;
    let tt = cfg.horizon;
    let delta = tt.div_ceil(jumps);
    Ok(SegmentPlan {
        delta,
        segments: tt.div_ceil(delta),
    })
}

fn scalar_instance(cfg: &AdversaryConfig, thetas: &[f64]) -> Result<CostSequence> {
    let half = cfg.diameter / 2.0;
    let space = ActionSpace::interval(-half, half)?;
    let costs = thetas
        .iter()
        .map(|&th| QuadraticStageCost::isotropic(cfg.alpha, Point::from_element(1, th)))
        .collect::<Result<Vec<_>>>()?;
    let class = FunctionClassParams::new(cfg.alpha, cfg.alpha, cfg.alpha * cfg.diameter)?;
    CostSequence::with_class(costs, cfg.beta, Point::zeros(1), space, class)
}

/// Segmented `θ`: a fresh `±D/2` coin at every `t ≡ 1 (mod Δ)`, copied through
/// the segment. `X = [−D/2, D/2]`, `x_0 = 0`.
pub fn segmented_theta(cfg: &AdversaryConfig) -> Result<CostSequence> {
    segmented_realization(cfg, 0)
}

/// Realization `k` of [`segmented_theta`].
pub fn segmented_realization(cfg: &AdversaryConfig, realization: u64) -> Result<CostSequence> {
    let plan = segment_plan(cfg)?;
    let mut rng = cfg.rng(realization);
    let half = cfg.diameter / 2.0;
    let mut thetas = Vec::with_capacity(cfg.horizon);
    let mut current = 0.0;
    for t in 1..=cfg.horizon {
        if (t - 1) % plan.delta == 0 {
            current = if rng.random_bool(0.5) { half } else { -half };
        }
        thetas.push(current);
    }
    scalar_instance(cfg, &thetas)
}

/// `θ_1 = … = θ_W = 0`, then one `±ν/2` coin held to the end.
pub fn jump_once_theta(cfg: &AdversaryConfig, nu: f64) -> Result<CostSequence> {
    jump_once_realization(cfg, nu, 0)
}

pub fn jump_once_realization(cfg: &AdversaryConfig, nu: f64, realization: u64) -> Result<CostSequence> {
    cfg.validate()?;
    if !(nu > 0.0 && nu <= cfg.diameter) {
        return Err(Error::InvalidConfig(format!("nu must lie in (0, D = {}], got {nu}", cfg.diameter)));
    }
    if cfg.horizon < cfg.window + 1 {
        return Err(Error::InvalidConfig(format!(
            "jump-once construction needs T >= W + 1, got T = {} and W = {}",
            cfg.horizon, cfg.window
        )));
    }
    let mut rng = cfg.rng(realization);
    let jump = if rng.random_bool(0.5) { nu / 2.0 } else { -nu / 2.0 };
    let thetas: Vec<f64> = (1..=cfg.horizon).map(|t| if t <= cfg.window { 0.0 } else { jump }).collect();
    scalar_instance(cfg, &thetas)
}

/// Two equally likely 2-D sequences for `W = 0` and `L_T < D`.
#[derive(Debug, Clone)]
pub struct PairConstruction {
    pub sequences: [CostSequence; 2],
    pub probability: f64,
    /// `M = D + (1 + β/α) L_T/2`.
    pub m: f64,
    /// Declared gradient bound `α√((M + D/2)² + D²)`.
    pub g: f64,
}

/// `X = [−L_T/2, L_T/2] × [−√(D² − L_T²)/2, √(D² − L_T²)/2]`; sequence 1 has
/// parameters `(M, 0)` at stage 1 and `(L_T/2, 0)` afterwards, sequence 2 is
/// its mirror image. The parameters at stage 1 lie outside `X` on purpose.
pub fn w0_pair_construction(cfg: &AdversaryConfig) -> Result<PairConstruction> {
    cfg.validate()?;
    if cfg.window != 0 {
        return Err(Error::InvalidConfig("the pair construction is for W = 0".into()));
    }
    let (d, lt, a) = (cfg.diameter, cfg.budget, cfg.alpha);
    if lt >= d {
        return Err(Error::InvalidConfig(format!("the pair construction needs L_T < D, got {lt} >= {d}")));
    }
    let m = d + (1.0 + cfg.beta / a) * lt / 2.0;
    let g = a * ((m + d / 2.0).powi(2) + d * d).sqrt();
    let half_y = (d * d - lt * lt).sqrt() / 2.0;
    let space = ActionSpace::new(Point::from_vec(vec![-lt / 2.0, -half_y]), Point::from_vec(vec![lt / 2.0, half_y]))?;
    let class = FunctionClassParams::new(a, a, g)?;
    let build = |sign: f64| -> Result<CostSequence> {
        let costs = (1..=cfg.horizon)
            .map(|t| {
                let x = if t == 1 { sign * m } else { sign * lt / 2.0 };
                QuadraticStageCost::isotropic(a, Point::from_vec(vec![x, 0.0]))
            })
            .collect::<Result<Vec<_>>>()?;
        CostSequence::with_class(costs, cfg.beta, Point::zeros(2), space.clone(), class)
    };
    Ok(PairConstruction {
        sequences: [build(1.0)?, build(-1.0)?],
        probability: 0.5,
        m,
        g,
    })
}

/// `J = {1 ≤ t ≤ T − W : t + W ≡ 1 (mod Δ)}` with its cardinality bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSet {
    pub stages: Vec<usize>,
    pub delta: usize,
    /// `L_T/(4D)` for `W = 0`, `L_T/(12D)` when `L_T ≥ 2D` and `T ≥ 2W`,
    /// otherwise no bound applies.
    pub bound: Option<f64>,
}

impl IndexSet {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn satisfies_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.len() as f64 >= b)
    }
}

pub fn segment_index_set_j(cfg: &AdversaryConfig) -> Result<IndexSet> {
    let plan = segment_plan(cfg)?;
    let (tt, w) = (cfg.horizon, cfg.window);
    let stages: Vec<usize> = (1..=tt.saturating_sub(w)).filter(|t| (t + w) % plan.delta == 1 % plan.delta).collect();
    let ratio = cfg.budget / cfg.diameter;
    let bound = if w == 0 {
        Some(ratio / 4.0)
    } else if ratio >= 2.0 && tt >= 2 * w {
        Some(ratio / 12.0)
    } else {
        None
    };
    Ok(IndexSet {
        stages,
        delta: plan.delta,
        bound,
    })
}
