//! Receding-horizon model predictive control baseline.
//!
//! At stage `s` MPC minimizes `Σ_{τ=s}^{s+W'−1} f_τ(x_τ) + (β/2)‖x_τ − x_{τ−1}‖²`
//! plus a terminal cost on `x_{s+W'−1}`, with `x_{s−1}` fixed to the action it
//! emitted last, and emits the first block. `W' = min(W, T − s + 1)`; the
//! terminal cost is dropped once the window reaches `T`.

use serde::{Deserialize, Serialize};

use crate::clock::Stopwatch;
use crate::cost::{CostSequence, Trajectory};
use crate::error::{Error, Result};
use crate::gate::InformationGate;
use crate::online::RunOutput;
use crate::pgm::{self, PgmOptions, SmoothObjective};
use crate::space::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalCost {
    Zero,
    /// `weight·‖x_{s+W−1} − θ_{s+W−1}‖²`.
    QuadraticAnchor(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpcConfig {
    pub window: usize,
    pub terminal: TerminalCost,
    /// Bound on the gradient-mapping norm of each window solution.
    pub inner_tolerance: f64,
    pub inner_max_iters: usize,
}

impl MpcConfig {
    pub fn new(window: usize) -> Self {
        MpcConfig {
            window,
            terminal: TerminalCost::Zero,
            inner_tolerance: 1e-9,
            inner_max_iters: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::InvalidConfig("MPC needs a prediction window of at least 1".into()));
        }
        if !(self.inner_tolerance > 0.0 && self.inner_tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "inner tolerance must be positive, got {}",
                self.inner_tolerance
            )));
        }
        if let TerminalCost::QuadraticAnchor(w) = self.terminal {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig(format!("terminal weight must be nonnegative, got {w}")));
            }
        }
        Ok(())
    }
}

struct Window<'g, 'a> {
    gate: &'g InformationGate<'a>,
    first: usize,
    len: usize,
    anchor: Option<(f64, Point)>,
    prev: &'g Point,
    n: usize,
}

impl Window<'_, '_> {
    fn block(&self, x: &[f64], k: usize) -> Point {
        Point::from_column_slice(&x[k * self.n..(k + 1) * self.n])
    }
}

impl SmoothObjective for Window<'_, '_> {
    fn dim(&self) -> usize {
        self.len * self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        let beta = self.gate.sequence().beta();
        let mut prev = self.prev.clone();
        let mut total = 0.0;
        for k in 0..self.len {
            let cur = self.block(x, k);
            total += self.gate.value(self.first + k, &cur) + 0.5 * beta * (&cur - &prev).norm_squared();
            prev = cur;
        }
        if let Some((w, theta)) = &self.anchor {
            total += w * (&prev - theta).norm_squared();
        }
        total
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        let beta = self.gate.sequence().beta();
        let n = self.n;
        for k in 0..self.len {
            let cur = self.block(x, k);
            let mut g = self.gate.gradient(self.first + k, &cur);
            let prev = if k == 0 { self.prev.clone() } else { self.block(x, k - 1) };
            g += (&cur - &prev) * beta;
            if k + 1 < self.len {
                g -= (self.block(x, k + 1) - &cur) * beta;
            } else if let Some((w, theta)) = &self.anchor {
                g += (&cur - theta) * (2.0 * w);
            }
            grad[k * n..(k + 1) * n].copy_from_slice(g.as_slice());
        }
    }
}

pub fn run_mpc(seq: &CostSequence, cfg: &MpcConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let horizon = seq.horizon();
    let n = seq.dim();
    let space = seq.space();
    let class = seq.class_params();
    let beta = seq.beta();
    let gate = InformationGate::new(seq, cfg.window);
    let mut emitted: Vec<Point> = Vec::with_capacity(horizon);
    let mut stage_seconds = vec![0.0; horizon];
    let mut stage_gradients = vec![0; horizon];
    let mut warm: Vec<f64> = Vec::new();

    for s in 1..=horizon {
        gate.enter_stage(s as i64);
        let clock = Stopwatch::start();
        let before = gate.gradient_evals();
        let len = cfg.window.min(horizon - s + 1);
        let last = s + len - 1;
        let anchor = match cfg.terminal {
            TerminalCost::QuadraticAnchor(w) if last < horizon && w > 0.0 => {
                Some((w, gate.cost(last).minimizer_over(space)?))
            }
            _ => None,
        };
        let weight = anchor.as_ref().map_or(0.0, |(w, _)| *w);
        let prev = if s == 1 { seq.x0() } else { &emitted[s - 2] };

        // shift the previous window solution forward by one stage
        let mut start = Vec::with_capacity(len * n);
        if warm.len() >= n {
            start.extend_from_slice(&warm[n..]);
        }
        while start.len() < len * n {
            let tail = if start.len() >= n {
                start[start.len() - n..].to_vec()
            } else {
                prev.as_slice().to_vec()
            };
            start.extend(tail);
        }
        start.truncate(len * n);

        let lower: Vec<f64> = (0..len).flat_map(|_| space.lower().iter().copied()).collect();
        let upper: Vec<f64> = (0..len).flat_map(|_| space.upper().iter().copied()).collect();
        let objective = Window {
            gate: &gate,
            first: s,
            len,
            anchor,
            prev,
            n,
        };
        let sol = pgm::minimize(
            &objective,
            &lower,
            &upper,
            &start,
            &PgmOptions {
                step: 1.0 / (class.l + 4.0 * beta + 2.0 * weight),
                strong_convexity: class.alpha,
                tolerance: cfg.inner_tolerance,
                max_iters: cfg.inner_max_iters,
            },
        )?;
        let first = Point::from_column_slice(&sol.x[..n]);
        warm = sol.x;
        stage_seconds[s - 1] = clock.seconds();
        stage_gradients[s - 1] = gate.gradient_evals() - before;
        emitted.push(first);
    }
    Ok(RunOutput {
        trajectory: Trajectory::new(emitted),
        stage_seconds,
        stage_gradients,
        warmup_gradients: 0,
    })
}
