//! Information gate: an online algorithm at stage `s` with prediction
//! window `W` may read only `f_1, …, f_{s+W−1}`. Any read beyond that is a
//! programming error and panics.
//!
//! The gate also counts stage-cost gradient evaluations so per-stage work
//! can be compared independently of wall-clock time.

use std::cell::Cell;

use crate::cost::{CostSequence, QuadraticStageCost};
use crate::space::Point;

pub struct InformationGate<'a> {
    seq: &'a CostSequence,
    window: usize,
    stage: Cell<i64>,
    gradient_evals: Cell<u64>,
}

impl<'a> InformationGate<'a> {
    pub fn new(seq: &'a CostSequence, window: usize) -> Self {
        InformationGate {
            seq,
            window,
            stage: Cell::new(i64::MIN),
            gradient_evals: Cell::new(0),
        }
    }

    pub fn sequence(&self) -> &'a CostSequence {
        self.seq
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Advances the clock. Stages may start below 1 (warm-up of the
    /// receding-horizon methods) and never move backwards.
    pub fn enter_stage(&self, s: i64) {
        assert!(s >= self.stage.get(), "information gate: stage moved backwards");
        self.stage.set(s);
    }

    pub fn stage(&self) -> i64 {
        self.stage.get()
    }

    /// Last readable stage at the current clock.
    pub fn horizon_limit(&self) -> i64 {
        self.stage.get() + self.window as i64 - 1
    }

    /// `f_t`, or a panic if `t` is not yet revealed.
    pub fn cost(&self, t: usize) -> &'a QuadraticStageCost {
        let limit = self.horizon_limit();
        if t as i64 > limit {
            panic!(
                "information gate: stage {} with window {} read f_{} (readable up to f_{})",
                self.stage.get(),
                self.window,
                t,
                limit
            );
        }
        &self.seq.costs()[t - 1]
    }

    /// `∇f_t(x)`, counted.
    pub fn gradient(&self, t: usize, x: &Point) -> Point {
        let cost = self.cost(t);
        self.gradient_evals.set(self.gradient_evals.get() + 1);
        cost.gradient(x)
    }

    /// `g_t(x_prev, x_t, x_next)`, counted as one gradient evaluation.
    pub fn partial_gradient(&self, t: usize, x_prev: &Point, x_t: &Point, x_next: &Point) -> Point {
        self.cost(t);
        self.gradient_evals.set(self.gradient_evals.get() + 1);
        self.seq.partial_gradient_unchecked(t, x_prev, x_t, x_next)
    }

    pub fn value(&self, t: usize, x: &Point) -> f64 {
        self.cost(t).value(x)
    }

    pub fn gradient_evals(&self) -> u64 {
        self.gradient_evals.get()
    }
}
