use crate::clock::Stopwatch;
use crate::cost::{CostSequence, Trajectory};
use crate::error::Result;
use crate::gate::InformationGate;

use super::{descend, extrapolate, AlgoConfig, HorizonBuffer, RunOutput};

struct StageLog {
    seconds: Vec<f64>,
    gradients: Vec<u64>,
    warmup: u64,
}

impl StageLog {
    fn new(horizon: usize) -> Self {
        StageLog {
            seconds: vec![0.0; horizon],
            gradients: vec![0; horizon],
            warmup: 0,
        }
    }

    fn record(&mut self, s: i64, seconds: f64, gradients: u64) {
        if s >= 1 {
            self.seconds[s as usize - 1] = seconds;
            self.gradients[s as usize - 1] = gradients;
        } else {
            self.warmup += gradients;
        }
    }

    fn finish(self, points: Vec<crate::space::Point>) -> RunOutput {
        RunOutput {
            trajectory: Trajectory::new(points),
            stage_seconds: self.seconds,
            stage_gradients: self.gradients,
            warmup_gradients: self.warmup,
        }
    }
}

/// Online gradient descent: `x_1 = x_0`, then
/// `x_t = Π_X(x_{t−1} − γ ∇f_{t−1}(x_{t−1}))`, reading nothing beyond `f_{t−1}`.
pub fn run_ogd(seq: &CostSequence, cfg: &AlgoConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let horizon = seq.horizon();
    let gate = InformationGate::new(seq, 0);
    let mut log = StageLog::new(horizon);
    let mut points = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        gate.enter_stage(t as i64);
        let clock = Stopwatch::start();
        let before = gate.gradient_evals();
        let x = if t == 1 {
            seq.x0().clone()
        } else {
            let prev = &points[t - 2];
            descend(seq.space(), prev, cfg.gamma, &gate.gradient(t - 1, prev))
        };
        log.record(t as i64, clock.seconds(), gate.gradient_evals() - before);
        points.push(x);
    }
    Ok(log.finish(points))
}

/// Receding horizon gradient descent.
///
/// Each action is initialized by OGD `W` stages ahead, then refined once per
/// stage by a projected gradient step on the total cost, sweeping the live
/// window backwards so `x_{t+1}^s` is fresh when `x_t^s` is computed.
pub fn run_rhgd(seq: &CostSequence, cfg: &AlgoConfig) -> Result<RunOutput> {
    receding(seq, cfg, false)
}

/// Receding horizon accelerated gradient: as [`run_rhgd`] with a Nesterov
/// update `x_t^s = Π_X(y_t^{s−1} − η g_t(y_{t−1}^{s−2}, y_t^{s−1}, y_{t+1}^s))`,
/// `y_t^s = (1 + λ) x_t^s − λ x_t^{s−1}`. Only `x` is projected.
pub fn run_rhag(seq: &CostSequence, cfg: &AlgoConfig) -> Result<RunOutput> {
    receding(seq, cfg, true)
}

fn receding(seq: &CostSequence, cfg: &AlgoConfig, accelerated: bool) -> Result<RunOutput> {
    cfg.validate()?;
    let horizon = seq.horizon();
    let window = cfg.effective_window(horizon);
    let w = window as i64;
    let t_max = horizon as i64;
    let space = seq.space();
    let gate = InformationGate::new(seq, window);
    let mut buf = HorizonBuffer::new(seq.x0().clone());
    let mut log = StageLog::new(horizon);
    let mut emitted = Vec::with_capacity(horizon);

    // stage 1 − W only sets x_1^{1−W} = x_0
    let first = 1 - w;
    gate.enter_stage(first);
    buf.init(1, seq.x0().clone());
    if first == 1 {
        emitted.push(buf.current(1).clone());
    }

    for s in (first + 1)..=t_max {
        gate.enter_stage(s);
        let clock = Stopwatch::start();
        let before = gate.gradient_evals();
        if s >= 2 {
            buf.retire_before((s - 1) as usize);
        }

        // I) initialize x_{s+W} by one OGD step from the initial value of x_{s+W−1}
        let target = s + w;
        if target <= t_max {
            let src = (target - 1) as usize;
            let from = buf.current(src).clone();
            let init = descend(space, &from, cfg.gamma, &gate.gradient(src, &from));
            buf.init(target as usize, init);
        }

        // II) refine x_{min(s+W−1,T)}, …, x_{max(s,1)} backwards
        let hi = (s + w - 1).min(t_max);
        let lo = s.max(1);
        let mut t = hi;
        while t >= lo {
            let tu = t as usize;
            let last = tu == horizon;
            if accelerated {
                let y_prev = buf.y_previous(tu - 1);
                let y_cur = buf.y_current(tu);
                let y_next = if last { y_cur } else { buf.y_current(tu + 1) };
                let g = gate.partial_gradient(tu, y_prev, y_cur, y_next);
                let x_new = descend(space, y_cur, cfg.eta, &g);
                let y_new = extrapolate(&x_new, buf.current(tu), cfg.lambda);
                buf.update(tu, x_new, Some(y_new));
            } else {
                let x_prev = buf.previous(tu - 1);
                let x_cur = buf.current(tu);
                let x_next = if last { x_cur } else { buf.current(tu + 1) };
                let g = gate.partial_gradient(tu, x_prev, x_cur, x_next);
                let x_new = descend(space, x_cur, cfg.eta, &g);
                buf.update(tu, x_new, None);
            }
            t -= 1;
        }
        debug_assert!(buf.live() <= window + 2);

        if s >= 1 {
            emitted.push(buf.current(s as usize).clone());
        }
        log.record(s, clock.seconds(), gate.gradient_evals() - before);
    }
    Ok(log.finish(emitted))
}
