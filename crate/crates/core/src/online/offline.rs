//! Offline projected gradient and Nesterov iterations on the stacked total
//! cost. The receding-horizon methods reproduce these iterates exactly: the
//! action emitted at stage `t` with window `W` is the `W`-th iterate's
//! `t`-th block, started from [`ogd_initialization`].

use crate::cost::{CostSequence, Trajectory};
use crate::error::{Error, Result};
use crate::space::Point;

use super::AlgoConfig;

/// `x_1 = x_0`, `x_t = Π_X(x_{t−1} − γ ∇f_{t−1}(x_{t−1}))`, computed with full
/// knowledge of the sequence.
pub fn ogd_initialization(seq: &CostSequence, gamma: f64) -> Trajectory {
    let space = seq.space();
    let mut points: Vec<Point> = Vec::with_capacity(seq.horizon());
    points.push(seq.x0().clone());
    for t in 2..=seq.horizon() {
        let prev = &points[t - 2];
        let g = seq.costs()[t - 2].gradient(prev);
        points.push(space.project_unchecked(&(prev - g * gamma)));
    }
    Trajectory::new(points)
}

fn check_init(seq: &CostSequence, init: &Trajectory) -> Result<()> {
    if init.len() != seq.horizon() {
        return Err(Error::LengthMismatch {
            expected: seq.horizon(),
            found: init.len(),
        });
    }
    for p in init.points() {
        seq.space().check_dim(p)?;
    }
    Ok(())
}

/// Stacked gradient evaluated at `z`, with `x_0` from the sequence.
fn block_gradients(seq: &CostSequence, z: &[Point]) -> Vec<Point> {
    let tt = seq.horizon();
    (1..=tt)
        .map(|t| {
            let prev = if t == 1 { seq.x0() } else { &z[t - 2] };
            let next = if t == tt { &z[t - 1] } else { &z[t] };
            seq.partial_gradient_unchecked(t, prev, &z[t - 1], next)
        })
        .collect()
}

/// Projected gradient descent `x^(k) = Π(x^(k−1) − η ∇C(x^(k−1)))`.
/// Returns `x^(0), …, x^(iters)`.
pub fn offline_gd_iterates(seq: &CostSequence, init: &Trajectory, iters: usize, cfg: &AlgoConfig) -> Result<Vec<Trajectory>> {
    cfg.validate()?;
    check_init(seq, init)?;
    let space = seq.space();
    let mut out = Vec::with_capacity(iters + 1);
    out.push(init.clone());
    let mut x = init.points().to_vec();
    for _ in 0..iters {
        let g = block_gradients(seq, &x);
        x = x
            .iter()
            .zip(&g)
            .map(|(xt, gt)| space.project_unchecked(&(xt - gt * cfg.eta)))
            .collect();
        out.push(Trajectory::new(x.clone()));
    }
    Ok(out)
}

/// Nesterov's accelerated method with `y^(0) = x^(0)`:
/// `x^(k) = Π(y^(k−1) − η ∇C(y^(k−1)))`, `y^(k) = (1 + λ) x^(k) − λ x^(k−1)`.
/// Returns `x^(0), …, x^(iters)`.
pub fn offline_nag_iterates(seq: &CostSequence, init: &Trajectory, iters: usize, cfg: &AlgoConfig) -> Result<Vec<Trajectory>> {
    cfg.validate()?;
    check_init(seq, init)?;
    let space = seq.space();
    let lambda = cfg.lambda;
    let mut out = Vec::with_capacity(iters + 1);
    out.push(init.clone());
    let mut x = init.points().to_vec();
    let mut y = x.clone();
    for _ in 0..iters {
        let g = block_gradients(seq, &y);
        let x_new: Vec<Point> = y
            .iter()
            .zip(&g)
            .map(|(yt, gt)| space.project_unchecked(&(yt - gt * cfg.eta)))
            .collect();
        y = x_new
            .iter()
            .zip(&x)
            .map(|(xn, xo)| xn * (1.0 + lambda) - xo * lambda)
            .collect();
        x = x_new;
        out.push(Trajectory::new(x.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gd_decreases_total_cost() {
        let seq = CostSequence::scalar_isotropic(1.0, &[0.0, 3.0, 1.0, 2.0], 2.0, 0.0, 0.0, 4.0).unwrap();
        let cfg = AlgoConfig::defaults(&seq, 0);
        let its = offline_gd_iterates(&seq, &ogd_initialization(&seq, cfg.gamma), 30, &cfg).unwrap();
        let costs: Vec<f64> = its.iter().map(|x| seq.total_cost(x).unwrap()).collect();
        assert!(costs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn nag_converges() {
        let seq = CostSequence::scalar_isotropic(1.0, &[0.0, 3.0, 1.0, 2.0], 2.0, 0.0, 0.0, 4.0).unwrap();
        let cfg = AlgoConfig::defaults(&seq, 0);
        let its = offline_nag_iterates(&seq, &ogd_initialization(&seq, cfg.gamma), 400, &cfg).unwrap();
        let last = its.last().unwrap();
        let grad = seq.stacked_gradient(last).unwrap();
        assert!(grad.iter().all(|g| g[0].abs() < 1e-8));
    }

    #[test]
    fn initialization_is_one_step_behind() {
        let seq = CostSequence::scalar_isotropic(2.0, &[1.0, 3.0, 0.0], 1.0, 0.0, -5.0, 5.0).unwrap();
        let init = ogd_initialization(&seq, 0.5);
        assert_eq!(init.scalars(), vec![0.0, 1.0, 3.0]);
    }

    #[test]
    fn rejects_wrong_length() {
        let seq = CostSequence::scalar_isotropic(1.0, &[0.0, 1.0], 1.0, 0.0, 0.0, 1.0).unwrap();
        let cfg = AlgoConfig::defaults(&seq, 0);
        assert!(offline_gd_iterates(&seq, &Trajectory::from_scalars(&[0.0]), 1, &cfg).is_err());
    }
}
