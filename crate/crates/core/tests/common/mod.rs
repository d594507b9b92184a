#![allow(dead_code)]

use horizon_core::{ActionSpace, CostSequence, Point, QuadraticStageCost};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform draw on `[lo, hi]`.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Point {
    Point::from_iterator(n, (0..n).map(|_| rng.random_range(lo..=hi)))
}

/// Isotropic instance on `[-1, 1]^n`; minimizers may fall outside the box.
pub fn random_isotropic(rng: &mut ChaCha8Rng, max_horizon: usize) -> CostSequence {
    let n = rng.random_range(1..=3);
    let horizon = rng.random_range(1..=max_horizon);
    let alpha = log_uniform(rng, 0.1, 10.0);
    let beta = log_uniform(rng, 0.1, 10.0);
    let thetas = (0..horizon).map(|_| random_point(rng, n, -1.5, 1.5)).collect();
    let x0 = random_point(rng, n, -1.0, 1.0);
    CostSequence::isotropic(alpha, thetas, beta, x0, ActionSpace::cube(n, -1.0, 1.0).unwrap()).unwrap()
}

/// Random SPD Hessian with eigenvalues in roughly `[0.2, 5]`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0));
    &b * b.transpose() + DMatrix::identity(n, n) * rng.random_range(0.2..=1.0)
}

/// General quadratic instance on a random box.
pub fn random_general(rng: &mut ChaCha8Rng, max_horizon: usize) -> CostSequence {
    let n = rng.random_range(1..=3);
    let horizon = rng.random_range(1..=max_horizon);
    let beta = log_uniform(rng, 0.1, 10.0);
    let costs = (0..horizon)
        .map(|_| {
            let p = random_spd(rng, n);
            let q = random_point(rng, n, -3.0, 3.0);
            QuadraticStageCost::new(p, q, rng.random_range(-1.0..=1.0)).unwrap()
        })
        .collect();
    let lower = random_point(rng, n, -2.0, -0.5);
    let upper = random_point(rng, n, 0.5, 2.0);
    let x0 = Point::zeros(n);
    CostSequence::new(costs, beta, x0, ActionSpace::new(lower, upper).unwrap()).unwrap()
}
