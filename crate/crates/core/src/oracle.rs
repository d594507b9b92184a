//! Hindsight-optimal trajectories and the inverse of the tridiagonal
//! optimality system of scalar isotropic instances.
//!
//! For `f_t(x) = (α/2)(x − θ_t)²` the unconstrained optimum solves `H x = θ`
//! (plus `(β/α)x_0` in the first row) where `H` has diagonal `1 + 2β/α`,
//! last diagonal `1 + β/α` and off-diagonals `−β/α`. Its inverse `A` is
//! nonnegative with row sums at most 1, so the optimum lies in `X` whenever
//! every `θ_t` and `x_0` do.

use std::io::Write;

use nalgebra::DMatrix;

use crate::cost::{CostSequence, Trajectory};
use crate::error::{Error, Result};
use crate::pgm::{self, PgmOptions, SmoothObjective};
use crate::space::Point;

/// Hindsight optimum from the iterative solver.
#[derive(Debug, Clone)]
pub struct OfflineSolution {
    pub trajectory: Trajectory,
    pub cost: f64,
    /// Certified bound on `cost − C*`.
    pub slack: f64,
    /// Gradient-mapping norm at the returned trajectory.
    pub residual: f64,
    pub iterations: usize,
}

struct Stacked<'a>(&'a CostSequence);

impl Stacked<'_> {
    fn points(&self, x: &[f64]) -> Vec<Point> {
        Trajectory::from_flat(self.0.dim(), x).into_points()
    }
}

impl SmoothObjective for Stacked<'_> {
    fn dim(&self) -> usize {
        self.0.dim() * self.0.horizon()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.0.total_cost_unchecked(&self.points(x))
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        let seq = self.0;
        let n = seq.dim();
        let tt = seq.horizon();
        let pts = self.points(x);
        for t in 1..=tt {
            let prev = if t == 1 { seq.x0() } else { &pts[t - 2] };
            let next = if t == tt { &pts[t - 1] } else { &pts[t] };
            let g = seq.partial_gradient_unchecked(t, prev, &pts[t - 1], next);
            grad[(t - 1) * n..t * n].copy_from_slice(g.as_slice());
        }
    }
}

/// Default iteration cap of [`solve_offline`].
pub const OFFLINE_MAX_ITERS: usize = 500_000;

/// Projected accelerated gradient on the stacked problem until the
/// gradient-mapping norm is at most `tolerance`. The reported slack is at
/// most `tolerance² / (2α)`.
pub fn solve_offline(seq: &CostSequence, tolerance: f64) -> Result<OfflineSolution> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidConfig(format!("oracle tolerance must be positive, got {tolerance}")));
    }
    let tt = seq.horizon();
    let space = seq.space();
    let (big_l, _) = seq.smoothness_params();
    let lower: Vec<f64> = (0..tt).flat_map(|_| space.lower().iter().copied()).collect();
    let upper: Vec<f64> = (0..tt).flat_map(|_| space.upper().iter().copied()).collect();
    let start = Trajectory::constant(seq.x0(), tt).to_flat();
    let sol = pgm::minimize(
        &Stacked(seq),
        &lower,
        &upper,
        &start,
        &PgmOptions {
            step: 1.0 / big_l,
            strong_convexity: seq.class_params().alpha,
            tolerance,
            max_iters: OFFLINE_MAX_ITERS,
        },
    )?;
    let trajectory = Trajectory::from_flat(seq.dim(), &sol.x);
    Ok(OfflineSolution {
        cost: seq.total_cost_unchecked(trajectory.points()),
        trajectory,
        slack: sol.suboptimality,
        residual: sol.residual,
        iterations: sol.iterations,
    })
}

/// The matrix `H` of the scalar isotropic optimality condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TridiagonalSystem {
    pub dim: usize,
    pub diag_interior: f64,
    pub diag_last: f64,
    pub offdiag: f64,
}

impl TridiagonalSystem {
    pub fn new(alpha: f64, beta: f64, horizon: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidConfig(format!("need alpha > 0 and beta >= 0, got {alpha}, {beta}")));
        }
        if horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        let r = beta / alpha;
        Ok(TridiagonalSystem {
            dim: horizon,
            diag_interior: 1.0 + 2.0 * r,
            diag_last: 1.0 + r,
            offdiag: -r,
        })
    }

    fn diag(&self, i: usize) -> f64 {
        if i + 1 == self.dim {
            self.diag_last
        } else {
            self.diag_interior
        }
    }

    /// Smallest row margin `|h_ii| − Σ_{j≠i} |h_ij|`.
    pub fn dominance_margin(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let neighbours = (i > 0) as usize + (i + 1 < self.dim) as usize;
                self.diag(i).abs() - neighbours as f64 * self.offdiag.abs()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            if i == j {
                self.diag(i)
            } else if i.abs_diff(j) == 1 {
                self.offdiag
            } else {
                0.0
            }
        })
    }

    /// Thomas algorithm. No pivoting is needed: `H` is strictly diagonally
    /// dominant.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        if rhs.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: rhs.len() });
        }
        let e = self.offdiag;
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag(0);
        c[0] = e / denom;
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag(i) - e * c[i - 1];
            c[i] = e / denom;
            d[i] = (rhs[i] - e * d[i - 1]) / denom;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Ok(x)
    }
}

fn common_isotropic(seq: &CostSequence) -> Result<(f64, Vec<&Point>)> {
    let mut alpha = None;
    let mut thetas = Vec::with_capacity(seq.horizon());
    for (i, cost) in seq.costs().iter().enumerate() {
        let (a, theta) = cost
            .isotropic_params()
            .ok_or_else(|| Error::InvalidCost(format!("stage {} is not isotropic", i + 1)))?;
        match alpha {
            None => alpha = Some(a),
            Some(prev) if prev != a => {
                return Err(Error::InvalidCost(format!(
                    "closed form needs a common alpha, stage {} has {a} vs {prev}",
                    i + 1
                )))
            }
            _ => {}
        }
        if !seq.space().contains(theta) {
            return Err(Error::OutsideSpace(format!("theta_{} = {:?}", i + 1, theta.as_slice())));
        }
        thetas.push(theta);
    }
    Ok((alpha.expect("horizon is at least 1"), thetas))
}

/// Exact optimum of an isotropic instance with every `θ_t` in `X`, one
/// tridiagonal solve per coordinate.
pub fn solve_isotropic_closed_form(seq: &CostSequence) -> Result<Trajectory> {
    let (alpha, thetas) = common_isotropic(seq)?;
    let tt = seq.horizon();
    let n = seq.dim();
    let h = TridiagonalSystem::new(alpha, seq.beta(), tt)?;
    let r = seq.beta() / alpha;
    let mut points = vec![Point::zeros(n); tt];
    for i in 0..n {
        let mut rhs: Vec<f64> = thetas.iter().map(|th| th[i]).collect();
        rhs[0] += r * seq.x0()[i];
        let xs = h.solve(&rhs)?;
        for (p, v) in points.iter_mut().zip(xs) {
            p[i] = v;
        }
    }
    let space = seq.space();
    for (t, p) in points.iter().enumerate() {
        // A is nonnegative with unit row sums bounded by one, so this holds up to roundoff
        let slack = 1e-9 * space.diameter();
        let inside = (0..n).all(|i| p[i] >= space.lower()[i] - slack && p[i] <= space.upper()[i] + slack);
        assert!(inside, "closed-form optimum left X at stage {}", t + 1);
    }
    Ok(Trajectory::new(points.iter().map(|p| space.project_unchecked(p)).collect()))
}

/// Closed-form entries of `A = H⁻¹`.
///
/// With `ρ = (√Q_f − 1)/(√Q_f + 1)`, `Q_f = (α + 4β)/α` and `ξ = α/β + 2`,
/// `a_{t,t+τ} = (α/β) u_t v_{t+τ}` where `u_t = ρ/(1−ρ²)(ρ^{−t} − ρ^t)` and
/// `v_t = c_3 ρ^{−(T−t)} + c_4 ρ^{T−t}`. Both factors over- or underflow
/// for long horizons, so the product is evaluated as
/// `(α/β) [ρ^t u_t] [ρ^{−T} v_T] [ρ^{T−t−τ} v_{t+τ}/v_T] ρ^τ`, each bracket
/// being bounded.
#[derive(Debug, Clone)]
pub struct InverseEntryParams {
    pub alpha: f64,
    pub beta: f64,
    pub horizon: usize,
    pub rho: f64,
    pub xi_mat: f64,
    /// `ρ^t u_t` for `t = 1..=T` (index `t − 1`).
    pub u_scaled: Vec<f64>,
    /// `ρ^{−T} v_T`.
    pub v_last_scaled: f64,
    /// `ρ^{T−t} v_t / v_T` for `t = 1..=T` (index `t − 1`).
    pub v_ratio: Vec<f64>,
    /// `c_3 / v_T`.
    pub c3_unit: f64,
    /// `c_4 / v_T`.
    pub c4_unit: f64,
}

pub fn inverse_entries(alpha: f64, beta: f64, horizon: usize) -> Result<InverseEntryParams> {
    if beta == 0.0 {
        return Err(Error::InvalidConfig(
            "beta = 0 decouples the stages: A is the identity".into(),
        ));
    }
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidConfig(format!("need alpha, beta > 0, got {alpha}, {beta}")));
    }
    if horizon == 0 {
        return Err(Error::InvalidConfig("horizon must be at least 1".into()));
    }
    let q_f = (alpha + 4.0 * beta) / alpha;
    let sq = q_f.sqrt();
    let rho = (sq - 1.0) / (sq + 1.0);
    let xi = alpha / beta + 2.0;
    let rr = 1.0 - rho * rho;
    // ρ^t u_t = ρ(1 − ρ^{2t})/(1 − ρ²), with t = 0 giving 0
    let u_at = |t: usize| rho * (1.0 - rho.powi(2 * t as i32)) / rr;
    let u_scaled: Vec<f64> = (1..=horizon).map(u_at).collect();
    // ρ^{−T} v_T = 1 / (−ρ·ρ^{T−1}u_{T−1} + (ξ − 1)·ρ^T u_T)
    let v_last_scaled = 1.0 / (-rho * u_at(horizon - 1) + (xi - 1.0) * u_at(horizon));
    let c3_unit = ((xi - 1.0) * rho - rho * rho) / rr;
    let c4_unit = (1.0 - (xi - 1.0) * rho) / rr;
    let v_ratio = (1..=horizon)
        .map(|t| c3_unit + c4_unit * rho.powi(2 * (horizon - t) as i32))
        .collect();
    Ok(InverseEntryParams {
        alpha,
        beta,
        horizon,
        rho,
        xi_mat: xi,
        u_scaled,
        v_last_scaled,
        v_ratio,
        c3_unit,
        c4_unit,
    })
}

impl InverseEntryParams {
    /// `a_{t,s}` for `1 ≤ t, s ≤ T` (A is symmetric).
    pub fn entry(&self, t: usize, s: usize) -> f64 {
        assert!(t >= 1 && s >= 1 && t <= self.horizon && s <= self.horizon, "entry ({t}, {s}) out of range");
        let (t, s) = if t <= s { (t, s) } else { (s, t) };
        let tau = s - t;
        self.alpha / self.beta
            * self.u_scaled[t - 1]
            * self.v_last_scaled
            * self.v_ratio[s - 1]
            * self.rho.powi(tau as i32)
    }

    /// Entry lower bound `(α/(α+β))(1−ρ)ρ^τ`.
    pub fn lower_bound(&self, tau: usize) -> f64 {
        self.alpha / (self.alpha + self.beta) * (1.0 - self.rho) * self.rho.powi(tau as i32)
    }

    /// `ρ² − ξρ + 1`, zero up to roundoff.
    pub fn characteristic_residual(&self) -> f64 {
        self.rho * self.rho - self.xi_mat * self.rho + 1.0
    }

    /// Unscaled `u_t`; overflows for long horizons.
    pub fn u(&self, t: usize) -> f64 {
        self.u_scaled[t - 1] / self.rho.powi(t as i32)
    }

    /// Unscaled `v_t`; underflows for long horizons.
    pub fn v(&self, t: usize) -> f64 {
        let v_last = self.v_last_scaled * self.rho.powi(self.horizon as i32);
        v_last * self.v_ratio[t - 1] / self.rho.powi((self.horizon - t) as i32)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.horizon, self.horizon, |i, j| self.entry(i + 1, j + 1))
    }

    /// Writes `a_{t,t+τ}` with one row per `t` and one column per offset τ;
    /// cells past the horizon are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let tt = self.horizon;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend((0..tt).map(|tau| tau.to_string()));
        w.write_record(&header)?;
        for t in 1..=tt {
            let mut row = vec![t.to_string()];
            for tau in 0..tt {
                row.push(if t + tau <= tt { format!("{:e}", self.entry(t, t + tau)) } else { String::new() });
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Largest grid [`brute_force_oracle`] will enumerate.
pub const GRID_LIMIT: f64 = 1e7;

/// Exhaustive minimization of the total cost over a uniform grid with
/// `points_per_axis` values per coordinate (both box ends included).
pub fn brute_force_oracle(seq: &CostSequence, points_per_axis: usize) -> Result<Trajectory> {
    if points_per_axis < 2 {
        return Err(Error::InvalidConfig("need at least two grid points per axis".into()));
    }
    let n = seq.dim();
    let tt = seq.horizon();
    let per_stage = (points_per_axis as f64).powi(n as i32);
    let total = per_stage.powi(tt as i32);
    if total > GRID_LIMIT {
        return Err(Error::GridTooLarge { points: total, limit: GRID_LIMIT });
    }
    let per_stage = per_stage as usize;
    let space = seq.space();
    let axis = |i: usize, k: usize| {
        let (lo, hi) = (space.lower()[i], space.upper()[i]);
        lo + (hi - lo) * k as f64 / (points_per_axis - 1) as f64
    };
    let stage_points: Vec<Point> = (0..per_stage)
        .map(|mut idx| {
            Point::from_fn(n, |i, _| {
                let k = idx % points_per_axis;
                idx /= points_per_axis;
                axis(i, k)
            })
        })
        .collect();
    let stage_values: Vec<Vec<f64>> = seq
        .costs()
        .iter()
        .map(|c| stage_points.iter().map(|p| c.value(p)).collect())
        .collect();
    let half_beta = 0.5 * seq.beta();
    let mut digits = vec![0usize; tt];
    let mut best = f64::INFINITY;
    let mut best_digits = digits.clone();
    loop {
        let mut cost = 0.0;
        let mut prev = seq.x0();
        for (t, &d) in digits.iter().enumerate() {
            let p = &stage_points[d];
            cost += stage_values[t][d] + half_beta * (p - prev).norm_squared();
            prev = p;
        }
        if cost < best {
            best = cost;
            best_digits.clone_from(&digits);
        }
        let mut k = 0;
        loop {
            if k == tt {
                return Ok(Trajectory::new(best_digits.iter().map(|&d| stage_points[d].clone()).collect()));
            }
            digits[k] += 1;
            if digits[k] < per_stage {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}
