//! Stage costs, cost sequences, trajectories and the total cost
//! `C(x) = Σ_t f_t(x_t) + (β/2)‖x_t − x_{t−1}‖²`.
//!
//! Stages are 1-indexed throughout the public API (`t ∈ 1..=T`), matching
//! the convention that `x_0` is the fixed initial action. Trajectories store
//! stage `t` at `points()[t - 1]`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pgm::{self, PgmOptions, SmoothObjective};
use crate::space::{ActionSpace, Point};

/// Boxes with more axes than this have G bounded by a relaxation instead of
/// vertex enumeration.
const MAX_VERTEX_AXES: usize = 20;

/// Relative slack allowed when checking a declared class against computed
/// eigenvalues and gradient norms.
const CLASS_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
struct Isotropic {
    alpha: f64,
    theta: Point,
}

/// `f(x) = ½ x'Px + q'x + c` with `P` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticStageCost {
    p: DMatrix<f64>,
    q: Point,
    c: f64,
    isotropic: Option<Isotropic>,
    min_eig: f64,
    max_eig: f64,
}

impl QuadraticStageCost {
    pub fn new(p: DMatrix<f64>, q: Point, c: f64) -> Result<Self> {
        let n = q.len();
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.nrows().max(p.ncols()),
            });
        }
        if n == 0 {
            return Err(Error::InvalidCost("empty cost".into()));
        }
        if !c.is_finite() || p.iter().chain(q.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidCost("non-finite coefficient".into()));
        }
        let scale = p.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (p[(i, j)] - p[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidCost(format!("P is not symmetric at ({i}, {j})")));
                }
            }
        }
        let eig = SymmetricEigen::new(p.clone()).eigenvalues;
        let min_eig = eig.min();
        let max_eig = eig.max();
        if min_eig <= 0.0 {
            return Err(Error::InvalidCost(format!(
                "P is not positive definite (min eigenvalue {min_eig})"
            )));
        }
        Ok(QuadraticStageCost {
            p,
            q,
            c,
            isotropic: None,
            min_eig,
            max_eig,
        })
    }

    /// `f(x) = (α/2)‖x − θ‖²`.
    pub fn isotropic(alpha: f64, theta: Point) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidCost(format!("alpha must be positive, got {alpha}")));
        }
        if theta.is_empty() || theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCost("theta must be finite and non-empty".into()));
        }
        let n = theta.len();
        Ok(QuadraticStageCost {
            p: DMatrix::identity(n, n) * alpha,
            q: &theta * -alpha,
            c: 0.5 * alpha * theta.norm_squared(),
            isotropic: Some(Isotropic { alpha, theta }),
            min_eig: alpha,
            max_eig: alpha,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn linear(&self) -> &Point {
        &self.q
    }

    pub fn offset(&self) -> f64 {
        self.c
    }

    /// `(α, θ)` when the cost was built as `(α/2)‖x − θ‖²`.
    pub fn isotropic_params(&self) -> Option<(f64, &Point)> {
        self.isotropic.as_ref().map(|iso| (iso.alpha, &iso.theta))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eig
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.max_eig
    }

    pub fn value(&self, x: &Point) -> f64 {
        match &self.isotropic {
            Some(iso) => 0.5 * iso.alpha * (x - &iso.theta).norm_squared(),
            None => 0.5 * x.dot(&(&self.p * x)) + self.q.dot(x) + self.c,
        }
    }

    pub fn gradient(&self, x: &Point) -> Point {
        match &self.isotropic {
            Some(iso) => (x - &iso.theta) * iso.alpha,
            None => &self.p * x + &self.q,
        }
    }

    fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.p[(i, j)] == 0.0))
    }

    /// Minimizer over the box. Exact (a clamp) for isotropic and diagonal
    /// costs; projected accelerated gradient to a 1e-10 mapping norm otherwise.
    pub fn minimizer_over(&self, space: &ActionSpace) -> Result<Point> {
        space.check_dim(&self.q)?;
        if let Some(iso) = &self.isotropic {
            return Ok(space.project_unchecked(&iso.theta));
        }
        if self.is_diagonal() {
            let free = Point::from_iterator(self.dim(), (0..self.dim()).map(|i| -self.q[i] / self.p[(i, i)]));
            return Ok(space.project_unchecked(&free));
        }
        struct Single<'a>(&'a QuadraticStageCost);
        impl SmoothObjective for Single<'_> {
            fn dim(&self) -> usize {
                self.0.dim()
            }
            fn value(&self, x: &[f64]) -> f64 {
                self.0.value(&Point::from_column_slice(x))
            }
            fn gradient(&self, x: &[f64], g: &mut [f64]) {
                g.copy_from_slice(self.0.gradient(&Point::from_column_slice(x)).as_slice());
            }
        }
        let sol = pgm::minimize(
            &Single(self),
            space.lower().as_slice(),
            space.upper().as_slice(),
            space.center().as_slice(),
            &PgmOptions {
                step: 1.0 / self.max_eig,
                strong_convexity: self.min_eig,
                tolerance: 1e-10,
                max_iters: 100_000,
            },
        )?;
        Ok(Point::from_vec(sol.x))
    }

    /// Supremum of `‖∇f‖` over the box. The gradient is affine, so its norm
    /// peaks at a vertex; above 20 axes a relaxation `l·D/2 + ‖∇f(center)‖`
    /// is returned instead.
    pub fn gradient_bound(&self, space: &ActionSpace) -> f64 {
        if space.dim() > MAX_VERTEX_AXES {
            return self.max_eig * space.diameter() / 2.0 + self.gradient(&space.center()).norm();
        }
        space.vertices().map(|v| self.gradient(&v).norm()).fold(0.0, f64::max)
    }
}

/// Class `F_X(α, l, G)`: α-strongly convex, l-smooth, gradient bounded by G on X.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionClassParams {
    pub alpha: f64,
    pub l: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

impl FunctionClassParams {
    pub fn new(alpha: f64, l: f64, g: f64) -> Result<Self> {
        if !(alpha > 0.0 && l.is_finite() && g.is_finite()) {
            return Err(Error::InvalidClass(format!("alpha must be positive (got {alpha})")));
        }
        if alpha > l {
            return Err(Error::InvalidClass(format!("alpha {alpha} exceeds l {l}")));
        }
        if g <= 0.0 {
            return Err(Error::InvalidClass(format!("G must be positive (got {g})")));
        }
        Ok(FunctionClassParams { alpha, l, g })
    }

    /// Tightest class containing every cost.
    pub fn derive(costs: &[QuadraticStageCost], space: &ActionSpace) -> Result<Self> {
        let alpha = costs.iter().map(|c| c.min_eig).fold(f64::INFINITY, f64::min);
        let l = costs.iter().map(|c| c.max_eig).fold(0.0, f64::max);
        let g = costs.iter().map(|c| c.gradient_bound(space)).fold(0.0, f64::max);
        // a zero gradient bound only happens when every cost is flat at every vertex
        Self::new(alpha, l, g.max(f64::MIN_POSITIVE))
    }

    /// Whether this class contains the class `tight` (with a relative slack).
    fn covers(&self, tight: &FunctionClassParams) -> Result<()> {
        let slack = |v: f64| CLASS_SLACK * v.abs().max(1.0);
        if self.alpha > tight.alpha + slack(tight.alpha) {
            return Err(Error::InvalidClass(format!(
                "declared alpha {} exceeds smallest curvature {}",
                self.alpha, tight.alpha
            )));
        }
        if self.l + slack(tight.l) < tight.l {
            return Err(Error::InvalidClass(format!(
                "declared l {} below largest curvature {}",
                self.l, tight.l
            )));
        }
        if self.g + slack(tight.g) < tight.g {
            return Err(Error::InvalidClass(format!(
                "declared G {} below gradient bound {} on X",
                self.g, tight.g
            )));
        }
        Ok(())
    }
}

/// Decision profile `(x_1, …, x_T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<Point>,
}

impl Trajectory {
    pub fn new(points: Vec<Point>) -> Self {
        Trajectory { points }
    }

    pub fn from_scalars(values: &[f64]) -> Self {
        Trajectory {
            points: values.iter().map(|&v| Point::from_element(1, v)).collect(),
        }
    }

    pub fn constant(point: &Point, len: usize) -> Self {
        Trajectory {
            points: vec![point.clone(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Stage `t` (1-indexed).
    pub fn stage(&self, t: usize) -> &Point {
        &self.points[t - 1]
    }

    /// First coordinate of every point.
    pub fn scalars(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| p.iter().copied()).collect()
    }

    pub fn from_flat(n: usize, flat: &[f64]) -> Self {
        Trajectory {
            points: flat.chunks(n).map(Point::from_column_slice).collect(),
        }
    }

    /// Largest coordinate-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Trajectory) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// The object every algorithm consumes: `T` stage costs, switching weight β,
/// initial action `x_0`, box `X` and the declared function class.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSequence {
    costs: Vec<QuadraticStageCost>,
    beta: f64,
    x0: Point,
    space: ActionSpace,
    class: FunctionClassParams,
}

impl CostSequence {
    /// Builds a sequence whose class parameters are derived exactly from the
    /// costs (min/max eigenvalues, vertex gradient bound).
    pub fn new(costs: Vec<QuadraticStageCost>, beta: f64, x0: Point, space: ActionSpace) -> Result<Self> {
        Self::validate_parts(&costs, beta, &x0, &space)?;
        let class = FunctionClassParams::derive(&costs, &space)?;
        Ok(CostSequence {
            costs,
            beta,
            x0,
            space,
            class,
        })
    }

    /// Builds a sequence with a declared class, which must contain every cost.
    pub fn with_class(
        costs: Vec<QuadraticStageCost>,
        beta: f64,
        x0: Point,
        space: ActionSpace,
        class: FunctionClassParams,
    ) -> Result<Self> {
        Self::validate_parts(&costs, beta, &x0, &space)?;
        let class = FunctionClassParams::new(class.alpha, class.l, class.g)?;
        class.covers(&FunctionClassParams::derive(&costs, &space)?)?;
        Ok(CostSequence {
            costs,
            beta,
            x0,
            space,
            class,
        })
    }

    /// Isotropic sequence `f_t(x) = (α/2)‖x − θ_t‖²`.
    pub fn isotropic(alpha: f64, thetas: Vec<Point>, beta: f64, x0: Point, space: ActionSpace) -> Result<Self> {
        let costs = thetas
            .into_iter()
            .map(|theta| QuadraticStageCost::isotropic(alpha, theta))
            .collect::<Result<Vec<_>>>()?;
        Self::new(costs, beta, x0, space)
    }

    /// Scalar isotropic sequence over `[lo, hi]`.
    pub fn scalar_isotropic(alpha: f64, thetas: &[f64], beta: f64, x0: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::isotropic(
            alpha,
            thetas.iter().map(|&v| Point::from_element(1, v)).collect(),
            beta,
            Point::from_element(1, x0),
            ActionSpace::interval(lo, hi)?,
        )
    }

    fn validate_parts(costs: &[QuadraticStageCost], beta: f64, x0: &Point, space: &ActionSpace) -> Result<()> {
        if costs.is_empty() {
            return Err(Error::InvalidConfig("a cost sequence needs T >= 1 stages".into()));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidConfig(format!("beta must be finite and >= 0, got {beta}")));
        }
        space.check_dim(x0)?;
        for cost in costs {
            space.check_dim(cost.linear())?;
        }
        if !space.contains(x0) {
            return Err(Error::OutsideSpace("initial action x0".into()));
        }
        Ok(())
    }

    /// `T`.
    pub fn horizon(&self) -> usize {
        self.costs.len()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x0(&self) -> &Point {
        &self.x0
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    pub fn class_params(&self) -> &FunctionClassParams {
        &self.class
    }

    pub fn costs(&self) -> &[QuadraticStageCost] {
        &self.costs
    }

    /// `f_t` (1-indexed).
    pub fn cost(&self, t: usize) -> Result<&QuadraticStageCost> {
        self.check_stage(t)?;
        Ok(&self.costs[t - 1])
    }

    pub(crate) fn check_stage(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.horizon() {
            return Err(Error::StageOutOfRange { t, horizon: self.horizon() });
        }
        Ok(())
    }

    fn check_trajectory(&self, traj: &Trajectory) -> Result<()> {
        if traj.len() != self.horizon() {
            return Err(Error::LengthMismatch {
                expected: self.horizon(),
                found: traj.len(),
            });
        }
        for p in traj.points() {
            self.space.check_dim(p)?;
        }
        Ok(())
    }

    /// `Σ f_t(x_t) + (β/2) Σ ‖x_t − x_{t−1}‖²` with the sequence's `x_0`.
    pub fn total_cost(&self, traj: &Trajectory) -> Result<f64> {
        self.check_trajectory(traj)?;
        Ok(self.total_cost_unchecked(traj.points()))
    }

    pub(crate) fn total_cost_unchecked(&self, points: &[Point]) -> f64 {
        let mut prev = &self.x0;
        let mut total = 0.0;
        for (cost, x) in self.costs.iter().zip(points) {
            total += cost.value(x) + 0.5 * self.beta * (x - prev).norm_squared();
            prev = x;
        }
        total
    }

    /// Partial gradient `g_t` of the total cost with respect to `x_t`.
    /// `x_next` is ignored at `t = T`.
    pub fn partial_gradient(&self, t: usize, x_prev: &Point, x_t: &Point, x_next: &Point) -> Result<Point> {
        self.check_stage(t)?;
        for p in [x_prev, x_t, x_next] {
            self.space.check_dim(p)?;
        }
        Ok(self.partial_gradient_unchecked(t, x_prev, x_t, x_next))
    }

    pub(crate) fn partial_gradient_unchecked(&self, t: usize, x_prev: &Point, x_t: &Point, x_next: &Point) -> Point {
        let mut g = self.costs[t - 1].gradient(x_t);
        let beta = self.beta;
        if t < self.horizon() {
            for i in 0..g.len() {
                g[i] += beta * (2.0 * x_t[i] - x_prev[i] - x_next[i]);
            }
        } else {
            for i in 0..g.len() {
                g[i] += beta * (x_t[i] - x_prev[i]);
            }
        }
        g
    }

    /// Full gradient of the total cost, one block per stage.
    pub fn stacked_gradient(&self, traj: &Trajectory) -> Result<Vec<Point>> {
        self.check_trajectory(traj)?;
        let pts = traj.points();
        let tt = self.horizon();
        Ok((1..=tt)
            .map(|t| {
                let prev = if t == 1 { &self.x0 } else { &pts[t - 2] };
                let next = if t == tt { &pts[t - 1] } else { &pts[t] };
                self.partial_gradient_unchecked(t, prev, &pts[t - 1], next)
            })
            .collect())
    }

    /// `(L, Q_f)` with `L = l + 4β` and `Q_f = L/α`.
    pub fn smoothness_params(&self) -> (f64, f64) {
        let big_l = self.class.l + 4.0 * self.beta;
        (big_l, big_l / self.class.alpha)
    }

    /// Constrained stage minimizers `θ_1, …, θ_T`.
    pub fn stage_minimizers(&self) -> Result<Vec<Point>> {
        self.costs.iter().map(|c| c.minimizer_over(&self.space)).collect()
    }

    /// `Σ_t ‖θ_t − θ_{t−1}‖` with `θ_0 = x_0`.
    pub fn path_length(&self) -> Result<f64> {
        let thetas = self.stage_minimizers()?;
        let mut prev = &self.x0;
        let mut total = 0.0;
        for theta in &thetas {
            total += (theta - prev).norm();
            prev = theta;
        }
        Ok(total)
    }
}
