//! Experimental instances: economic dispatch, trajectory tracking, the
//! 16-stage special example, and synthetic demand/wind traces.

use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cost::{CostSequence, QuadraticStageCost};
use crate::error::{Error, Result};
use crate::space::{ActionSpace, Point};

/// Generator cost `a x² + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Dispatch with imbalance penalty:
/// `f_t(x) = Σ_i (a_i x_i² + b_i x_i + c_i) + ξ_t (Σ_i x_i + r_t − d_t)²` over
/// `0 ≤ x_i ≤ cap_i`. Generator lower limits are taken to be zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchSpec {
    pub generators: Vec<Generator>,
    pub capacities: Vec<f64>,
    pub xi: f64,
    /// Per-stage penalty overriding `xi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_series: Option<Vec<f64>>,
    pub beta: f64,
    pub x0: Vec<f64>,
    pub demand: Vec<f64>,
    pub renewable: Vec<f64>,
}

impl DispatchSpec {
    /// Three-generator system with `ξ = 0.5`, `β = 10`, capacities
    /// 2300/2900/4100 MW and initial outputs 1200/1000/1400 MW.
    pub fn three_generator(demand: Vec<f64>, renewable: Vec<f64>) -> Self {
        DispatchSpec {
            generators: vec![
                Generator { a: 2.0, b: 15.0, c: 10.0 },
                Generator { a: 2.0, b: 10.0, c: 27.0 },
                Generator { a: 2.0, b: 6.0, c: 21.0 },
            ],
            capacities: vec![2300.0, 2900.0, 4100.0],
            xi: 0.5,
            xi_series: None,
            beta: 10.0,
            x0: vec![1200.0, 1000.0, 1400.0],
            demand,
            renewable,
        }
    }

    /// [`Self::three_generator`] on synthetic traces of length `horizon`.
    pub fn synthetic(horizon: usize, seed: u64) -> Result<Self> {
        Ok(Self::three_generator(
            synth_traces(horizon, seed, TraceProfile::DiurnalDemand)?,
            synth_traces(horizon, seed.wrapping_add(1), TraceProfile::GustyWind)?,
        ))
    }
}

pub fn build_dispatch(spec: &DispatchSpec) -> Result<CostSequence> {
    let n = spec.generators.len();
    if n == 0 {
        return Err(Error::InvalidConfig("dispatch needs at least one generator".into()));
    }
    for len in [spec.capacities.len(), spec.x0.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let horizon = spec.demand.len();
    if spec.renewable.len() != horizon {
        return Err(Error::LengthMismatch {
            expected: horizon,
            found: spec.renewable.len(),
        });
    }
    if let Some(xs) = &spec.xi_series {
        if xs.len() != horizon {
            return Err(Error::LengthMismatch { expected: horizon, found: xs.len() });
        }
    }
    if let Some(g) = spec.generators.iter().find(|g| !(g.a > 0.0 && g.a.is_finite())) {
        return Err(Error::InvalidCost(format!("generator quadratic coefficient must be positive, got {}", g.a)));
    }
    if let Some(cap) = spec.capacities.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
        return Err(Error::InvalidSpace(format!("capacity must be positive, got {cap}")));
    }
    let space = ActionSpace::new(Point::zeros(n), Point::from_column_slice(&spec.capacities))?;
    let costs = (0..horizon)
        .map(|t| {
            let xi = spec.xi_series.as_ref().map_or(spec.xi, |xs| xs[t]);
            if !(xi >= 0.0 && xi.is_finite()) {
                return Err(Error::InvalidCost(format!("imbalance penalty must be nonnegative, got {xi}")));
            }
            let gap = spec.renewable[t] - spec.demand[t];
            let p = DMatrix::from_fn(n, n, |i, j| {
                2.0 * xi + if i == j { 2.0 * spec.generators[i].a } else { 0.0 }
            });
            let q = Point::from_iterator(n, spec.generators.iter().map(|g| g.b + 2.0 * xi * gap));
            let c = spec.generators.iter().map(|g| g.c).sum::<f64>() + xi * gap * gap;
            QuadraticStageCost::new(p, q, c)
        })
        .collect::<Result<Vec<_>>>()?;
    CostSequence::new(costs, spec.beta, Point::from_column_slice(&spec.x0), space)
}

/// Parameters of the 16-stage special example.
pub const SPECIAL_THETA: [f64; 16] = [0., 0., 4., 0., 0., 4., 0., 4., 0., 4., 0., 4., 4., 0., 4., 4.];
pub const SPECIAL_BETA: f64 = 13.0;

/// `f_t(x) = ½(x − θ_t)²` on `[0, 4]`, `β = 13`, `x_0 = 0`.
pub fn build_special_example() -> CostSequence {
    CostSequence::scalar_isotropic(1.0, &SPECIAL_THETA, SPECIAL_BETA, 0.0, 0.0, 4.0)
        .expect("special example is well formed")
}

/// Target tracking with `f_t(x) = ½‖x − y_t‖²`.
///
/// The usual form charges `(β/2)‖x_{t+1} − x_t‖²` for `t = 0..T−1` plus a
/// terminal `f_T`; relabeling charges each move on arrival instead, which
/// is the total cost used everywhere else. The constant `f_0(x_0)` is
/// dropped, so `targets` holds `y_1, …, y_T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingSpec {
    pub targets: Vec<Vec<f64>>,
    pub beta: f64,
    pub space: ActionSpace,
    pub x0: Vec<f64>,
}

pub fn build_tracking(spec: &TrackingSpec) -> Result<CostSequence> {
    let targets = spec.targets.iter().map(|y| Point::from_column_slice(y)).collect();
    CostSequence::isotropic(1.0, targets, spec.beta, Point::from_column_slice(&spec.x0), spec.space.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceProfile {
    /// `6500 + 1500 sin(2πt/288) + N(0, 120²)` MW, floored at 0.
    DiurnalDemand,
    /// `w_t = w_{t−1} + 0.02 (2000 − w_{t−1}) + N(0, 90²)`, clipped to
    /// `[0, 4500]` MW, starting at 2000.
    GustyWind,
}

/// Stages per day at 5-minute resolution.
pub const DAY_STAGES: usize = 288;
pub const WIND_MAX: f64 = 4500.0;

pub fn synth_traces(horizon: usize, seed: u64, profile: TraceProfile) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(Error::InvalidConfig("trace length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let series = match profile {
        TraceProfile::DiurnalDemand => {
            let noise = Normal::new(0.0, 120.0).expect("valid normal");
            (1..=horizon)
                .map(|t| {
                    let phase = 2.0 * std::f64::consts::PI * t as f64 / DAY_STAGES as f64;
                    (6500.0 + 1500.0 * phase.sin() + noise.sample(&mut rng)).max(0.0)
                })
                .collect()
        }
        TraceProfile::GustyWind => {
            let noise = Normal::new(0.0, 90.0).expect("valid normal");
            let mut w: f64 = 2000.0;
            (0..horizon)
                .map(|_| {
                    w = (w + 0.02 * (2000.0 - w) + noise.sample(&mut rng)).clamp(0.0, WIND_MAX);
                    w
                })
                .collect()
        }
    };
    Ok(series)
}

/// Reads a `timestamp,value` CSV with a header row. Timestamps are ignored
/// and values must already be at the stage cadence.
pub fn read_trace_csv<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = rec
            .get(1)
            .ok_or_else(|| Error::InvalidConfig(format!("trace row {} has no value column", i + 1)))?;
        let v: f64 = field
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("trace row {}: cannot parse {field:?}", i + 1)))?;
        if !v.is_finite() {
            return Err(Error::InvalidConfig(format!("trace row {}: value is not finite", i + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn read_trace_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_trace_csv(std::fs::File::open(path)?)
}
