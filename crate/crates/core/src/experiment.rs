//! Regret evaluation, window sweeps, Monte-Carlo lower-bound studies and
//! per-stage timing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adversary::{bound_report, segmented_realization, AdversaryConfig, BoundInputs, BoundReport};
use crate::cost::{CostSequence, Trajectory};
use crate::error::{Error, Result};
use crate::mpc::{run_mpc, MpcConfig, TerminalCost};
use crate::online::{run_ogd, run_rhag, run_rhgd, AlgoConfig, RunOutput};
use crate::oracle::{solve_isotropic_closed_form, solve_offline, OfflineSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ogd,
    Rhgd,
    Rhag,
    Mpc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Ogd, Algorithm::Rhgd, Algorithm::Rhag, Algorithm::Mpc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ogd => "ogd",
            Algorithm::Rhgd => "rhgd",
            Algorithm::Rhag => "rhag",
            Algorithm::Mpc => "mpc",
        }
    }

    /// Whether the algorithm can run with window `w`.
    pub fn supports_window(self, w: usize) -> bool {
        !(self == Algorithm::Mpc && w == 0)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ogd" => Ok(Algorithm::Ogd),
            "rhgd" => Ok(Algorithm::Rhgd),
            "rhag" => Ok(Algorithm::Rhag),
            "mpc" => Ok(Algorithm::Mpc),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?} (expected ogd, rhgd, rhag or mpc)"))),
        }
    }
}

/// Knobs shared by every run in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunSettings {
    /// Gradient-mapping tolerance of the iterative offline oracle.
    pub oracle_tolerance: f64,
    pub mpc_terminal: TerminalCost,
    pub mpc_inner_tolerance: f64,
    pub mpc_inner_max_iters: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            oracle_tolerance: 1e-9,
            mpc_terminal: TerminalCost::Zero,
            mpc_inner_tolerance: 1e-9,
            mpc_inner_max_iters: 10_000,
        }
    }
}

impl RunSettings {
    pub fn mpc_config(&self, window: usize) -> MpcConfig {
        MpcConfig {
            window,
            terminal: self.mpc_terminal,
            inner_tolerance: self.mpc_inner_tolerance,
            inner_max_iters: self.mpc_inner_max_iters,
        }
    }
}

/// Runs one algorithm with the default step sizes. OGD ignores `window`.
pub fn run_algorithm(seq: &CostSequence, algorithm: Algorithm, window: usize, settings: &RunSettings) -> Result<RunOutput> {
    let cfg = AlgoConfig::defaults(seq, window);
    match algorithm {
        Algorithm::Ogd => run_ogd(seq, &cfg),
        Algorithm::Rhgd => run_rhgd(seq, &cfg),
        Algorithm::Rhag => run_rhag(seq, &cfg),
        Algorithm::Mpc => run_mpc(seq, &settings.mpc_config(window)),
    }
}

/// Hindsight optimum: the tridiagonal closed form when the instance is
/// isotropic with a common α and every `θ_t` in `X`, the iterative solver
/// otherwise.
pub fn offline_reference(seq: &CostSequence, tolerance: f64) -> Result<OfflineSolution> {
    match solve_isotropic_closed_form(seq) {
        Ok(trajectory) => Ok(OfflineSolution {
            cost: seq.total_cost(&trajectory)?,
            trajectory,
            slack: 0.0,
            residual: 0.0,
            iterations: 0,
        }),
        Err(Error::InvalidCost(_) | Error::OutsideSpace(_)) => solve_offline(seq, tolerance),
        Err(e) => Err(e),
    }
}

/// Upper-bound constants for `seq` with its measured path length as `L_T`.
pub fn sequence_bounds(seq: &CostSequence, window: usize) -> Result<BoundReport> {
    let class = seq.class_params();
    bound_report(BoundInputs {
        alpha: class.alpha,
        l: class.l,
        beta: seq.beta(),
        g: class.g,
        diameter: seq.space().diameter(),
        budget: seq.path_length()?,
        window,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RegretRecord {
    pub algorithm: Algorithm,
    pub window: usize,
    #[serde(skip)]
    pub trajectory: Trajectory,
    pub online_cost: f64,
    pub offline_cost: f64,
    pub regret: f64,
    /// Certified bound on the offline cost's distance above the optimum.
    pub offline_slack: f64,
    pub per_stage_seconds: Vec<f64>,
    pub per_stage_gradients: Vec<u64>,
}

impl RegretRecord {
    pub fn mean_stage_seconds(&self) -> f64 {
        mean(&self.per_stage_seconds)
    }

    pub fn mean_stage_gradients(&self) -> f64 {
        let v: Vec<f64> = self.per_stage_gradients.iter().map(|&g| g as f64).collect();
        mean(&v)
    }
}

/// Runs `algorithm` and compares against `offline`.
pub fn evaluate(
    seq: &CostSequence,
    algorithm: Algorithm,
    window: usize,
    offline: &OfflineSolution,
    settings: &RunSettings,
) -> Result<RegretRecord> {
    let out = run_algorithm(seq, algorithm, window, settings)?;
    let online_cost = seq.total_cost(&out.trajectory)?;
    let regret = online_cost - offline.cost;
    let allowance = offline.slack + 1e-8 * offline.cost.abs().max(1.0);
    if regret < -allowance || !regret.is_finite() {
        return Err(Error::Numerical(format!(
            "{algorithm} at W={window} beat the offline oracle by {:e} (allowed {allowance:e})",
            -regret
        )));
    }
    Ok(RegretRecord {
        algorithm,
        window,
        trajectory: out.trajectory,
        online_cost,
        offline_cost: offline.cost,
        regret,
        offline_slack: offline.slack,
        per_stage_seconds: out.stage_seconds,
        per_stage_gradients: out.stage_gradients,
    })
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Every supported `(algorithm, W)` pair against one offline solve, sorted
/// by algorithm then window. MPC is skipped at `W = 0`.
pub fn sweep(seq: &CostSequence, algorithms: &[Algorithm], windows: &[usize], settings: &RunSettings) -> Result<Vec<RegretRecord>> {
    let offline = offline_reference(seq, settings.oracle_tolerance)?;
    let mut jobs: Vec<(Algorithm, usize)> = algorithms
        .iter()
        .flat_map(|&a| windows.iter().map(move |&w| (a, w)))
        .filter(|(a, w)| a.supports_window(*w))
        .collect();
    jobs.sort_unstable();
    jobs.dedup();
    par_map(&jobs, |&(a, w)| evaluate(seq, a, w, &offline, settings)).into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub algorithm: Algorithm,
    pub window: usize,
    pub realizations: usize,
    pub mean_regret: f64,
    pub stderr: f64,
    pub bound: f64,
    /// `mean_regret ≥ bound − 3·stderr`.
    pub pass: bool,
}

/// Mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let m = mean(values);
    if values.len() < 2 {
        return (m, 0.0);
    }
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Regret of `algorithm` on realizations `0..realizations` of the segmented
/// construction for each window, against the expectation bound.
pub fn lower_bound_monte_carlo(
    base: &AdversaryConfig,
    algorithms: &[Algorithm],
    windows: &[usize],
    realizations: usize,
    settings: &RunSettings,
) -> Result<Vec<McSummary>> {
    if realizations == 0 {
        return Err(Error::InvalidConfig("need at least one realization".into()));
    }
    let mut jobs: Vec<(Algorithm, usize)> = algorithms
        .iter()
        .flat_map(|&a| windows.iter().map(move |&w| (a, w)))
        .filter(|(a, w)| a.supports_window(*w))
        .collect();
    jobs.sort_unstable();
    jobs.dedup();
    let mut out = Vec::with_capacity(jobs.len());
    for (algorithm, window) in jobs {
        let cfg = AdversaryConfig { window, ..*base };
        let bound = cfg.bounds()?.mc_expectation_bound;
        let ids: Vec<u64> = (0..realizations as u64).collect();
        let regrets = par_map(&ids, |&k| -> Result<f64> {
            let seq = segmented_realization(&cfg, k)?;
            let offline = offline_reference(&seq, settings.oracle_tolerance)?;
            Ok(evaluate(&seq, algorithm, window, &offline, settings)?.regret)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        let (mean_regret, stderr) = mean_and_stderr(&regrets);
        out.push(McSummary {
            algorithm,
            window,
            realizations,
            mean_regret,
            stderr,
            bound,
            pass: mean_regret >= bound - 3.0 * stderr,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub window: usize,
    pub mean_s: f64,
    pub median_s: f64,
    pub mean_gradients: f64,
    pub median_gradients: f64,
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Per-stage wall time and gradient counts, pooled over `repeats` runs.
/// Runs sequentially so timings do not compete for cores.
pub fn bench(
    seq: &CostSequence,
    algorithms: &[Algorithm],
    windows: &[usize],
    repeats: usize,
    settings: &RunSettings,
) -> Result<Vec<BenchRow>> {
    let repeats = repeats.max(1);
    let mut jobs: Vec<(Algorithm, usize)> = algorithms
        .iter()
        .flat_map(|&a| windows.iter().map(move |&w| (a, w)))
        .filter(|(a, w)| a.supports_window(*w))
        .collect();
    jobs.sort_unstable();
    jobs.dedup();
    let mut rows = Vec::with_capacity(jobs.len());
    for (algorithm, window) in jobs {
        let mut seconds = Vec::new();
        let mut grads = Vec::new();
        for _ in 0..repeats {
            let out = run_algorithm(seq, algorithm, window, settings)?;
            seconds.extend(out.stage_seconds);
            grads.extend(out.stage_gradients.iter().map(|&g| g as f64));
        }
        rows.push(BenchRow {
            algorithm,
            window,
            mean_s: mean(&seconds),
            median_s: median(&mut seconds),
            mean_gradients: mean(&grads),
            median_gradients: median(&mut grads),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::build_special_example;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sgd".parse::<Algorithm>().is_err());
    }

    #[test]
    fn sweep_is_sorted_and_skips_mpc_without_window() {
        let seq = build_special_example();
        let recs = sweep(&seq, &[Algorithm::Mpc, Algorithm::Rhgd], &[2, 0, 1], &RunSettings::default()).unwrap();
        let keys: Vec<(Algorithm, usize)> = recs.iter().map(|r| (r.algorithm, r.window)).collect();
        assert_eq!(
            keys,
            vec![
                (Algorithm::Rhgd, 0),
                (Algorithm::Rhgd, 1),
                (Algorithm::Rhgd, 2),
                (Algorithm::Mpc, 1),
                (Algorithm::Mpc, 2)
            ]
        );
        assert!(recs.iter().all(|r| r.regret >= -1e-8));
    }

    #[test]
    fn full_window_mpc_has_no_regret() {
        let seq = build_special_example();
        let offline = offline_reference(&seq, 1e-10).unwrap();
        let rec = evaluate(&seq, Algorithm::Mpc, 16, &offline, &RunSettings::default()).unwrap();
        assert!(rec.regret <= 1e-6, "regret {}", rec.regret);
    }

    #[test]
    fn stderr_of_constant_sample_is_zero() {
        assert_eq!(mean_and_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, se) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0).abs() < 1e-15);
    }

    #[test]
    fn median_handles_even_lengths() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0, 4.0]), 2.5);
        assert_eq!(median(&mut [5.0]), 5.0);
    }
}
