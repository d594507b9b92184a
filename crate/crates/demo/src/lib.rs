//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string. The plain functions are usable and
//! tested natively.

use horizon_core::experiment::{offline_reference, sequence_bounds, sweep, Algorithm, RunSettings};
use horizon_core::oracle::inverse_entries;
use horizon_core::scenarios::SPECIAL_THETA;
use horizon_core::{run_ogd, run_rhag, run_rhgd, AlgoConfig, CostSequence};
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const MAX_WINDOW: usize = 16;
pub const MAX_INVERSE_HORIZON: usize = 2000;

/// The 16-stage example with a chosen switching weight.
pub fn special_with_beta(beta: f64) -> Result<CostSequence, String> {
    if !(beta > 0.0 && beta <= 1000.0) {
        return Err(format!("beta must lie in (0, 1000], got {beta}"));
    }
    CostSequence::scalar_isotropic(1.0, &SPECIAL_THETA, beta, 0.0, 0.0, 4.0).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct SweepData {
    pub windows: Vec<usize>,
    pub rhgd: Vec<f64>,
    pub rhag: Vec<f64>,
    /// `None` at `W = 0`.
    pub mpc: Vec<Option<f64>>,
    pub rhgd_bound: Vec<f64>,
    pub rhag_bound: Vec<f64>,
    pub q_f: f64,
}

pub fn regret_sweep_data(beta: f64, max_w: usize) -> Result<SweepData, String> {
    let seq = special_with_beta(beta)?;
    let windows: Vec<usize> = (0..=max_w.min(MAX_WINDOW)).collect();
    let recs = sweep(&seq, &[Algorithm::Rhgd, Algorithm::Rhag, Algorithm::Mpc], &windows, &RunSettings::default())
        .map_err(|e| e.to_string())?;
    let pick = |a: Algorithm, w: usize| recs.iter().find(|r| r.algorithm == a && r.window == w).map(|r| r.regret);
    let bounds = windows
        .iter()
        .map(|&w| sequence_bounds(&seq, w))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(SweepData {
        rhgd: windows.iter().map(|&w| pick(Algorithm::Rhgd, w).unwrap_or(f64::NAN)).collect(),
        rhag: windows.iter().map(|&w| pick(Algorithm::Rhag, w).unwrap_or(f64::NAN)).collect(),
        mpc: windows.iter().map(|&w| pick(Algorithm::Mpc, w)).collect(),
        rhgd_bound: bounds.iter().map(|b| b.rhgd_upper).collect(),
        rhag_bound: bounds.iter().map(|b| b.rhag_upper).collect(),
        q_f: seq.smoothness_params().1,
        windows,
    })
}

#[derive(Debug, Serialize)]
pub struct TrajectoryData {
    pub theta: Vec<f64>,
    pub offline: Vec<f64>,
    pub ogd: Vec<f64>,
    pub rhgd: Vec<f64>,
    pub rhag: Vec<f64>,
    pub mpc: Option<Vec<f64>>,
}

pub fn trajectory_data(beta: f64, w: usize) -> Result<TrajectoryData, String> {
    let seq = special_with_beta(beta)?;
    let w = w.min(MAX_WINDOW);
    let cfg = AlgoConfig::defaults(&seq, w);
    let settings = RunSettings::default();
    let e = |e: horizon_core::Error| e.to_string();
    let mpc = if w >= 1 {
        Some(horizon_core::mpc::run_mpc(&seq, &settings.mpc_config(w)).map_err(e)?.trajectory.scalars())
    } else {
        None
    };
    Ok(TrajectoryData {
        theta: SPECIAL_THETA.to_vec(),
        offline: offline_reference(&seq, settings.oracle_tolerance).map_err(e)?.trajectory.scalars(),
        ogd: run_ogd(&seq, &cfg).map_err(e)?.trajectory.scalars(),
        rhgd: run_rhgd(&seq, &cfg).map_err(e)?.trajectory.scalars(),
        rhag: run_rhag(&seq, &cfg).map_err(e)?.trajectory.scalars(),
        mpc,
    })
}

#[derive(Debug, Serialize)]
pub struct DecayData {
    /// Row index `t` whose entries `a_{t,t+τ}` are reported.
    pub row: usize,
    pub rho: f64,
    pub entries: Vec<f64>,
    pub lower_bound: Vec<f64>,
}

pub fn inverse_decay_data(alpha: f64, beta: f64, horizon: usize) -> Result<DecayData, String> {
    if horizon == 0 || horizon > MAX_INVERSE_HORIZON {
        return Err(format!("T must lie in 1..={MAX_INVERSE_HORIZON}, got {horizon}"));
    }
    let params = inverse_entries(alpha, beta, horizon).map_err(|e| e.to_string())?;
    let row = horizon.div_ceil(2);
    Ok(DecayData {
        row,
        rho: params.rho,
        entries: (row..=horizon).map(|s| params.entry(row, s)).collect(),
        lower_bound: (0..=horizon - row).map(|tau| params.lower_bound(tau)).collect(),
    })
}

fn to_js<T: Serialize>(v: Result<T, String>) -> Result<String, JsError> {
    let v = v.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Regret of RHGD, RHAG and MPC for `W = 0..=max_w`, with upper bounds.
#[wasm_bindgen]
pub fn regret_sweep(beta: f64, max_w: u32) -> Result<String, JsError> {
    to_js(regret_sweep_data(beta, max_w as usize))
}

/// Minimizers, offline optimum and the online trajectories at window `w`.
#[wasm_bindgen]
pub fn trajectories(beta: f64, w: u32) -> Result<String, JsError> {
    to_js(trajectory_data(beta, w as usize))
}

/// One row of `H⁻¹` against its geometric lower bound.
#[wasm_bindgen]
pub fn inverse_decay(alpha: f64, beta: f64, horizon: u32) -> Result<String, JsError> {
    to_js(inverse_decay_data(alpha, beta, horizon as usize))
}
