//! Experiment configuration: a JSON file (`--config`) overlaid by flags.

use std::path::{Path, PathBuf};

use horizon_core::adversary::{segmented_realization, AdversaryConfig};
use horizon_core::experiment::{Algorithm, RunSettings};
use horizon_core::mpc::TerminalCost;
use horizon_core::scenarios::{build_dispatch, build_special_example, read_trace_file, DispatchSpec};
use horizon_core::CostSequence;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Parameters of the segmented lower-bound construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdversaryParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    #[serde(rename = "L_T")]
    pub budget: f64,
    #[serde(rename = "T")]
    pub horizon: usize,
}

impl Default for AdversaryParams {
    fn default() -> Self {
        AdversaryParams {
            alpha: 1.0,
            beta: 1.0,
            diameter: 1.0,
            budget: 10.0,
            horizon: 40,
        }
    }
}

impl AdversaryParams {
    pub fn config(&self, window: usize, seed: u64) -> AdversaryConfig {
        AdversaryConfig {
            horizon: self.horizon,
            window,
            alpha: self.alpha,
            beta: self.beta,
            diameter: self.diameter,
            budget: self.budget,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `special`, `dispatch`, `adversary`, or a path to an instance JSON file.
    pub instance: String,
    /// Horizon of the synthetic dispatch instance.
    pub horizon: Option<usize>,
    pub demand_csv: Option<PathBuf>,
    pub renewable_csv: Option<PathBuf>,
    pub algos: Option<Vec<Algorithm>>,
    #[serde(rename = "W")]
    pub windows: Option<Vec<usize>>,
    pub tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub realizations: usize,
    pub count_gradients: bool,
    pub repeats: usize,
    pub adversary: AdversaryParams,
    pub mpc_terminal: TerminalCost,
    pub mpc_inner_tolerance: f64,
    pub mpc_inner_max_iters: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let run = RunSettings::default();
        ExperimentConfig {
            instance: "special".into(),
            horizon: None,
            demand_csv: None,
            renewable_csv: None,
            algos: None,
            windows: None,
            tol: run.oracle_tolerance,
            seed: 0,
            out: PathBuf::from("."),
            realizations: 200,
            count_gradients: false,
            repeats: 3,
            adversary: AdversaryParams::default(),
            mpc_terminal: run.mpc_terminal,
            mpc_inner_tolerance: run.mpc_inner_tolerance,
            mpc_inner_max_iters: run.mpc_inner_max_iters,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            oracle_tolerance: self.tol,
            mpc_terminal: self.mpc_terminal,
            mpc_inner_tolerance: self.mpc_inner_tolerance,
            mpc_inner_max_iters: self.mpc_inner_max_iters,
        }
    }

    pub fn algorithms(&self, default: &[Algorithm]) -> CliResult<Vec<Algorithm>> {
        let algos = self.algos.clone().unwrap_or_else(|| default.to_vec());
        if algos.is_empty() {
            return Err(CliError::Config("at least one algorithm is required".into()));
        }
        Ok(algos)
    }

    pub fn window_list(&self, default: &[usize]) -> CliResult<Vec<usize>> {
        let windows = self.windows.clone().unwrap_or_else(|| default.to_vec());
        if windows.is_empty() {
            return Err(CliError::Config("at least one window is required".into()));
        }
        Ok(windows)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Config(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// Resolves the instance source into a cost sequence.
    pub fn load_instance(&self) -> CliResult<CostSequence> {
        match self.instance.as_str() {
            "special" => Ok(build_special_example()),
            "dispatch" => {
                let spec = match &self.demand_csv {
                    Some(path) => {
                        let demand = read_trace_file(path)?;
                        let renewable = match &self.renewable_csv {
                            Some(p) => read_trace_file(p)?,
                            None => vec![0.0; demand.len()],
                        };
                        DispatchSpec::three_generator(demand, renewable)
                    }
                    None => DispatchSpec::synthetic(self.horizon.unwrap_or(1440), self.seed)?,
                };
                Ok(build_dispatch(&spec)?)
            }
            "adversary" => Ok(segmented_realization(&self.adversary.config(0, self.seed), 0)?),
            path => {
                let p = Path::new(path);
                if !p.exists() {
                    return Err(CliError::Config(format!(
                        "unknown instance {path:?}: expected special, dispatch, adversary or a JSON file"
                    )));
                }
                Ok(CostSequence::from_json_file(p)?)
            }
        }
    }
}

/// Parses `0..10`, `0-10`, `0..=10` (all inclusive) or `0,2,5`.
pub fn parse_windows(text: &str) -> Result<Vec<usize>, String> {
    let text = text.trim();
    let range = ["..=", "..", "-"].iter().find_map(|sep| text.split_once(sep));
    if let Some((a, b)) = range {
        let lo: usize = a.trim().parse().map_err(|_| format!("bad window range {text:?}"))?;
        let hi: usize = b.trim().parse().map_err(|_| format!("bad window range {text:?}"))?;
        if lo > hi {
            return Err(format!("empty window range {text:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|w| w.trim().parse::<usize>().map_err(|_| format!("bad window {w:?}")))
        .collect()
}

pub fn parse_algos(text: &str) -> Result<Vec<Algorithm>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Algorithm>().map_err(|e| e.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_syntax() {
        assert_eq!(parse_windows("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_windows("2-4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_windows("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_windows("5, 0,16").unwrap(), vec![5, 0, 16]);
        assert!(parse_windows("3..1").is_err());
        assert!(parse_windows("x").is_err());
    }

    #[test]
    fn algo_syntax() {
        assert_eq!(parse_algos("rhgd,MPC").unwrap(), vec![Algorithm::Rhgd, Algorithm::Mpc]);
        assert!(parse_algos("rhgd,foo").is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = ExperimentConfig {
            algos: Some(vec![Algorithm::Rhag]),
            windows: Some(vec![0, 4]),
            ..ExperimentConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"instanse": "special"}"#).is_err());
    }
}
