use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use horizon_core::experiment::{bench, lower_bound_monte_carlo, sequence_bounds, sweep, Algorithm, RegretRecord};
use horizon_core::oracle::inverse_entries;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::svg::{log_chart, Series};

/// Regret floor of the log-scale plot.
pub const PLOT_FLOOR: f64 = 1e-9;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn output_path(cfg: &ExperimentConfig, name: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(&cfg.out).map_err(io_err(&cfg.out))?;
    Ok(cfg.out.join(name))
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

fn echo(path: &Path) -> CliResult<()> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    Ok(())
}

fn f(v: f64) -> String {
    format!("{v}")
}

const DEFAULT_WINDOWS: [usize; 11] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

fn regret_sweep(cfg: &ExperimentConfig) -> CliResult<(horizon_core::CostSequence, Vec<RegretRecord>)> {
    cfg.validate()?;
    let seq = cfg.load_instance()?;
    let algos = cfg.algorithms(&[Algorithm::Rhgd, Algorithm::Rhag, Algorithm::Mpc])?;
    let windows = cfg.window_list(&DEFAULT_WINDOWS)?;
    let records = sweep(&seq, &algos, &windows, &cfg.settings())?;
    Ok((seq, records))
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<()> {
    let (_, records) = regret_sweep(cfg)?;
    let last = if cfg.count_gradients { "mean_stage_gradients" } else { "mean_stage_s" };
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let work = if cfg.count_gradients { r.mean_stage_gradients() } else { r.mean_stage_seconds() };
            vec![r.algorithm.to_string(), r.window.to_string(), f(r.regret), f(r.online_cost), f(r.offline_cost), f(work)]
        })
        .collect();
    let path = output_path(cfg, "run.csv")?;
    write_csv(&path, &["algorithm", "W", "regret", "online_cost", "offline_cost", last], &rows)?;
    echo(&path)
}

pub fn sweep_cmd(cfg: &ExperimentConfig) -> CliResult<()> {
    let (seq, records) = regret_sweep(cfg)?;
    let mut algos: Vec<Algorithm> = records.iter().map(|r| r.algorithm).collect();
    algos.dedup();
    let mut windows: Vec<usize> = records.iter().map(|r| r.window).collect();
    windows.sort_unstable();
    windows.dedup();
    let bounds = windows
        .iter()
        .map(|&w| sequence_bounds(&seq, w))
        .collect::<horizon_core::Result<Vec<_>>>()?;

    let mut header: Vec<String> = vec!["W".into()];
    header.extend(algos.iter().map(|a| a.to_string()));
    header.extend(["ogd_bound", "rhgd_bound", "rhag_bound"].map(String::from));
    let rows: Vec<Vec<String>> = windows
        .iter()
        .zip(&bounds)
        .map(|(&w, b)| {
            let mut row = vec![w.to_string()];
            for a in &algos {
                let cell = records.iter().find(|r| r.algorithm == *a && r.window == w).map(|r| f(r.regret));
                row.push(cell.unwrap_or_default());
            }
            row.extend([f(b.ogd_upper), f(b.rhgd_upper), f(b.rhag_upper)]);
            row
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let csv_path = output_path(cfg, "sweep.csv")?;
    write_csv(&csv_path, &header_refs, &rows)?;

    let mut series: Vec<Series> = algos
        .iter()
        .map(|a| Series {
            name: a.to_string(),
            points: records
                .iter()
                .filter(|r| r.algorithm == *a)
                .map(|r| (r.window as f64, r.regret))
                .collect(),
            dashed: false,
        })
        .collect();
    for (a, pick) in [
        (Algorithm::Rhgd, (|b: &horizon_core::adversary::BoundReport| b.rhgd_upper) as fn(&_) -> f64),
        (Algorithm::Rhag, |b| b.rhag_upper),
    ] {
        if algos.contains(&a) {
            series.push(Series {
                name: format!("{a} bound"),
                points: windows.iter().zip(&bounds).map(|(&w, b)| (w as f64, pick(b))).collect(),
                dashed: true,
            });
        }
    }
    let svg_path = output_path(cfg, "sweep.svg")?;
    let svg = log_chart("Dynamic regret vs prediction window", "W", "regret", &series, PLOT_FLOOR);
    fs::write(&svg_path, svg).map_err(io_err(&svg_path))?;
    echo(&csv_path)
}

pub fn lowerbound(cfg: &ExperimentConfig) -> CliResult<()> {
    cfg.validate()?;
    if cfg.realizations == 0 {
        return Err(CliError::Config("--realizations must be at least 1".into()));
    }
    let algos = cfg.algorithms(&[Algorithm::Ogd, Algorithm::Rhag])?;
    let windows = cfg.window_list(&[0, 1, 2])?;
    let base = cfg.adversary.config(0, cfg.seed);
    let rows: Vec<Vec<String>> = lower_bound_monte_carlo(&base, &algos, &windows, cfg.realizations, &cfg.settings())?
        .iter()
        .map(|s| {
            vec![
                s.algorithm.to_string(),
                s.window.to_string(),
                s.realizations.to_string(),
                f(s.mean_regret),
                f(s.stderr),
                f(s.bound),
                s.pass.to_string(),
            ]
        })
        .collect();
    let path = output_path(cfg, "lowerbound.csv")?;
    write_csv(&path, &["algorithm", "W", "N", "mean_regret", "stderr", "bound", "pass"], &rows)?;
    echo(&path)
}

pub fn bench_cmd(cfg: &ExperimentConfig) -> CliResult<()> {
    cfg.validate()?;
    let seq = cfg.load_instance()?;
    let algos = cfg.algorithms(&[Algorithm::Rhgd, Algorithm::Rhag, Algorithm::Mpc])?;
    let windows = cfg.window_list(&[5, 10])?;
    let table = bench(&seq, &algos, &windows, cfg.repeats, &cfg.settings())?;
    let header: [&str; 4] = if cfg.count_gradients {
        ["algorithm", "W", "mean_gradients", "median_gradients"]
    } else {
        ["algorithm", "W", "mean_s", "median_s"]
    };
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            let (a, b) = if cfg.count_gradients {
                (r.mean_gradients, r.median_gradients)
            } else {
                (r.mean_s, r.median_s)
            };
            vec![r.algorithm.to_string(), r.window.to_string(), f(a), f(b)]
        })
        .collect();
    let path = output_path(cfg, "bench.csv")?;
    write_csv(&path, &header, &rows)?;
    echo(&path)
}

pub fn export_instance(cfg: &ExperimentConfig) -> CliResult<()> {
    let seq = cfg.load_instance()?;
    let path = output_path(cfg, "instance.json")?;
    seq.write_json(&path)?;
    println!("{}", path.display());
    Ok(())
}

pub fn export_inverse(cfg: &ExperimentConfig, alpha: f64, beta: f64, horizon: usize) -> CliResult<()> {
    let params = inverse_entries(alpha, beta, horizon)?;
    let path = output_path(cfg, "inverse.csv")?;
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    params.write_csv(file)?;
    println!("{}", path.display());
    Ok(())
}
