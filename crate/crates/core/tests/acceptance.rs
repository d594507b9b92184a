//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed. The process
//! exits nonzero when any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use horizon_core::adversary::{bound_report, segment_index_set_j, segmented_realization, AdversaryConfig, BoundInputs};
use horizon_core::experiment::{evaluate, lower_bound_monte_carlo, offline_reference, sweep, Algorithm, RunSettings};
use horizon_core::oracle::{brute_force_oracle, inverse_entries, solve_isotropic_closed_form, solve_offline, TridiagonalSystem};
use horizon_core::scenarios::{build_dispatch, build_special_example, DispatchSpec};
use horizon_core::{
    offline_gd_iterates, offline_nag_iterates, run_ogd, run_rhag, run_rhgd, AlgoConfig, CostSequence, Trajectory,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.1}s exceeds {limit_s}s", elapsed.as_secs_f64())
    })
}

fn lemma_sweep() -> Vec<(CostSequence, usize)> {
    let mut rng = common::rng(2024);
    (0..50)
        .map(|_| {
            let seq = common::random_isotropic(&mut rng, 50);
            let w = rng.random_range(0..=10);
            (seq, w)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (seq, w) in lemma_sweep() {
        let cfg = AlgoConfig::defaults(&seq, w);
        let online = run_rhgd(&seq, &cfg).map_err(|e| e.to_string())?;
        let init = horizon_core::ogd_initialization(&seq, cfg.gamma);
        let k = w.min(seq.horizon());
        let iters = offline_gd_iterates(&seq, &init, k, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(online.trajectory.max_abs_diff(&iters[k]));
    }
    check(worst <= 1e-12, || format!("max abs diff {worst:e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!("50 instances, max abs diff {worst:e}, {:.2}s", start.elapsed().as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (seq, w) in lemma_sweep() {
        let cfg = AlgoConfig::defaults(&seq, w);
        let online = run_rhag(&seq, &cfg).map_err(|e| e.to_string())?;
        let init = horizon_core::ogd_initialization(&seq, cfg.gamma);
        let k = w.min(seq.horizon());
        let iters = offline_nag_iterates(&seq, &init, k, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(online.trajectory.max_abs_diff(&iters[k]));
    }
    check(worst <= 1e-12, || format!("max abs diff {worst:e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!("50 instances, max abs diff {worst:e}, {:.2}s", start.elapsed().as_secs_f64()))
}

fn criterion_3() -> Outcome {
    for (i, (seq, _)) in lemma_sweep().into_iter().enumerate() {
        let cfg = AlgoConfig::defaults(&seq, 0);
        let ogd = run_ogd(&seq, &cfg).map_err(|e| e.to_string())?.trajectory;
        let gd = run_rhgd(&seq, &cfg).map_err(|e| e.to_string())?.trajectory;
        let ag = run_rhag(&seq, &cfg).map_err(|e| e.to_string())?.trajectory;
        check(gd == ogd, || format!("instance {i}: RHGD(W=0) differs from OGD"))?;
        check(ag == ogd, || format!("instance {i}: RHAG(W=0) differs from OGD"))?;
    }
    Ok("50 instances, element-wise identical".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(77);
    let settings = RunSettings {
        oracle_tolerance: 1e-10,
        ..RunSettings::default()
    };
    let mut tightest = [0.0f64; 3];
    for i in 0..100 {
        let seq = if i % 2 == 0 {
            common::random_isotropic(&mut rng, 40)
        } else {
            common::random_general(&mut rng, 40)
        };
        let w = rng.random_range(0..=10);
        let class = *seq.class_params();
        let path = seq.path_length().map_err(|e| e.to_string())?;
        let report = bound_report(BoundInputs {
            alpha: class.alpha,
            l: class.l,
            beta: seq.beta(),
            g: class.g,
            diameter: seq.space().diameter(),
            budget: path,
            window: w,
        })
        .map_err(|e| e.to_string())?;
        let offline = offline_reference(&seq, settings.oracle_tolerance).map_err(|e| e.to_string())?;
        let bounds = [report.ogd_upper, report.rhgd_upper, report.rhag_upper];
        for (j, algo) in [Algorithm::Ogd, Algorithm::Rhgd, Algorithm::Rhag].into_iter().enumerate() {
            let rec = evaluate(&seq, algo, w, &offline, &settings).map_err(|e| e.to_string())?;
            check(rec.regret <= bounds[j] + 1e-9, || {
                format!("instance {i} {algo} W={w}: regret {} > bound {}", rec.regret, bounds[j])
            })?;
            if bounds[j] > 0.0 {
                tightest[j] = tightest[j].max(rec.regret / bounds[j]);
            }
        }
    }
    within(start.elapsed(), 30.0)?;
    Ok(format!(
        "100 instances; largest regret/bound: ogd {:.3}, rhgd {:.3}, rhag {:.3}; {:.2}s",
        tightest[0],
        tightest[1],
        tightest[2],
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = common::rng(5);
    let mut worst_rel = 0.0f64;
    for i in 0..60 {
        let alpha = common::log_uniform(&mut rng, 0.1, 10.0);
        let beta = common::log_uniform(&mut rng, 0.1, 10.0);
        let horizon = rng.random_range(1..=100);
        let params = inverse_entries(alpha, beta, horizon).map_err(|e| e.to_string())?;
        let h = TridiagonalSystem::new(alpha, beta, horizon).map_err(|e| e.to_string())?.to_matrix();
        let numeric = h.try_inverse().ok_or("H is singular")?;
        let closed = params.matrix();
        for t in 0..horizon {
            let mut row = 0.0;
            for s in 0..horizon {
                let a = closed[(t, s)];
                let rel = (a - numeric[(t, s)]).abs() / numeric[(t, s)].abs().max(f64::MIN_POSITIVE);
                worst_rel = worst_rel.max(rel);
                check(a >= 0.0, || format!("case {i}: negative entry a[{t},{s}] = {a}"))?;
                let lb = params.lower_bound(t.abs_diff(s));
                check(a >= lb, || format!("case {i}: a[{t},{s}] = {a:e} below {lb:e}"))?;
                row += a;
            }
            check(row <= 1.0 + 1e-10, || format!("case {i}: row {t} sums to {row}"))?;
        }
    }
    check(worst_rel <= 1e-8, || format!("worst relative error {worst_rel:e}"))?;
    Ok(format!("60 cases, worst relative error {worst_rel:e}"))
}

fn criterion_6() -> Outcome {
    let seq = CostSequence::scalar_isotropic(1.0, &[1.0, 1.0], 1.0, 0.0, 0.0, 1.0).map_err(|e| e.to_string())?;
    let expect = [0.6, 0.8];
    let closed = solve_isotropic_closed_form(&seq).map_err(|e| e.to_string())?.scalars();
    let iterative = solve_offline(&seq, 1e-10).map_err(|e| e.to_string())?.trajectory.scalars();
    let grid = brute_force_oracle(&seq, 801).map_err(|e| e.to_string())?.scalars();
    let err = |v: &[f64]| v.iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    check(err(&closed) <= 1e-12, || format!("closed form {closed:?}"))?;
    check(err(&iterative) <= 1e-9, || format!("iterative {iterative:?}"))?;
    check(err(&grid) <= 5e-3, || format!("grid {grid:?}"))?;
    Ok(format!("closed {closed:?}, iterative err {:e}, grid {grid:?}", err(&iterative)))
}

fn special_regrets(algo: Algorithm, windows: &[usize]) -> Result<Vec<f64>, String> {
    let seq = build_special_example();
    let recs = sweep(&seq, &[algo], windows, &RunSettings::default()).map_err(|e| e.to_string())?;
    Ok(recs.iter().map(|r| r.regret).collect())
}

fn criterion_7() -> Outcome {
    let seq = build_special_example();
    let windows: Vec<usize> = (0..=10).collect();
    let regrets = special_regrets(Algorithm::Rhgd, &windows)?;
    let class = *seq.class_params();
    let path = seq.path_length().map_err(|e| e.to_string())?;
    for (&w, &r) in windows.iter().zip(&regrets) {
        let bound = bound_report(BoundInputs {
            alpha: class.alpha,
            l: class.l,
            beta: seq.beta(),
            g: class.g,
            diameter: seq.space().diameter(),
            budget: path,
            window: w,
        })
        .map_err(|e| e.to_string())?
        .rhgd_upper;
        check(r <= bound, || format!("W={w}: regret {r} above bound {bound}"))?;
        check(r > 0.0, || format!("W={w}: regret {r} is not positive, log undefined"))?;
    }
    let xs: Vec<f64> = windows.iter().map(|&w| w as f64).collect();
    let ys: Vec<f64> = regrets.iter().map(|r| r.log10()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = sxy * sxy / (sxx * syy);
    check(slope < 0.0 && r2 >= 0.9, || format!("slope {slope}, R² {r2}"))?;
    Ok(format!("slope {slope:.4} per unit W, R² {r2:.4}, all below the bound"))
}

fn criterion_8() -> Outcome {
    let windows: Vec<usize> = (1..=12).collect();
    let base = special_regrets(Algorithm::Ogd, &[0])?[0];
    let rhag = special_regrets(Algorithm::Rhag, &windows)?;
    let mpc = special_regrets(Algorithm::Mpc, &windows)?;
    let ratios: Vec<String> = rhag
        .iter()
        .zip(&mpc)
        .zip(&windows)
        .map(|((a, m), w)| format!("W={w}:{:.3}", a / m))
        .collect();
    println!("    W=0 regret {base:.4}; RHAG/MPC regret ratio {}", ratios.join(" "));
    let first = |v: &[f64]| windows.iter().zip(v).find(|(_, &r)| r < 0.01 * base).map(|(w, _)| *w);
    let (a, m) = (first(&rhag), first(&mpc));
    check(a.is_some() && m.is_some(), || {
        format!("1% of W=0 regret not reached by W=12 (rhag {a:?}, mpc {m:?})")
    })?;
    Ok(format!("below 1% of W=0 regret from W={} (rhag), W={} (mpc)", a.unwrap(), m.unwrap()))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let base = AdversaryConfig {
        horizon: 40,
        window: 0,
        alpha: 1.0,
        beta: 1.0,
        diameter: 1.0,
        budget: 10.0,
        seed: 9,
    };
    let rows = lower_bound_monte_carlo(&base, &[Algorithm::Ogd, Algorithm::Rhag], &[0, 1, 2], 1000, &RunSettings::default())
        .map_err(|e| e.to_string())?;
    for r in &rows {
        println!(
            "    {} W={}: mean {:.5} ± {:.5}, bound {:.3e}",
            r.algorithm, r.window, r.mean_regret, r.stderr, r.bound
        );
        check(r.pass, || {
            format!("{} W={}: mean {} < bound {} − 3·{}", r.algorithm, r.window, r.mean_regret, r.bound, r.stderr)
        })?;
    }
    within(start.elapsed(), 120.0)?;
    Ok(format!("{} (algorithm, W) pairs pass, {:.2}s", rows.len(), start.elapsed().as_secs_f64()))
}

fn criterion_10() -> Outcome {
    let mut count = 0usize;
    let mut longest = 0.0f64;
    let horizons = [5usize, 10, 20, 40, 60];
    let diameters = [0.5, 1.0, 2.0];
    let ratios = [1.0, 1.5, 2.0, 3.0, 4.5, 5.0];
    let per_cell = 10_000usize.div_ceil(horizons.len() * diameters.len() * ratios.len());
    for &horizon in &horizons {
        for &d in &diameters {
            for &m in &ratios {
                let budget = m * d;
                let cfg = AdversaryConfig {
                    horizon,
                    window: 0,
                    alpha: 1.0,
                    beta: 1.0,
                    diameter: d,
                    budget,
                    seed: 10,
                };
                for k in 0..per_cell as u64 {
                    let seq = segmented_realization(&cfg, k).map_err(|e| e.to_string())?;
                    let path = seq.path_length().map_err(|e| e.to_string())?;
                    check(path <= budget, || format!("T={horizon} D={d} L_T={budget} k={k}: path {path}"))?;
                    longest = longest.max(path / budget);
                    count += 1;
                }
            }
        }
    }
    let mut checked = 0usize;
    for horizon in 1..=60usize {
        for w in 0..=horizon / 2 {
            for twice in 2..=2 * horizon {
                let cfg = AdversaryConfig {
                    horizon,
                    window: w,
                    alpha: 1.0,
                    beta: 1.0,
                    diameter: 1.0,
                    budget: twice as f64 / 2.0,
                    seed: 0,
                };
                let j = segment_index_set_j(&cfg).map_err(|e| e.to_string())?;
                if j.bound.is_some() {
                    check(j.satisfies_bound(), || {
                        format!("T={horizon} W={w} L_T={}: |J| = {} < {:?}", cfg.budget, j.len(), j.bound)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    check(count >= 10_000, || format!("only {count} realizations"))?;
    Ok(format!(
        "{count} realizations, max path/L_T {longest:.3}; |J| bound checked on {checked} (T, W, L_T) cases"
    ))
}

fn criterion_11() -> Outcome {
    let mut rng = common::rng(11);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let seq = common::random_general(&mut rng, 12);
        let n = seq.dim();
        let flat: Vec<f64> = (0..n * seq.horizon()).map(|_| rng.random_range(-0.5..=0.5)).collect();
        let traj = Trajectory::from_flat(n, &flat);
        let analytic: Vec<f64> = seq
            .stacked_gradient(&traj)
            .map_err(|e| e.to_string())?
            .iter()
            .flat_map(|g| g.iter().copied().collect::<Vec<_>>())
            .collect();
        let h = 1e-5;
        let mut diff2 = 0.0;
        for k in 0..flat.len() {
            let mut plus = flat.clone();
            let mut minus = flat.clone();
            plus[k] += h;
            minus[k] -= h;
            let cp = seq.total_cost(&Trajectory::from_flat(n, &plus)).map_err(|e| e.to_string())?;
            let cm = seq.total_cost(&Trajectory::from_flat(n, &minus)).map_err(|e| e.to_string())?;
            diff2 += ((cp - cm) / (2.0 * h) - analytic[k]).powi(2);
        }
        let norm = analytic.iter().map(|g| g * g).sum::<f64>().sqrt().max(1e-12);
        let rel = diff2.sqrt() / norm;
        worst = worst.max(rel);
        check(rel <= 1e-6, || format!("instance {i}: relative error {rel:e}"))?;
    }
    Ok(format!("20 instances, worst relative error {worst:e}"))
}

fn criterion_12() -> Outcome {
    let start = Instant::now();
    let spec = DispatchSpec::synthetic(1440, 12).map_err(|e| e.to_string())?;
    let seq = build_dispatch(&spec).map_err(|e| e.to_string())?;
    let windows: Vec<usize> = (0..=10).collect();
    let recs = sweep(&seq, &[Algorithm::Rhgd, Algorithm::Rhag, Algorithm::Mpc], &windows, &RunSettings::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let horizon = seq.horizon();
    for r in recs.iter().filter(|r| r.algorithm == Algorithm::Rhgd) {
        let w = r.window;
        for s in 1..=horizon - w {
            if s == 1 && w == 0 {
                continue;
            }
            let g = r.per_stage_gradients[s - 1];
            check(g == w as u64 + 1, || format!("RHGD W={w} stage {s}: {g} gradients"))?;
        }
    }
    let mut notes = Vec::new();
    for w in [5usize, 10] {
        let find = |a: Algorithm| recs.iter().find(|r| r.algorithm == a && r.window == w).unwrap();
        let (gd, mpc) = (find(Algorithm::Rhgd), find(Algorithm::Mpc));
        let gd_total: u64 = gd.per_stage_gradients.iter().sum();
        let mpc_total: u64 = mpc.per_stage_gradients.iter().sum();
        check(gd_total < mpc_total, || format!("W={w}: RHGD {gd_total} vs MPC {mpc_total} gradients"))?;
        notes.push(format!(
            "W={w}: {:.1} vs {:.1} gradients/stage",
            gd.mean_stage_gradients(),
            mpc.mean_stage_gradients()
        ));
    }
    within(elapsed, 300.0)?;
    Ok(format!("sweep {:.1}s; {}", elapsed.as_secs_f64(), notes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("RHGD equals offline GD iterates", criterion_1),
        ("RHAG equals offline NAG iterates", criterion_2),
        ("W=0 reduces to OGD", criterion_3),
        ("regret upper bounds", criterion_4),
        ("closed-form inverse entries", criterion_5),
        ("T=2 oracle pin", criterion_6),
        ("RHGD regret decays exponentially in W", criterion_7),
        ("RHAG and MPC reach 1% of W=0 regret", criterion_8),
        ("Monte-Carlo lower bound", criterion_9),
        ("path-length budget and |J| bounds", criterion_10),
        ("stacked gradient vs finite differences", criterion_11),
        ("dispatch sweep and gradient counts", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
