mod common;

use horizon_core::adversary::{rho_of, segmented_realization, w0_pair_construction, AdversaryConfig};
use horizon_core::experiment::{offline_reference, Algorithm, RunSettings};
use horizon_core::mpc::{run_mpc, MpcConfig};
use horizon_core::oracle::{solve_isotropic_closed_form, TridiagonalSystem};
use horizon_core::{run_ogd, run_rhgd, ActionSpace, AlgoConfig, CostSequence, FunctionClassParams, Point, Trajectory};
use proptest::prelude::*;
use rand::Rng;

fn stacked_inner(a: &[Point], b: &[Point]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn random_trajectory(rng: &mut rand_chacha::ChaCha8Rng, seq: &CostSequence) -> Trajectory {
    let space = seq.space();
    Trajectory::new(
        (0..seq.horizon())
            .map(|_| {
                Point::from_iterator(
                    seq.dim(),
                    (0..seq.dim()).map(|i| rng.random_range(space.lower()[i]..=space.upper()[i])),
                )
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent(
        lo in prop::collection::vec(-5.0f64..0.0, 1..4),
        width in 0.0f64..5.0,
        p in prop::collection::vec(-20.0f64..20.0, 3),
    ) {
        let n = lo.len();
        let lower = Point::from_vec(lo.clone());
        let upper = Point::from_iterator(n, lo.iter().map(|v| v + width));
        let space = ActionSpace::new(lower, upper).unwrap();
        let point = Point::from_column_slice(&p[..n]);
        let once = space.project(&point).unwrap();
        prop_assert!(space.contains(&once));
        prop_assert_eq!(space.project(&once).unwrap(), once);
    }

    #[test]
    fn total_cost_is_strongly_convex(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let seq = common::random_general(&mut rng, 15);
        let u = random_trajectory(&mut rng, &seq);
        let v = random_trajectory(&mut rng, &seq);
        let cu = seq.total_cost(&u).unwrap();
        let cv = seq.total_cost(&v).unwrap();
        let grad = seq.stacked_gradient(&u).unwrap();
        let diff: Vec<Point> = v.points().iter().zip(u.points()).map(|(a, b)| a - b).collect();
        let dist2: f64 = diff.iter().map(|d| d.norm_squared()).sum();
        let rhs = cu + stacked_inner(&grad, &diff) + 0.5 * seq.class_params().alpha * dist2;
        prop_assert!(cv >= rhs - 1e-9 * cv.abs().max(rhs.abs()).max(1.0), "{} < {}", cv, rhs);
    }

    #[test]
    fn ogd_movement_is_bounded_by_path_length(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let seq = if seed % 2 == 0 {
            common::random_isotropic(&mut rng, 30)
        } else {
            common::random_general(&mut rng, 30)
        };
        let class = seq.class_params();
        let out = run_ogd(&seq, &AlgoConfig::defaults(&seq, 0)).unwrap();
        let mut prev = seq.x0();
        let mut moved = 0.0;
        for x in out.trajectory.points() {
            moved += (x - prev).norm_squared();
            prev = x;
        }
        let kappa = (1.0 - class.alpha / class.l).max(0.0).sqrt();
        let bound = 2.0 * class.g / (class.l * (1.0 - kappa)) * seq.path_length().unwrap();
        prop_assert!(moved <= bound + 1e-12, "{} > {}", moved, bound);
    }

    #[test]
    fn rhgd_never_costs_more_than_ogd(seed in any::<u64>(), w in 1usize..8) {
        let mut rng = common::rng(seed);
        let seq = common::random_general(&mut rng, 25);
        let cfg = AlgoConfig::defaults(&seq, w);
        let ogd = seq.total_cost(&run_ogd(&seq, &cfg).unwrap().trajectory).unwrap();
        let rhgd = seq.total_cost(&run_rhgd(&seq, &cfg).unwrap().trajectory).unwrap();
        prop_assert!(rhgd <= ogd + 1e-9 * ogd.abs().max(1.0), "{} > {}", rhgd, ogd);
    }

    #[test]
    fn closed_form_stays_in_box(
        alpha in 0.1f64..10.0,
        beta in 0.0f64..10.0,
        thetas in prop::collection::vec(0.0f64..=1.0, 1..60),
        x0 in 0.0f64..=1.0,
    ) {
        let seq = CostSequence::scalar_isotropic(alpha, &thetas, beta, x0, 0.0, 1.0).unwrap();
        let traj = solve_isotropic_closed_form(&seq).unwrap();
        prop_assert!(traj.points().iter().all(|p| seq.space().contains(p)));
    }

    #[test]
    fn dominance_margin_is_one(alpha in 0.01f64..100.0, beta in 0.01f64..100.0, horizon in 1usize..200) {
        let h = TridiagonalSystem::new(alpha, beta, horizon).unwrap();
        prop_assert!((h.dominance_margin() - 1.0).abs() <= 1e-12 * (1.0 + beta / alpha));
    }

    #[test]
    fn gd_rate_is_slower_than_accelerated_rate(q in 1.0f64..1e6) {
        prop_assume!(q > 1.0);
        prop_assert!(1.0 - 1.0 / q >= 1.0 - 1.0 / q.sqrt());
    }

    #[test]
    fn rho_power_lower_estimate(alpha in 0.1f64..10.0, beta in 0.01f64..100.0, w in 0usize..60) {
        let q = (alpha + 4.0 * beta) / alpha;
        let rho = rho_of(q);
        let lhs = rho.powi(2 * w as i32);
        let rhs = (-4.0 * w as f64 / (q.sqrt() - 1.0)).exp();
        prop_assert!(lhs >= rhs * (1.0 - 1e-12), "{} < {}", lhs, rhs);
    }

    #[test]
    fn segmented_realizations_respect_budget_and_class(
        horizon in 1usize..60,
        w in 0usize..5,
        dpow in -2i32..3,
        ratio in 1.0f64..10.0,
        k in any::<u64>(),
    ) {
        let d = 2f64.powi(dpow);
        let budget = (ratio * d).min(d * horizon as f64);
        let cfg = AdversaryConfig { horizon, window: w, alpha: 1.0, beta: 2.0, diameter: d, budget, seed: 3 };
        let seq = segmented_realization(&cfg, k).unwrap();
        prop_assert!(seq.path_length().unwrap() <= budget);
        let class = seq.class_params();
        prop_assert_eq!(class.alpha, cfg.alpha);
        prop_assert_eq!(class.l, cfg.alpha);
        prop_assert!(class.g <= cfg.alpha * d);
        prop_assert!(FunctionClassParams::new(cfg.alpha, cfg.alpha, cfg.alpha * d).is_ok());
    }
}

#[test]
fn pair_construction_lives_in_its_class() {
    let cfg = AdversaryConfig { horizon: 12, window: 0, alpha: 1.0, beta: 1.0, diameter: 2.0, budget: 1.0, seed: 0 };
    let pair = w0_pair_construction(&cfg).unwrap();
    for seq in &pair.sequences {
        let class = seq.class_params();
        assert!(class.g <= pair.g + 1e-12);
        assert!(seq.path_length().unwrap() <= cfg.budget + 1e-12);
    }
}

#[test]
fn full_window_mpc_matches_offline_on_random_instances() {
    let mut rng = common::rng(404);
    for _ in 0..10 {
        let seq = common::random_general(&mut rng, 12);
        let offline = offline_reference(&seq, 1e-11).unwrap();
        let one = run_mpc(&seq, &MpcConfig::new(1)).unwrap();
        let full = run_mpc(&seq, &MpcConfig::new(seq.horizon())).unwrap();
        let r1 = seq.total_cost(&one.trajectory).unwrap() - offline.cost;
        let rt = seq.total_cost(&full.trajectory).unwrap() - offline.cost;
        assert!(rt <= 1e-6 * r1.max(1.0), "W=T regret {rt}, W=1 regret {r1}");
    }
}

#[test]
#[should_panic(expected = "information gate")]
fn gate_rejects_reads_past_the_window() {
    let seq = CostSequence::scalar_isotropic(1.0, &[0.0, 1.0, 2.0, 3.0], 1.0, 0.0, -5.0, 5.0).unwrap();
    let gate = horizon_core::InformationGate::new(&seq, 2);
    gate.enter_stage(1);
    let _ = gate.cost(2);
    let _ = gate.cost(3);
}

#[test]
fn sweeps_are_reproducible() {
    let seq = horizon_core::scenarios::build_special_example();
    let windows: Vec<usize> = (0..=12).collect();
    let run = || {
        horizon_core::experiment::sweep(&seq, &[Algorithm::Rhag], &windows, &RunSettings::default())
            .unwrap()
            .iter()
            .map(|r| r.regret.to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}
