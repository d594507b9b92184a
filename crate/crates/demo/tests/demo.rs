use horizon_demo::{inverse_decay_data, regret_sweep_data, trajectory_data, MAX_WINDOW};

#[test]
fn sweep_at_default_beta_decays_and_respects_bounds() {
    let data = regret_sweep_data(13.0, 10).unwrap();
    assert_eq!(data.windows, (0..=10).collect::<Vec<_>>());
    assert_eq!(data.q_f, 53.0);
    assert!(data.mpc[0].is_none() && data.mpc[1].is_some());
    assert!(data.rhgd.last().unwrap() < &data.rhgd[0]);
    assert!(data.rhgd.iter().zip(&data.rhgd_bound).all(|(r, b)| r <= b));
    assert!(data.rhag.iter().zip(&data.rhag_bound).all(|(r, b)| r <= b));
    assert_eq!(regret_sweep_data(13.0, 99).unwrap().windows.len(), MAX_WINDOW + 1);
}

#[test]
fn trajectories_have_one_point_per_stage() {
    let data = trajectory_data(13.0, 3).unwrap();
    for series in [&data.offline, &data.ogd, &data.rhgd, &data.rhag, data.mpc.as_ref().unwrap()] {
        assert_eq!(series.len(), 16);
        assert!(series.iter().all(|x| (0.0..=4.0).contains(x)));
    }
    assert!(trajectory_data(13.0, 0).unwrap().mpc.is_none());
}

#[test]
fn inverse_row_dominates_lower_bound() {
    let data = inverse_decay_data(1.0, 1.0, 41).unwrap();
    assert_eq!(data.row, 21);
    assert_eq!(data.entries.len(), 21);
    assert!(data.entries.iter().zip(&data.lower_bound).all(|(a, b)| a >= b));
    assert!(data.entries.windows(2).all(|p| p[1] < p[0]));
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(regret_sweep_data(0.0, 3).is_err());
    assert!(trajectory_data(f64::NAN, 3).is_err());
    assert!(inverse_decay_data(1.0, 0.0, 5).is_err());
    assert!(inverse_decay_data(1.0, 1.0, 0).is_err());
    assert!(inverse_decay_data(1.0, 1.0, 5000).is_err());
}
