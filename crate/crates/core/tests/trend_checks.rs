//! Trend diagnostics that track asymptotic claims at growing desk-scale
//! sizes. These assert direction (and print the numbers), never limits.

use startail_core::rate::StarParams;
use startail_core::sim::{
    naive_tail, planted_tail_breakdown, rate_comparison, SampleMode, SimOptions,
};

#[test]
fn planted_residual_factor_tends_to_one() {
    // fixed p-scaling p = 1.5/n: the residual graph concentrates and
    // P(X-hat >= (1 - delta/2) mu-hat) climbs toward 1
    let delta = 0.5;
    let mut factors = Vec::new();
    for &n in &[20u64, 60, 180] {
        let p = 1.5 / n as f64;
        let sp = StarParams::new(2, n, p).unwrap();
        let opts = SimOptions::new(20_000, 71).with_workers(4);
        let breakdown = planted_tail_breakdown(&sp, 1.0, delta, &opts).unwrap();
        factors.push(breakdown.residual.estimate);
    }
    println!("planted residual success factors over n = 20, 60, 180: {factors:?}");
    assert!(factors[0] < factors[1] && factors[1] < factors[2]);
    assert!(factors[2] > 0.9, "largest size should be close to 1");
}

#[test]
fn measured_rate_tracks_dense_prediction() {
    // diagnostic only: record -log(estimate) / predicted over growing n at
    // fixed p; no convergence is asserted at these sizes
    let (p, eps) = (0.35f64, 0.4f64);
    let mut ratios = Vec::new();
    for &n in &[10u64, 14, 18] {
        let sp = StarParams::new(2, n, p).unwrap();
        let est = naive_tail(
            &sp,
            eps,
            SampleMode::GnpDegrees,
            &SimOptions::new(400_000, 97).with_workers(4),
        )
        .unwrap();
        let cmp = rate_comparison(&sp, eps, &est, 4.0).unwrap();
        assert!(cmp.ratio_to_predicted.is_finite() && cmp.ratio_to_predicted > 0.0);
        ratios.push(cmp.ratio_to_predicted);
    }
    println!("measured/predicted rate ratios over n = 10, 14, 18: {ratios:?}");
}
