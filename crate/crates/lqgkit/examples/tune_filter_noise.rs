//! Firefly tuning of the filter's assumed noise diagonals on a shortened
//! planar scenario: start from a deliberately wrong belief, search two
//! decades around it, and compare the tracking MSE before and after.
//!
//! ```bash
//! cargo run -p lqgkit --example tune_filter_noise
//! ```

use lqgkit::firefly::{
    selector_diagonals, tune_pipeline, FireflyParams, SearchSpace, TuneSelector,
};
use lqgkit::sim::{run_scenario, Scenario, WeightSpec};

fn mean_mse(scenario: &Scenario) -> f64 {
    scenario
        .seeds
        .iter()
        .map(|&seed| run_scenario(scenario, seed).unwrap().metrics.mse)
        .sum::<f64>()
        / scenario.seeds.len() as f64
}

fn main() {
    let mut scenario = Scenario::preset("planar-goal").unwrap();
    scenario.duration = 120.0;
    scenario.seeds = vec![1, 2, 3];
    // sabotage the filter's belief: measurement covariance off by 100x
    scenario.assumed_noise.r_meas =
        WeightSpec::Diagonal(vec![250000.0, 400.0, 250000.0, 400.0]);

    let before = mean_mse(&scenario);
    println!("mean MSE with mismatched assumed noise: {before:.3}");

    let selectors = [TuneSelector::KfNoiseDiagonals];
    let center: Vec<f64> = selector_diagonals(&scenario, &selectors)
        .unwrap()
        .iter()
        .map(|v| v.log10())
        .collect();
    let space = SearchSpace::new(
        center.iter().map(|c| c - 2.0).collect(),
        center.iter().map(|c| c + 2.0).collect(),
    )
    .unwrap();
    let params = FireflyParams {
        population: 10,
        iterations: 20,
        seed: 1,
        ..Default::default()
    };

    println!("tuning {} dims over {} iterations...", space.dims(), params.iterations);
    let result = tune_pipeline(&scenario, &selectors, &space, &params).unwrap();
    for (i, cost) in result.optimization.history.iter().enumerate().step_by(5) {
        println!("  iter {i:>3}: best mean MSE {cost:.3}");
    }

    let after = mean_mse(&result.tuned_scenario);
    println!("\ntuned diagonals (q then r): {:?}", result
        .tuned_diagonals
        .iter()
        .map(|v| (v * 1000.0).round() / 1000.0)
        .collect::<Vec<_>>());
    println!("mean MSE before tuning: {before:.3}");
    println!("mean MSE after tuning:  {after:.3}");
}
