//! A full closed-loop run of the planar-goal scenario: controller on the
//! filter estimate, truth driven by process noise, metrics at the end, and
//! the three trace files on disk. Also compares against feeding raw
//! measurements back into the controller.
//!
//! ```bash
//! cargo run -p lqgkit --example closed_loop_simulation
//! ```

use lqgkit::cli::print_report;
use lqgkit::sim::{run_scenario, run_scenario_with, write_trace, FeedbackSource, Scenario};

fn main() {
    let scenario = Scenario::preset("planar-goal").unwrap();
    let seed = 7;

    let trace = run_scenario(&scenario, seed).unwrap();
    println!(
        "ran `{}`: {} steps of {} s toward goal {:?} m",
        scenario.name,
        trace.rows.len(),
        scenario.dt,
        scenario.goal_m
    );

    // sample the trajectory every 60 s
    println!("\n   t      truth (x, y)          estimate (x, y)");
    for row in trace.rows.iter().step_by(120) {
        println!(
            "{:>6.1}   ({:>8.1}, {:>8.1})   ({:>8.1}, {:>8.1})",
            row.t, row.truth[0], row.truth[2], row.est_post[0], row.est_post[2]
        );
    }
    let last = trace.rows.last().unwrap();
    println!(
        "terminal distance to goal: {:.1} m",
        ((last.truth[0] - 8000.0).powi(2) + (last.truth[2] - 8000.0).powi(2)).sqrt()
    );

    println!("\n== metrics ==");
    print!("{}", print_report(&trace.metrics));

    // the same seed with raw-measurement feedback: noisier state knowledge
    let raw = run_scenario_with(&scenario, seed, FeedbackSource::Measurement).unwrap();
    println!("\nestimate-feedback MSE: {:>10.3}", trace.metrics.mse);
    println!("raw-feedback MSE:      {:>10.3}", raw.metrics.mse);

    let dir = std::path::Path::new("target/example-out/closed-loop");
    let files = write_trace(&trace, &scenario, dir).unwrap();
    println!("\nwrote {}", files.trace_csv.display());
    println!("wrote {}", files.metrics_json.display());
    println!("wrote {}", files.plot_csv.display());
}
