//! Scenario files: presets by name, JSON round-trips, overrides, and the
//! inert metadata map that carries configuration fields with no physical
//! role in the simulation.
//!
//! ```bash
//! cargo run -p lqgkit --example scenario_config
//! ```

use lqgkit::sim::{load_scenario, save_scenario, Scenario};

fn main() {
    // a minimal document: just name a preset, defaults fill the rest
    let s = load_scenario(r#"{"model": "planar-goal"}"#).unwrap();
    println!(
        "planar-goal: dt {} s, duration {} s, goal {:?} m, {} steps",
        s.dt,
        s.duration,
        s.goal_m,
        s.num_steps()
    );

    // overrides merge with defaults; unknown keys are rejected unless inert
    let doc = r#"{
        "model": "planar-goal",
        "dt": 0.25,
        "seeds": [10, 11, 12],
        "goal_m": [6000.0, 9000.0],
        "inert": {
            "light_speed_mps": 299792458,
            "boltzman_constant": 17,
            "engine_heat_c": 23,
            "rotational_capability_rad": 0.017453,
            "initial_gain": 1,
            "spin_speed_mps": 200,
            "path_to_goal_m": 2500
        }
    }"#;
    let custom = load_scenario(doc).unwrap();
    println!(
        "\ncustomized: dt {} s, goal {:?} m, x_desired {:?}",
        custom.dt, custom.goal_m, custom.x_desired
    );
    println!("inert fields carried verbatim: {:?}", custom.inert.keys().collect::<Vec<_>>());

    // round-trip identity
    let text = save_scenario(&custom);
    let reloaded = load_scenario(&text).unwrap();
    println!("round-trip identical: {}", reloaded == custom);

    // presets are addressable in code too
    let long_demo = Scenario::preset("longitudinal-demo").unwrap();
    println!(
        "\nlongitudinal-demo: {} states, dt {} s, regulates height to {} m",
        long_demo.build_model().unwrap().num_states(),
        long_demo.dt,
        long_demo.goal_m[0]
    );

    // malformed documents fail with position annotations
    let err = load_scenario(r#"{"model": "planar-goal", "dt": }"#).unwrap_err();
    println!("\nparse failure example: {err}");
    let err = load_scenario(r#"{"model": "planar-goal", "dt": -1.0}"#).unwrap_err();
    println!("validation failure example: {err}");
}
