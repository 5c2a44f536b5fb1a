//! # lqgkit
//!
//! Linear-quadratic estimation and control toolkit: dense linear-algebra
//! kernels, a longitudinal vehicle model with stability analysis, LQR gain
//! synthesis through a continuous algebraic Riccati solver, a
//! controller-coupled discrete Kalman filter, a firefly-algorithm tuner for
//! weight matrices, and a deterministic closed-loop scenario simulator with
//! quantitative tracking metrics.
//!
//! ## Start with the examples
//!
//! Each major capability has one runnable example:
//!
//! ```text
//! examples/
//! ├── stability_analysis.rs     # model spectrum, characteristic polynomial, verdicts
//! ├── lqr_design.rs             # Riccati solve and gain synthesis
//! ├── kalman_filtering.rs       # predict/update stepping and covariance behavior
//! ├── firefly_optimization.rs   # firefly search on a test function
//! ├── closed_loop_simulation.rs # full scenario run, metrics, trace files
//! ├── tune_filter_noise.rs      # firefly tuning of the filter's assumed noise
//! └── scenario_config.rs        # scenario JSON round-trips and presets
//! ```
//!
//! ```bash
//! cargo run -p lqgkit --example stability_analysis
//! cargo run -p lqgkit --example lqr_design
//! cargo run -p lqgkit --example kalman_filtering
//! cargo run -p lqgkit --example firefly_optimization
//! cargo run -p lqgkit --example closed_loop_simulation
//! cargo run -p lqgkit --example tune_filter_noise
//! cargo run -p lqgkit --example scenario_config
//! ```
//!
//! ## Command line
//!
//! The thin `lqgkit` binary exposes the same pipeline:
//!
//! ```bash
//! lqgkit roots    --scenario longitudinal-demo
//! lqgkit simulate --scenario planar-goal --seed 7 --out out/
//! lqgkit analyze  --trace out/
//! lqgkit tune     --scenario planar-goal --select kf --iters 50 --pop 15 --seed 1 --out tuned/
//! ```
//!
//! ## Module map
//!
//! - [`linalg`]: matrices, pivoted solves, eigenvalues, Lyapunov/Riccati.
//! - [`airframe`]: longitudinal model build, Euler discretization, stability.
//! - [`lqr`]: gain synthesis and the quadratic cost.
//! - [`kalman`]: the coupled discrete filter.
//! - [`firefly`]: the optimizer and the pipeline tuner.
//! - [`sim`]: scenarios, the closed-loop engine, metrics, trace output.
//! - [`cli`]: argument parsing and dispatch for the binary.

pub mod airframe;
pub mod cli;
pub mod firefly;
pub mod kalman;
pub mod linalg;
pub mod lqr;
pub mod sim;

pub use airframe::{LinearModel, StabilityDerivatives, StateVector};
pub use firefly::{FireflyParams, OptimizationResult, SearchSpace};
pub use kalman::{FilterConfig, FilterState, NoiseSpec};
pub use linalg::{ComplexPair, Matrix};
pub use lqr::LqrDesign;
pub use sim::{MetricsReport, RunTrace, Scenario};
