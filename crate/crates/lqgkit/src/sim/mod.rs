//! Deterministic closed-loop scenario engine.
//!
//! One run couples four pieces: truth propagation through the
//! Euler-discretized model with white process noise, noisy measurements,
//! the coupled Kalman filter, and the state-feedback controller acting on
//! the *estimate* — the loop's defining property. Everything is driven by a
//! single seeded generator, so `(scenario, seed)` determines the trace
//! bit-for-bit.

mod metrics;
mod scenario;
mod trace;

pub use metrics::{compute_metrics, Confusion, MetricsReport};
pub use scenario::{
    load_scenario, load_scenario_file, planar_goal_model, save_scenario, HeightRowConfig,
    ModelSpec, NoiseConfig, Scenario, ScenarioError, WeightSpec, WeightsConfig,
    PRESET_LONGITUDINAL, PRESET_PLANAR,
};
pub use trace::{fmt_float, write_trace, RunTrace, TraceError, TraceFiles, TraceRow};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::airframe::euler_discretize;
use crate::kalman::{kf_init, kf_predict, kf_update, FilterConfig, FilterError, NoiseSpec};
use crate::linalg::{cholesky_psd, solve_linear, LinalgError, Matrix};
use crate::lqr::{lqr_gain, LqrError};

/// Errors from scenario execution.
#[derive(Debug)]
pub enum SimError {
    Scenario(ScenarioError),
    Lqr(LqrError),
    /// Filter setup failed before stepping.
    Setup(FilterError),
    /// The filter failed mid-run; carries the zero-based step index.
    Filter { step: usize, source: FilterError },
    /// Raw-measurement feedback needs an invertible square measurement map.
    RawFeedback { reason: String },
    Trace(TraceError),
    Linalg(LinalgError),
}

impl std::fmt::Display for SimError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimError::Scenario(e) => write!(f, "{e}"),
            SimError::Lqr(e) => write!(f, "gain synthesis failed: {e}"),
            SimError::Setup(e) => write!(f, "filter setup failed: {e}"),
            SimError::Filter { step, source } => {
                write!(f, "filter failed at step {step}: {source}")
            }
            SimError::RawFeedback { reason } => write!(f, "raw-measurement feedback: {reason}"),
            SimError::Trace(e) => write!(f, "{e}"),
            SimError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SimError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            SimError::Scenario(e) => Some(e),
            SimError::Lqr(e) => Some(e),
            SimError::Setup(e) => Some(e),
            SimError::Filter { source, .. } => Some(source),
            SimError::Trace(e) => Some(e),
            SimError::Linalg(e) => Some(e),
            SimError::RawFeedback { .. } => None,
        }
    }
}

impl From<ScenarioError> for SimError {
    fn from(e: ScenarioError) -> Self {
        SimError::Scenario(e)
    }
}

impl From<LqrError> for SimError {
    fn from(e: LqrError) -> Self {
        SimError::Lqr(e)
    }
}

impl From<TraceError> for SimError {
    fn from(e: TraceError) -> Self {
        SimError::Trace(e)
    }
}

impl From<LinalgError> for SimError {
    fn from(e: LinalgError) -> Self {
        SimError::Linalg(e)
    }
}

/// What the controller feeds back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeedbackSource {
    /// The filter's a-posteriori estimate (the designed loop).
    #[default]
    Estimate,
    /// The raw measurement, bypassing the filter; the trace's estimate
    /// columns then carry the measurement. Requires a square invertible
    /// measurement map.
    Measurement,
}

/// Draws one zero-mean sample pair `(process, measurement)` with the
/// covariances of `spec`. Zero covariances yield exactly zero samples.
pub fn sample_noise(spec: &NoiseSpec, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let lq = cholesky_psd(spec.q_process()).expect("NoiseSpec guarantees PSD");
    let lr = cholesky_psd(spec.r_meas()).expect("NoiseSpec guarantees PSD");
    (correlated_draw(&lq, rng), correlated_draw(&lr, rng))
}

fn correlated_draw(factor: &Matrix, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = factor.rows();
    let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    factor.mul_vec(&g).expect("factor is square")
}

/// Runs one scenario with estimate feedback. See [`run_scenario_with`].
pub fn run_scenario(scenario: &Scenario, seed: u64) -> Result<RunTrace, SimError> {
    run_scenario_with(scenario, seed, FeedbackSource::Estimate)
}

/// Runs one scenario to completion.
///
/// Per step: the control `u = K (x_desired - feedback)` is computed from the
/// filter estimate (or raw measurement), the truth advances through the
/// discrete model with a fresh process-noise draw, a noisy measurement is
/// taken, and the filter performs one predict/update cycle. The trace row
/// count is `floor(duration / dt)` and the run is fully deterministic given
/// the seed.
pub fn run_scenario_with(
    scenario: &Scenario,
    seed: u64,
    feedback: FeedbackSource,
) -> Result<RunTrace, SimError> {
    let model_c = scenario.build_model()?;
    let (q_w, r_w) = scenario.weight_matrices(&model_c)?;
    let design = lqr_gain(&model_c, &q_w, &r_w)?;
    let model_d = euler_discretize(&model_c, scenario.dt)
        .map_err(|e| SimError::Scenario(ScenarioError::Invalid {
            field: "dt",
            reason: e.to_string(),
        }))?;

    let true_noise = scenario.true_noise.to_spec(&model_d)?;
    let assumed_noise = scenario.assumed_noise.to_spec(&model_d)?;
    let p0 = scenario
        .p0
        .to_matrix(model_d.num_states(), "p0")
        .map_err(SimError::Scenario)?;

    let cfg = FilterConfig::new(
        model_d.clone(),
        assumed_noise,
        design.k_gain.clone(),
        scenario.x_desired.clone(),
    )
    .map_err(SimError::Setup)?;
    let mut filter = kf_init(&cfg, &scenario.est0, &p0).map_err(SimError::Setup)?;

    // raw feedback inverts the measurement map once up front
    let h_inv = match feedback {
        FeedbackSource::Estimate => None,
        FeedbackSource::Measurement => {
            let h = &model_d.h_meas;
            if !h.is_square() {
                return Err(SimError::RawFeedback {
                    reason: format!(
                        "measurement map is {}x{}, full-state measurements required",
                        h.rows(),
                        h.cols()
                    ),
                });
            }
            let n = h.rows();
            let inv = solve_linear(h, &Matrix::identity(n)).map_err(|e| SimError::RawFeedback {
                reason: format!("measurement map not invertible: {e}"),
            })?;
            Some(inv)
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = scenario.num_steps();
    let mut rows = Vec::with_capacity(steps);
    let mut truth = scenario.x0.clone();
    // the raw-feedback signal starts where the filter starts
    let mut raw_state = scenario.est0.clone();

    for k in 0..steps {
        let fb = match feedback {
            FeedbackSource::Estimate => &filter.x_est,
            FeedbackSource::Measurement => &raw_state,
        };
        let err: Vec<f64> = scenario
            .x_desired
            .iter()
            .zip(fb)
            .map(|(d, x)| d - x)
            .collect();
        let u = cfg.k_lqr.mul_vec(&err)?;

        let (w, v) = sample_noise(&true_noise, &mut rng);
        let ax = model_d.a.mul_vec(&truth)?;
        let bu = model_d.b.mul_vec(&u)?;
        let gw = model_d.g_noise.mul_vec(&w)?;
        truth = ax
            .iter()
            .zip(&bu)
            .zip(&gw)
            .map(|((a, b), g)| a + b + g)
            .collect();
        let z: Vec<f64> = model_d
            .h_meas
            .mul_vec(&truth)?
            .iter()
            .zip(&v)
            .map(|(h, vi)| h + vi)
            .collect();

        let t = (k + 1) as f64 * scenario.dt;
        match feedback {
            FeedbackSource::Estimate => {
                let prior = kf_predict(&filter, &cfg).map_err(|source| SimError::Filter {
                    step: k,
                    source,
                })?;
                let post = kf_update(&prior, &z, &cfg).map_err(|source| SimError::Filter {
                    step: k,
                    source,
                })?;
                rows.push(TraceRow {
                    t,
                    truth: truth.clone(),
                    measurement: z,
                    est_prior: prior.x_est,
                    est_post: post.x_est.clone(),
                    control: u,
                    innovation: post
                        .last_innovation
                        .clone()
                        .expect("update records the innovation"),
                });
                filter = post;
            }
            FeedbackSource::Measurement => {
                let surrogate = h_inv
                    .as_ref()
                    .expect("raw mode precomputes the inverse")
                    .mul_vec(&z)?;
                rows.push(TraceRow {
                    t,
                    truth: truth.clone(),
                    measurement: z,
                    est_prior: surrogate.clone(),
                    est_post: surrogate.clone(),
                    control: u,
                    innovation: vec![0.0; model_d.num_outputs()],
                });
                raw_state = surrogate;
            }
        }
    }

    let metrics = compute_metrics(&rows, scenario);
    Ok(RunTrace { rows, metrics })
}
