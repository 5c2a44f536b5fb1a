//! Scenario configuration: JSON schema, presets, defaults, and validation.
//!
//! A scenario document names a model (preset tag, stability derivatives, or
//! inline matrices) and optionally overrides timing, noise, weights, goal
//! geometry, and seeds. Every omitted field takes its documented default;
//! unknown keys are rejected except under `inert`, which is preserved
//! verbatim.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::airframe::{
    build_longitudinal_model_with, euler_discretize, longitudinal_demo_model, HeightRow,
    LinearModel, ModelError, StabilityDerivatives,
};
use crate::kalman::{FilterError, NoiseSpec};
use crate::linalg::{LinalgError, Matrix};

/// Errors from loading or validating scenario documents.
#[derive(Debug)]
pub enum ScenarioError {
    /// Malformed JSON; the source error carries line/column position.
    Parse(serde_json::Error),
    /// A field violates its invariant.
    Invalid { field: &'static str, reason: String },
    UnknownPreset { name: String },
    Io { path: PathBuf, source: std::io::Error },
}

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioError::Parse(e) => write!(f, "scenario parse error: {e}"),
            ScenarioError::Invalid { field, reason } => {
                write!(f, "invalid scenario field `{field}`: {reason}")
            }
            ScenarioError::UnknownPreset { name } => {
                write!(f, "unknown scenario preset `{name}` (available: longitudinal-demo, planar-goal)")
            }
            ScenarioError::Io { path, source } => {
                write!(f, "cannot read scenario `{}`: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for ScenarioError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ScenarioError::Parse(e) => Some(e),
            ScenarioError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// A weight or covariance matrix in config form: a diagonal list or a full
/// nested-array matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Diagonal(Vec<f64>),
    Full(Vec<Vec<f64>>),
}

impl WeightSpec {
    pub fn to_matrix(&self, n: usize, field: &'static str) -> Result<Matrix, ScenarioError> {
        let m = match self {
            WeightSpec::Diagonal(d) => {
                if d.len() != n {
                    return Err(ScenarioError::Invalid {
                        field,
                        reason: format!("diagonal has {} entries, expected {n}", d.len()),
                    });
                }
                Matrix::from_diag(d)
            }
            WeightSpec::Full(rows) => Matrix::from_nested(rows).map_err(|e| ScenarioError::Invalid {
                field,
                reason: e.to_string(),
            })?,
        };
        if m.rows() != n || m.cols() != n {
            return Err(ScenarioError::Invalid {
                field,
                reason: format!("matrix is {}x{}, expected {n}x{n}", m.rows(), m.cols()),
            });
        }
        Ok(m)
    }
}

/// Process/measurement/control-uncertainty covariances in config form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub q_process: WeightSpec,
    pub r_meas: WeightSpec,
    /// Control-input uncertainty; defaults to zero (deterministic input).
    #[serde(default)]
    pub d_control: Option<WeightSpec>,
}

impl NoiseConfig {
    pub fn diagonal(q: &[f64], r: &[f64]) -> Self {
        Self {
            q_process: WeightSpec::Diagonal(q.to_vec()),
            r_meas: WeightSpec::Diagonal(r.to_vec()),
            d_control: None,
        }
    }

    /// Resolves against a model's dimensions into a validated [`NoiseSpec`].
    pub fn to_spec(&self, model: &LinearModel) -> Result<NoiseSpec, ScenarioError> {
        let q = self.q_process.to_matrix(model.num_noise(), "q_process")?;
        let r = self.r_meas.to_matrix(model.num_outputs(), "r_meas")?;
        let d = match &self.d_control {
            Some(spec) => spec.to_matrix(model.num_inputs(), "d_control")?,
            None => Matrix::zeros(model.num_inputs(), model.num_inputs()),
        };
        NoiseSpec::new(q, r, d).map_err(|e: FilterError| ScenarioError::Invalid {
            field: "noise",
            reason: e.to_string(),
        })
    }
}

/// LQR weight matrices in config form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsConfig {
    pub q: WeightSpec,
    pub r: WeightSpec,
}

/// The model a scenario runs: a named preset, stability derivatives, or
/// inline matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Preset(String),
    Derivatives {
        derivatives: StabilityDerivatives,
        #[serde(default)]
        height_row: HeightRowConfig,
    },
    Inline {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        g: Vec<Vec<f64>>,
        h: Vec<Vec<f64>>,
    },
}

/// Config-file spelling of the height-row variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HeightRowConfig {
    #[default]
    AsPrinted,
    Standard,
}

impl From<HeightRowConfig> for HeightRow {
    fn from(h: HeightRowConfig) -> Self {
        match h {
            HeightRowConfig::AsPrinted => HeightRow::AsPrinted,
            HeightRowConfig::Standard => HeightRow::Standard,
        }
    }
}

pub const PRESET_LONGITUDINAL: &str = "longitudinal-demo";
pub const PRESET_PLANAR: &str = "planar-goal";

/// A fully resolved closed-loop scenario: model, timing, noise, goal
/// geometry, weights, seeds, and the inert metadata carried along verbatim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub model: ModelSpec,
    /// Sampling interval (s).
    pub dt: f64,
    /// Total simulated time (s).
    pub duration: f64,
    pub env_extent_km: [f64; 2],
    /// Goal coordinates (m) in the space selected by `position_states`.
    pub goal_m: Vec<f64>,
    pub cruise_height_m: f64,
    pub speed_avg_mps: f64,
    pub speed_min_mps: f64,
    pub speed_max_mps: f64,
    /// Covariances driving the simulated truth and measurements.
    pub true_noise: NoiseConfig,
    /// Covariances the filter believes; tune these against `true_noise`.
    pub assumed_noise: NoiseConfig,
    pub lqr_weights: WeightsConfig,
    pub detection_radius_m: f64,
    /// Evaluation seeds for tuning objectives and batch statistics.
    pub seeds: Vec<u64>,
    /// Initial truth state.
    pub x0: Vec<f64>,
    /// Initial filter estimate.
    pub est0: Vec<f64>,
    /// Initial filter covariance.
    pub p0: WeightSpec,
    /// Setpoint the coupled controller regulates toward.
    pub x_desired: Vec<f64>,
    /// State indices forming the goal-space position.
    pub position_states: Vec<usize>,
    /// State indices forming the monitored velocity (may be empty).
    pub velocity_states: Vec<usize>,
    /// Free-form fields preserved verbatim; no physical role.
    pub inert: BTreeMap<String, serde_json::Value>,
}

/// Raw document shape: everything optional except the model.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default)]
    name: Option<String>,
    model: ModelSpec,
    #[serde(default)]
    dt: Option<f64>,
    #[serde(default)]
    duration: Option<f64>,
    #[serde(default)]
    env_extent_km: Option<[f64; 2]>,
    #[serde(default)]
    goal_m: Option<Vec<f64>>,
    #[serde(default)]
    cruise_height_m: Option<f64>,
    #[serde(default)]
    speed_avg_mps: Option<f64>,
    #[serde(default)]
    speed_min_mps: Option<f64>,
    #[serde(default)]
    speed_max_mps: Option<f64>,
    #[serde(default)]
    true_noise: Option<NoiseConfig>,
    #[serde(default)]
    assumed_noise: Option<NoiseConfig>,
    #[serde(default)]
    lqr_weights: Option<WeightsConfig>,
    #[serde(default)]
    detection_radius_m: Option<f64>,
    #[serde(default)]
    seeds: Option<Vec<u64>>,
    #[serde(default)]
    x0: Option<Vec<f64>>,
    #[serde(default)]
    est0: Option<Vec<f64>>,
    #[serde(default)]
    p0: Option<WeightSpec>,
    #[serde(default)]
    x_desired: Option<Vec<f64>>,
    #[serde(default)]
    position_states: Option<Vec<usize>>,
    #[serde(default)]
    velocity_states: Option<Vec<usize>>,
    #[serde(default)]
    inert: BTreeMap<String, serde_json::Value>,
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(ScenarioError::Parse)?;
    resolve(doc)
}

/// Reads and parses a scenario file.
pub fn load_scenario_file(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_scenario(&text)
}

/// Serializes a scenario back to its document form.
pub fn save_scenario(s: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(s).expect("scenario serializes");
    out.push('\n');
    out
}

impl Scenario {
    /// Builds a preset scenario by name.
    pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
        load_scenario(&format!("{{\"model\": \"{name}\"}}"))
    }

    /// The continuous-time model this scenario runs.
    pub fn build_model(&self) -> Result<LinearModel, ScenarioError> {
        build_model_spec(&self.model)
    }

    /// Number of steps in one run.
    pub fn num_steps(&self) -> usize {
        (self.duration / self.dt).floor() as usize
    }

    /// LQR weight matrices resolved against the model dimensions.
    pub fn weight_matrices(&self, model: &LinearModel) -> Result<(Matrix, Matrix), ScenarioError> {
        let q = self.lqr_weights.q.to_matrix(model.num_states(), "lqr_weights.q")?;
        let r = self.lqr_weights.r.to_matrix(model.num_inputs(), "lqr_weights.r")?;
        Ok((q, r))
    }
}

fn build_model_spec(spec: &ModelSpec) -> Result<LinearModel, ScenarioError> {
    match spec {
        ModelSpec::Preset(name) => match name.as_str() {
            PRESET_LONGITUDINAL => Ok(longitudinal_demo_model()),
            PRESET_PLANAR => Ok(planar_goal_model()),
            other => Err(ScenarioError::UnknownPreset {
                name: other.to_string(),
            }),
        },
        ModelSpec::Derivatives {
            derivatives,
            height_row,
        } => build_longitudinal_model_with(derivatives, (*height_row).into()).map_err(
            |e: ModelError| ScenarioError::Invalid {
                field: "model.derivatives",
                reason: e.to_string(),
            },
        ),
        ModelSpec::Inline { a, b, g, h } => {
            let build = || -> Result<LinearModel, LinalgError> {
                let a = Matrix::from_nested(a)?;
                let b = Matrix::from_nested(b)?;
                let g = Matrix::from_nested(g)?;
                let h = Matrix::from_nested(h)?;
                Ok(LinearModel {
                    a,
                    b,
                    g_noise: g,
                    h_meas: h,
                    is_discrete: false,
                    dt: None,
                })
            };
            let model = build().map_err(|e| ScenarioError::Invalid {
                field: "model",
                reason: e.to_string(),
            })?;
            LinearModel::continuous(model.a, model.b, model.g_noise, model.h_meas).map_err(|e| {
                ScenarioError::Invalid {
                    field: "model",
                    reason: e.to_string(),
                }
            })
        }
    }
}

/// Per-axis double-integrator planar model: state `[x vx y vy]`, control
/// `[ax ay]`, process noise entering the accelerations, full-state
/// measurement.
pub fn planar_goal_model() -> LinearModel {
    let a = Matrix::from_rows(&[
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 0.0, 0.0],
    ]);
    let b = Matrix::from_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]);
    let g = b.clone();
    LinearModel::continuous(a, b, g, Matrix::identity(4)).expect("planar model shapes are fixed")
}

fn resolve(doc: ScenarioDoc) -> Result<Scenario, ScenarioError> {
    let model = build_model_spec(&doc.model)?;
    let n = model.num_states();
    let preset = match &doc.model {
        ModelSpec::Preset(name) => Some(name.clone()),
        _ => None,
    };

    let cruise_height_m = doc.cruise_height_m.unwrap_or(200.0);

    // goal/setpoint geometry: presets derive it, custom models must state it
    let (position_states, velocity_states, goal_m, x_desired) = match preset.as_deref() {
        Some(PRESET_PLANAR) => {
            let position_states = doc.position_states.unwrap_or(vec![0, 2]);
            let velocity_states = doc.velocity_states.unwrap_or(vec![1, 3]);
            let goal_m = doc.goal_m.unwrap_or(vec![8000.0, 8000.0]);
            let x_desired = doc.x_desired.unwrap_or_else(|| {
                let mut xd = vec![0.0; n];
                for (slot, g) in position_states.iter().zip(&goal_m) {
                    if *slot < n {
                        xd[*slot] = *g;
                    }
                }
                xd
            });
            (position_states, velocity_states, goal_m, x_desired)
        }
        Some(PRESET_LONGITUDINAL) => {
            let position_states = doc.position_states.unwrap_or(vec![4]);
            let velocity_states = doc.velocity_states.unwrap_or_default();
            let goal_m = doc.goal_m.unwrap_or(vec![cruise_height_m]);
            let x_desired = doc.x_desired.unwrap_or_else(|| {
                let mut xd = vec![0.0; n];
                for (slot, g) in position_states.iter().zip(&goal_m) {
                    if *slot < n {
                        xd[*slot] = *g;
                    }
                }
                xd
            });
            (position_states, velocity_states, goal_m, x_desired)
        }
        _ => {
            let position_states = doc.position_states.ok_or(ScenarioError::Invalid {
                field: "position_states",
                reason: "required for custom models".into(),
            })?;
            let x_desired = doc.x_desired.ok_or(ScenarioError::Invalid {
                field: "x_desired",
                reason: "required for custom models".into(),
            })?;
            let goal_m = doc.goal_m.unwrap_or_else(|| {
                position_states
                    .iter()
                    .map(|&i| x_desired.get(i).copied().unwrap_or(0.0))
                    .collect()
            });
            (
                position_states,
                doc.velocity_states.unwrap_or_default(),
                goal_m,
                x_desired,
            )
        }
    };

    let (default_true, default_assumed, default_weights) = match preset.as_deref() {
        Some(PRESET_PLANAR) => {
            let noise = NoiseConfig::diagonal(&[0.25, 0.25], &[2500.0, 4.0, 2500.0, 4.0]);
            let weights = WeightsConfig {
                q: WeightSpec::Diagonal(vec![1.0; 4]),
                r: WeightSpec::Diagonal(vec![1.0; 2]),
            };
            (Some(noise.clone()), Some(noise), Some(weights))
        }
        Some(PRESET_LONGITUDINAL) => {
            let noise = NoiseConfig::diagonal(
                &[1e-4; 5],
                &[0.01, 0.01, 1e-4, 1e-4, 25.0],
            );
            let weights = WeightsConfig {
                q: WeightSpec::Diagonal(vec![1.0; 5]),
                r: WeightSpec::Diagonal(vec![1.0; 2]),
            };
            (Some(noise.clone()), Some(noise), Some(weights))
        }
        _ => (None, None, None),
    };

    let true_noise = doc
        .true_noise
        .or(default_true)
        .ok_or(ScenarioError::Invalid {
            field: "true_noise",
            reason: "required for custom models".into(),
        })?;
    let assumed_noise = doc
        .assumed_noise
        .or(default_assumed)
        .ok_or(ScenarioError::Invalid {
            field: "assumed_noise",
            reason: "required for custom models".into(),
        })?;
    let lqr_weights = doc.lqr_weights.or(default_weights).unwrap_or(WeightsConfig {
        q: WeightSpec::Diagonal(vec![1.0; n]),
        r: WeightSpec::Diagonal(vec![1.0; model.num_inputs()]),
    });

    let x0 = doc.x0.unwrap_or_else(|| vec![0.0; n]);
    let est0 = doc.est0.unwrap_or_else(|| x0.clone());
    let p0 = doc.p0.unwrap_or(WeightSpec::Diagonal(vec![1.0; n]));

    // forward Euler keeps the short-period pair of the longitudinal demo
    // stable only below dt = 2|Re|/|lambda|^2 (about 0.19 s), so that preset
    // defaults to a finer grid than the global 0.5 s sampling default
    let default_dt = match preset.as_deref() {
        Some(PRESET_LONGITUDINAL) => 0.05,
        _ => 0.5,
    };
    let scenario = Scenario {
        name: doc
            .name
            .or_else(|| preset.clone())
            .unwrap_or_else(|| "custom".to_string()),
        model: doc.model,
        dt: doc.dt.unwrap_or(default_dt),
        duration: doc.duration.unwrap_or(270.0),
        env_extent_km: doc.env_extent_km.unwrap_or([12.0, 12.0]),
        goal_m,
        cruise_height_m,
        speed_avg_mps: doc.speed_avg_mps.unwrap_or(30.0),
        speed_min_mps: doc.speed_min_mps.unwrap_or(15.0),
        speed_max_mps: doc.speed_max_mps.unwrap_or(50.0),
        true_noise,
        assumed_noise,
        lqr_weights,
        detection_radius_m: doc.detection_radius_m.unwrap_or(500.0),
        seeds: doc.seeds.unwrap_or(vec![1, 2, 3]),
        x0,
        est0,
        p0,
        x_desired,
        position_states,
        velocity_states,
        inert: doc.inert,
    };
    validate(&scenario, &model)?;
    Ok(scenario)
}

fn validate(s: &Scenario, model: &LinearModel) -> Result<(), ScenarioError> {
    let n = model.num_states();
    if !(s.dt > 0.0 && s.dt.is_finite()) {
        return Err(ScenarioError::Invalid {
            field: "dt",
            reason: format!("must be positive, got {}", s.dt),
        });
    }
    if !(s.duration >= s.dt) {
        return Err(ScenarioError::Invalid {
            field: "duration",
            reason: format!("must be at least dt ({}), got {}", s.dt, s.duration),
        });
    }
    if s.env_extent_km.iter().any(|&e| !(e > 0.0)) {
        return Err(ScenarioError::Invalid {
            field: "env_extent_km",
            reason: "extents must be positive".into(),
        });
    }
    if !(s.speed_min_mps <= s.speed_avg_mps && s.speed_avg_mps <= s.speed_max_mps) {
        return Err(ScenarioError::Invalid {
            field: "speed_avg_mps",
            reason: format!(
                "speeds must satisfy min <= avg <= max, got {} <= {} <= {}",
                s.speed_min_mps, s.speed_avg_mps, s.speed_max_mps
            ),
        });
    }
    if s.goal_m.len() != s.position_states.len() {
        return Err(ScenarioError::Invalid {
            field: "goal_m",
            reason: format!(
                "goal has {} coordinates but position_states selects {}",
                s.goal_m.len(),
                s.position_states.len()
            ),
        });
    }
    for (i, &g) in s.goal_m.iter().enumerate() {
        let extent = s.env_extent_km[i.min(1)] * 1000.0;
        if !(0.0..=extent).contains(&g) {
            return Err(ScenarioError::Invalid {
                field: "goal_m",
                reason: format!("coordinate {i} ({g} m) outside the environment [0, {extent}] m"),
            });
        }
    }
    if !(s.detection_radius_m > 0.0) {
        return Err(ScenarioError::Invalid {
            field: "detection_radius_m",
            reason: "must be positive".into(),
        });
    }
    if s.seeds.is_empty() {
        return Err(ScenarioError::Invalid {
            field: "seeds",
            reason: "at least one evaluation seed is required".into(),
        });
    }
    for (field, v) in [("x0", &s.x0), ("est0", &s.est0), ("x_desired", &s.x_desired)] {
        if v.len() != n {
            return Err(ScenarioError::Invalid {
                field,
                reason: format!("has {} entries, model has {n} states", v.len()),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(ScenarioError::Invalid {
                field,
                reason: "entries must be finite".into(),
            });
        }
    }
    for (field, idx) in [
        ("position_states", &s.position_states),
        ("velocity_states", &s.velocity_states),
    ] {
        if idx.iter().any(|&i| i >= n) {
            return Err(ScenarioError::Invalid {
                field,
                reason: format!("index out of range for {n} states"),
            });
        }
    }
    if s.position_states.is_empty() {
        return Err(ScenarioError::Invalid {
            field: "position_states",
            reason: "must select at least one state".into(),
        });
    }
    // resolve everything that has matrix shape so shape errors surface now
    s.p0.to_matrix(n, "p0")?;
    s.true_noise.to_spec(model)?;
    s.assumed_noise.to_spec(model)?;
    s.weight_matrices(model)?;
    // steps fit in usize and there is at least one
    let steps = s.duration / s.dt;
    if !steps.is_finite() || steps < 1.0 || steps > 1e8 {
        return Err(ScenarioError::Invalid {
            field: "duration",
            reason: format!("duration/dt = {steps} steps is out of range"),
        });
    }
    // euler discretization must be applicable
    euler_discretize(model, s.dt).map_err(|e| ScenarioError::Invalid {
        field: "dt",
        reason: e.to_string(),
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_preset_defaults() {
        let s = load_scenario("{\"model\": \"planar-goal\"}").unwrap();
        assert_eq!(s.dt, 0.5);
        assert_eq!(s.duration, 270.0);
        assert_eq!(s.goal_m, vec![8000.0, 8000.0]);
        assert_eq!(s.env_extent_km, [12.0, 12.0]);
        assert_eq!(s.cruise_height_m, 200.0);
        assert_eq!(s.detection_radius_m, 500.0);
        assert_eq!(s.x_desired, vec![8000.0, 0.0, 8000.0, 0.0]);
        assert_eq!(s.num_steps(), 540);
        assert_eq!(s.name, "planar-goal");
    }

    #[test]
    fn longitudinal_preset_defaults() {
        let s = Scenario::preset("longitudinal-demo").unwrap();
        assert_eq!(s.position_states, vec![4]);
        assert_eq!(s.goal_m, vec![200.0]);
        assert_eq!(s.x_desired, vec![0.0, 0.0, 0.0, 0.0, 200.0]);
        let model = s.build_model().unwrap();
        assert_eq!(model.num_states(), 5);
    }

    #[test]
    fn zero_dt_rejected_naming_field() {
        let err = load_scenario("{\"model\": \"planar-goal\", \"dt\": 0.0}").unwrap_err();
        match err {
            ScenarioError::Invalid { field, .. } => assert_eq!(field, "dt"),
            other => panic!("expected Invalid, got {other}"),
        }
    }

    #[test]
    fn roundtrip_is_identity() {
        let mut s = Scenario::preset("planar-goal").unwrap();
        s.seeds = vec![4, 5, 6];
        s.inert.insert("light_speed_mps".into(), serde_json::json!(299792458.0));
        s.inert.insert("boltzman_constant".into(), serde_json::json!(17));
        let text = save_scenario(&s);
        let reloaded = load_scenario(&text).unwrap();
        assert_eq!(s, reloaded);
    }

    #[test]
    fn unknown_keys_rejected_outside_inert() {
        let err = load_scenario("{\"model\": \"planar-goal\", \"spin_speed\": 200}").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(_)));
        // but arbitrary keys under inert are preserved
        let s = load_scenario(
            "{\"model\": \"planar-goal\", \"inert\": {\"spin_speed_mps\": 200, \"path_to_goal_m\": 2500}}",
        )
        .unwrap();
        assert_eq!(s.inert.len(), 2);
    }

    #[test]
    fn parse_error_is_position_annotated() {
        let err = load_scenario("{\"model\": ").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line") && msg.contains("column"), "{msg}");
    }

    #[test]
    fn unknown_preset_named() {
        let err = Scenario::preset("lateral-demo").unwrap_err();
        assert!(matches!(err, ScenarioError::UnknownPreset { .. }));
    }

    #[test]
    fn custom_model_requires_goal_wiring() {
        let doc = r#"{
            "model": {
                "a": [[0.0, 1.0], [0.0, 0.0]],
                "b": [[0.0], [1.0]],
                "g": [[0.0], [1.0]],
                "h": [[1.0, 0.0], [0.0, 1.0]]
            }
        }"#;
        let err = load_scenario(doc).unwrap_err();
        assert!(matches!(
            err,
            ScenarioError::Invalid { field: "position_states", .. }
        ));
    }

    #[test]
    fn custom_model_full_document() {
        let doc = r#"{
            "name": "cart",
            "model": {
                "a": [[0.0, 1.0], [0.0, 0.0]],
                "b": [[0.0], [1.0]],
                "g": [[0.0], [1.0]],
                "h": [[1.0, 0.0], [0.0, 1.0]]
            },
            "dt": 0.1,
            "duration": 20.0,
            "position_states": [0],
            "x_desired": [100.0, 0.0],
            "true_noise": {"q_process": [0.01], "r_meas": [4.0, 0.25]},
            "assumed_noise": {"q_process": [0.01], "r_meas": [4.0, 0.25]},
            "seeds": [1]
        }"#;
        let s = load_scenario(doc).unwrap();
        assert_eq!(s.goal_m, vec![100.0]);
        assert_eq!(s.num_steps(), 200);
        let model = s.build_model().unwrap();
        assert_eq!(model.num_states(), 2);
    }

    #[test]
    fn derivatives_model_with_standard_height_row() {
        let doc = r#"{
            "model": {
                "derivatives": {"xu": -0.02, "zw": -0.3, "mq": -0.4, "mw": -0.01, "mde": -1.2, "zde": -0.5, "theta0": 0.0},
                "height_row": "standard"
            },
            "position_states": [4],
            "x_desired": [0.0, 0.0, 0.0, 0.0, 200.0],
            "true_noise": {"q_process": [1e-4,1e-4,1e-4,1e-4,1e-4], "r_meas": [0.01,0.01,1e-4,1e-4,25.0]},
            "assumed_noise": {"q_process": [1e-4,1e-4,1e-4,1e-4,1e-4], "r_meas": [0.01,0.01,1e-4,1e-4,25.0]}
        }"#;
        let s = load_scenario(doc).unwrap();
        let model = s.build_model().unwrap();
        // standard height row zeroes the theta coupling
        assert_eq!(model.a.get(4, 3), 0.0);
    }

    #[test]
    fn inline_model_roundtrip() {
        let doc = r#"{
            "model": {
                "a": [[0.0, 1.0], [-2.0, -3.0]],
                "b": [[0.0], [1.0]],
                "g": [[0.0], [1.0]],
                "h": [[1.0, 0.0]]
            },
            "position_states": [0],
            "x_desired": [5.0, 0.0],
            "true_noise": {"q_process": [0.01], "r_meas": [1.0]},
            "assumed_noise": {"q_process": [0.01], "r_meas": [1.0]}
        }"#;
        let s = load_scenario(doc).unwrap();
        assert!(matches!(s.model, ModelSpec::Inline { .. }));
        let reloaded = load_scenario(&save_scenario(&s)).unwrap();
        assert_eq!(s, reloaded);
    }

    #[test]
    fn goal_outside_environment_rejected() {
        let err =
            load_scenario("{\"model\": \"planar-goal\", \"goal_m\": [20000.0, 8000.0]}").unwrap_err();
        assert!(matches!(err, ScenarioError::Invalid { field: "goal_m", .. }));
    }

    #[test]
    fn speed_ordering_enforced() {
        let err = load_scenario("{\"model\": \"planar-goal\", \"speed_min_mps\": 40.0}").unwrap_err();
        assert!(matches!(
            err,
            ScenarioError::Invalid { field: "speed_avg_mps", .. }
        ));
    }
}
