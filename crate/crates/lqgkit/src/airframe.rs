//! Longitudinal linear vehicle model: construction from stability
//! derivatives, Euler discretization, and stability analysis.
//!
//! The state vector is `[u w q theta h]`: forward speed, vertical speed,
//! pitch rate, pitch angle, height. Controls are elevator deflection and
//! throttle setting.

use crate::linalg::{eigenvalues, ComplexPair, LinalgError, Matrix};

/// Number of longitudinal states.
pub const LONGITUDINAL_STATES: usize = 5;

/// Largest system accepted by [`characteristic_polynomial`].
pub const CHARPOLY_MAX_SIZE: usize = 8;

/// Typed view of a longitudinal state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    /// Forward speed (m/s).
    pub u: f64,
    /// Vertical speed (m/s).
    pub w: f64,
    /// Pitch rate (rad/s).
    pub q: f64,
    /// Pitch angle (rad), wrapped to (-pi, pi].
    pub theta: f64,
    /// Height above ground (m).
    pub h: f64,
}

impl StateVector {
    /// Builds the typed view from a raw 5-vector, wrapping theta.
    pub fn from_slice(x: &[f64]) -> Self {
        assert_eq!(x.len(), LONGITUDINAL_STATES, "longitudinal state has 5 entries");
        Self {
            u: x[0],
            w: x[1],
            q: x[2],
            theta: wrap_angle(x[3]),
            h: x[4],
        }
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.u, self.w, self.q, self.theta, self.h]
    }
}

/// Elevator deflection (rad) and throttle setting (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInput {
    pub delta_e: f64,
    pub delta_t: f64,
}

impl ControlInput {
    /// Input vector in the order the longitudinal `B` matrix expects.
    pub fn to_vec(self) -> Vec<f64> {
        vec![self.delta_e, self.delta_t]
    }
}

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = x.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// Dimensional stability and control derivatives of the longitudinal model,
/// plus gravity and the trim pitch angle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityDerivatives {
    pub xu: f64,
    pub xw: f64,
    pub xq: f64,
    pub zu: f64,
    pub zw: f64,
    pub zq: f64,
    pub mu: f64,
    pub mw: f64,
    pub mq: f64,
    pub xde: f64,
    pub xdt: f64,
    pub zde: f64,
    pub mde: f64,
    /// Gravity (m/s^2).
    pub g: f64,
    /// Trim pitch angle (rad), frozen at build time.
    pub theta0: f64,
}

impl Default for StabilityDerivatives {
    fn default() -> Self {
        Self {
            xu: 0.0,
            xw: 0.0,
            xq: 0.0,
            zu: 0.0,
            zw: 0.0,
            zq: 0.0,
            mu: 0.0,
            mw: 0.0,
            mq: 0.0,
            xde: 0.0,
            xdt: 0.0,
            zde: 0.0,
            mde: 0.0,
            g: 9.81,
            theta0: 0.0,
        }
    }
}

/// Which height equation the fifth model row realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeightRow {
    /// `h_dot = -u sin(theta0) - w cos(theta0) + q*0 + theta` — the row as
    /// printed in the source model.
    #[default]
    AsPrinted,
    /// `h_dot = u sin(theta0) - w cos(theta0)` — the conventional climb-rate
    /// kinematics.
    Standard,
}

/// A linear state-space model with separate process-noise and measurement
/// maps:
///
/// ```text
/// x_dot = A x + B u + G w        (continuous)
/// x+    = A x + B u + G w        (discrete)
/// y     = H x + v
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: Matrix,
    pub b: Matrix,
    pub g_noise: Matrix,
    pub h_meas: Matrix,
    pub is_discrete: bool,
    /// Sampling interval in seconds; present iff discrete.
    pub dt: Option<f64>,
}

impl LinearModel {
    /// Continuous-time model; validates dimension consistency.
    pub fn continuous(
        a: Matrix,
        b: Matrix,
        g_noise: Matrix,
        h_meas: Matrix,
    ) -> Result<Self, ModelError> {
        if !a.is_square() {
            return Err(ModelError::Linalg(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            }));
        }
        let n = a.rows();
        if b.rows() != n {
            return Err(ModelError::Shape {
                what: "B must have one row per state",
            });
        }
        if g_noise.rows() != n {
            return Err(ModelError::Shape {
                what: "G must have one row per state",
            });
        }
        if h_meas.cols() != n {
            return Err(ModelError::Shape {
                what: "H must have one column per state",
            });
        }
        Ok(Self {
            a,
            b,
            g_noise,
            h_meas,
            is_discrete: false,
            dt: None,
        })
    }

    /// State dimension.
    pub fn num_states(&self) -> usize {
        self.a.rows()
    }

    /// Control dimension.
    pub fn num_inputs(&self) -> usize {
        self.b.cols()
    }

    /// Process-noise dimension.
    pub fn num_noise(&self) -> usize {
        self.g_noise.cols()
    }

    /// Measurement dimension.
    pub fn num_outputs(&self) -> usize {
        self.h_meas.rows()
    }
}

/// Errors from model construction and analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// Discretization asked of an already-discrete model.
    AlreadyDiscrete,
    /// An operation required a continuous-time model.
    NotContinuous,
    /// Nonpositive time step.
    NonPositiveDt { dt: f64 },
    /// A derivative, gravity, or trim value violates its invariant.
    BadDerivatives { what: &'static str },
    /// Matrix shapes inconsistent for a model.
    Shape { what: &'static str },
    /// System too large for the analysis routine.
    TooLarge { n: usize, max: usize },
    Linalg(LinalgError),
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelError::AlreadyDiscrete => write!(f, "model is already discrete"),
            ModelError::NotContinuous => write!(f, "operation requires a continuous-time model"),
            ModelError::NonPositiveDt { dt } => write!(f, "time step must be positive, got {dt}"),
            ModelError::BadDerivatives { what } => write!(f, "invalid derivatives: {what}"),
            ModelError::Shape { what } => write!(f, "inconsistent model shapes: {what}"),
            ModelError::TooLarge { n, max } => {
                write!(f, "system size {n} exceeds the supported maximum {max}")
            }
            ModelError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ModelError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ModelError::Linalg(e) => Some(e),
            _ => None,
        }
    }
}

impl From<LinalgError> for ModelError {
    fn from(e: LinalgError) -> Self {
        ModelError::Linalg(e)
    }
}

/// Builds the continuous longitudinal model from stability derivatives with
/// the as-printed height row.
pub fn build_longitudinal_model(d: &StabilityDerivatives) -> Result<LinearModel, ModelError> {
    build_longitudinal_model_with(d, HeightRow::AsPrinted)
}

/// Builds the continuous longitudinal model, choosing the height-row variant.
///
/// Rows: X-force, Z-force, pitch moment, `theta_dot = q`, and the height
/// kinematics. `H` and `G` default to the 5x5 identity; replace them on the
/// returned model for other sensor or noise layouts.
pub fn build_longitudinal_model_with(
    d: &StabilityDerivatives,
    height_row: HeightRow,
) -> Result<LinearModel, ModelError> {
    let fields = [
        d.xu, d.xw, d.xq, d.zu, d.zw, d.zq, d.mu, d.mw, d.mq, d.xde, d.xdt, d.zde, d.mde, d.g,
        d.theta0,
    ];
    if fields.iter().any(|x| !x.is_finite()) {
        return Err(ModelError::BadDerivatives {
            what: "all derivatives must be finite",
        });
    }
    if d.g <= 0.0 {
        return Err(ModelError::BadDerivatives {
            what: "gravity must be positive",
        });
    }
    let (sin_t, cos_t) = (d.theta0.sin(), d.theta0.cos());
    let h_row: [f64; 5] = match height_row {
        HeightRow::AsPrinted => [-sin_t, -cos_t, 0.0, 1.0, 0.0],
        HeightRow::Standard => [sin_t, -cos_t, 0.0, 0.0, 0.0],
    };
    let a = Matrix::from_rows(&[
        &[d.xu, d.xw, d.xq, -d.g * cos_t, 0.0],
        &[d.zu, d.zw, d.zq, -d.g * sin_t, 0.0],
        &[d.mu, d.mw, d.mq, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0, 0.0],
        &h_row,
    ]);
    let b = Matrix::from_rows(&[
        &[d.xde, d.xdt],
        &[d.zde, 0.0],
        &[d.mde, 0.0],
        &[0.0, 0.0],
        &[0.0, 0.0],
    ]);
    LinearModel::continuous(
        a,
        b,
        Matrix::identity(LONGITUDINAL_STATES),
        Matrix::identity(LONGITUDINAL_STATES),
    )
}

// Quadratic factors of the demonstration model's flight-core spectrum.
const SHORT_PERIOD: (f64, f64) = (15.043, 78.0719);
const PHUGOID: (f64, f64) = (0.587, 1.1174);

fn factor_roots((b, c): (f64, f64)) -> (f64, f64) {
    let re = -b / 2.0;
    (re, (c - re * re).sqrt())
}

/// The shipped demonstration model: a 4-state flight core in real block-modal
/// form whose spectrum is the short-period pair `-7.5215 +/- 4.6367i` and the
/// phugoid pair `-0.2935 +/- 1.0155i`, plus the height row at zero trim
/// pitch. The input matrix is a fixed nonzero pattern chosen so the pair
/// `(A, B)` is controllable (checked at build time).
pub fn longitudinal_demo_model() -> LinearModel {
    let (sp_re, sp_im) = factor_roots(SHORT_PERIOD);
    let (ph_re, ph_im) = factor_roots(PHUGOID);
    let a = Matrix::from_rows(&[
        &[sp_re, sp_im, 0.0, 0.0, 0.0],
        &[-sp_im, sp_re, 0.0, 0.0, 0.0],
        &[0.0, 0.0, ph_re, ph_im, 0.0],
        &[0.0, 0.0, -ph_im, ph_re, 0.0],
        &[0.0, -1.0, 0.0, 1.0, 0.0],
    ]);
    let b = Matrix::from_rows(&[
        &[0.4, 0.1],
        &[-0.3, 0.05],
        &[1.0, 0.0],
        &[0.2, 0.0],
        &[0.0, 0.0],
    ]);
    let model = LinearModel::continuous(
        a,
        b,
        Matrix::identity(LONGITUDINAL_STATES),
        Matrix::identity(LONGITUDINAL_STATES),
    )
    .expect("demo model shapes are fixed");
    assert_eq!(
        controllability_rank(&model),
        LONGITUDINAL_STATES,
        "demo model must be controllable"
    );
    model
}

/// Rank of the controllability matrix `[B, AB, ..., A^(n-1) B]`.
pub fn controllability_rank(model: &LinearModel) -> usize {
    let n = model.num_states();
    let m = model.num_inputs();
    let mut ctrb = Matrix::zeros(n, n * m);
    let mut block = model.b.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..m {
                ctrb.set(i, k * m + j, block.get(i, j));
            }
        }
        if k + 1 < n {
            block = model.a.mat_mul(&block).expect("conforming");
        }
    }
    ctrb.rank(1e-9)
}

/// Forward-Euler discretization: `A_d = I + dt A`, `B_d = dt B`,
/// `G_d = dt G`, `H` unchanged.
pub fn euler_discretize(model: &LinearModel, dt: f64) -> Result<LinearModel, ModelError> {
    if model.is_discrete {
        return Err(ModelError::AlreadyDiscrete);
    }
    if !(dt > 0.0) {
        return Err(ModelError::NonPositiveDt { dt });
    }
    let n = model.num_states();
    let a_d = Matrix::identity(n).add(&model.a.scale(dt))?;
    Ok(LinearModel {
        a: a_d,
        b: model.b.scale(dt),
        g_noise: model.g_noise.scale(dt),
        h_meas: model.h_meas.clone(),
        is_discrete: true,
        dt: Some(dt),
    })
}

/// Monic characteristic polynomial of the system matrix, coefficients in
/// descending degree, via the Faddeev-LeVerrier recurrence.
pub fn characteristic_polynomial(model: &LinearModel) -> Result<Vec<f64>, ModelError> {
    let n = model.num_states();
    if n > CHARPOLY_MAX_SIZE {
        return Err(ModelError::TooLarge {
            n,
            max: CHARPOLY_MAX_SIZE,
        });
    }
    let a = &model.a;
    let mut coeffs = vec![1.0];
    let mut m = Matrix::identity(n);
    let mut c_prev = 1.0;
    for k in 1..=n {
        if k > 1 {
            m = a.mat_mul(&m)?.add(&Matrix::identity(n).scale(c_prev))?;
        }
        let am = a.mat_mul(&m)?;
        let c_k = -am.trace() / k as f64;
        coeffs.push(c_k);
        c_prev = c_k;
    }
    Ok(coeffs)
}

/// Verdict attached to a spectrum: strict stability under the model's time
/// convention.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub roots: Vec<ComplexPair>,
    /// True iff every eigenvalue satisfies the strict stability test
    /// (negative real part for continuous models, magnitude below one for
    /// discrete models).
    pub stable: bool,
}

/// Eigenvalues of the system matrix with a stability verdict.
pub fn stability_roots(model: &LinearModel) -> Result<StabilityReport, ModelError> {
    let roots = eigenvalues(&model.a)?;
    let stable = if model.is_discrete {
        roots.iter().all(|r| r.abs() < 1.0)
    } else {
        roots.iter().all(|r| r.re < 0.0)
    };
    Ok(StabilityReport { roots, stable })
}

/// States no other state depends on: their columns of `A` are identically
/// zero, so each contributes one structural zero eigenvalue (continuous) and
/// the remaining spectrum is exactly that of the reduced matrix. The height
/// state of the longitudinal model is the canonical example.
pub fn output_only_states(a: &Matrix) -> Vec<usize> {
    (0..a.cols())
        .filter(|&j| (0..a.rows()).all(|i| a.get(i, j) == 0.0))
        .collect()
}

/// The model with its output-only states removed, if any: the block of `A`
/// actually driving the dynamics, with matching rows of `B`. Returns `None`
/// when no state qualifies or all do.
pub fn dynamic_core(model: &LinearModel) -> Option<LinearModel> {
    let drop = output_only_states(&model.a);
    if drop.is_empty() || drop.len() == model.num_states() {
        return None;
    }
    let keep: Vec<usize> = (0..model.num_states())
        .filter(|i| !drop.contains(i))
        .collect();
    let k = keep.len();
    let mut a = Matrix::zeros(k, k);
    for (ri, &i) in keep.iter().enumerate() {
        for (ci, &j) in keep.iter().enumerate() {
            a.set(ri, ci, model.a.get(i, j));
        }
    }
    let mut b = Matrix::zeros(k, model.num_inputs());
    for (ri, &i) in keep.iter().enumerate() {
        for j in 0..model.num_inputs() {
            b.set(ri, j, model.b.get(i, j));
        }
    }
    Some(LinearModel {
        a,
        b,
        g_noise: Matrix::identity(k),
        h_meas: Matrix::identity(k),
        is_discrete: model.is_discrete,
        dt: model.dt,
    })
}
