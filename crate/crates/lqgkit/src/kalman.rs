//! Discrete Kalman filter with controller-coupled extrapolation.
//!
//! The prediction step folds the state-feedback law into the extrapolation:
//!
//! ```text
//! x-(k) = A x+(k-1) + B K_lqr (x_desired - x+(k-1))
//! P-(k) = A P+ A^T + B D_u B^T + G Q G^T
//! ```
//!
//! followed by the standard innovation/gain/update recursion
//!
//! ```text
//! delta = z - H x-            K = P- H^T (H P- H^T + R)^-1
//! x+ = x- + K delta           P+ = (I - K H) P-
//! ```
//!
//! `P+` is symmetrized after the open-form update; the Joseph-form update is
//! available behind [`FilterConfig::joseph_update`]. Operations are pure:
//! each takes a state and returns the successor, so a filter instance is
//! single-writer while distinct instances run freely in parallel.

use crate::airframe::LinearModel;
use crate::linalg::{cholesky, cholesky_psd, solve_linear, LinalgError, Matrix};

/// Process, measurement, and control-uncertainty covariances.
///
/// `q_process` and `d_control` are validated symmetric PSD, `r_meas`
/// symmetric PSD at construction; a filter additionally requires `r_meas`
/// positive definite (see [`FilterConfig::new`]). Noise drawn from these
/// covariances is white: independent across steps and zero-mean.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    q_process: Matrix,
    r_meas: Matrix,
    d_control: Matrix,
}

impl NoiseSpec {
    pub fn new(q_process: Matrix, r_meas: Matrix, d_control: Matrix) -> Result<Self, FilterError> {
        for (name, m) in [
            ("q_process", &q_process),
            ("r_meas", &r_meas),
            ("d_control", &d_control),
        ] {
            let tol = 1e-12 * m.max_abs().max(1.0);
            if !m.is_symmetric(tol) {
                return Err(FilterError::BadCovariance {
                    what: format!("{name} is not symmetric within 1e-12"),
                });
            }
            if let Err(e) = cholesky_psd(m) {
                return Err(FilterError::BadCovariance {
                    what: format!("{name} is not positive semidefinite ({e})"),
                });
            }
        }
        Ok(Self {
            q_process,
            r_meas,
            d_control,
        })
    }

    /// Diagonal covariances, the common case in scenario files.
    pub fn from_diagonals(q: &[f64], r: &[f64], d: &[f64]) -> Result<Self, FilterError> {
        Self::new(
            Matrix::from_diag(q),
            Matrix::from_diag(r),
            Matrix::from_diag(d),
        )
    }

    pub fn q_process(&self) -> &Matrix {
        &self.q_process
    }

    pub fn r_meas(&self) -> &Matrix {
        &self.r_meas
    }

    pub fn d_control(&self) -> &Matrix {
        &self.d_control
    }
}

/// The filter's evolving record: estimate, covariance, step index, and the
/// innovation/gain diagnostics of the most recent update.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    pub x_est: Vec<f64>,
    pub p_cov: Matrix,
    pub k_step: usize,
    pub last_innovation: Option<Vec<f64>>,
    pub last_gain: Option<Matrix>,
    /// True after a predict, false after an update (or at initialization).
    pub is_prior: bool,
}

/// Static filter wiring: the discrete model, the assumed noise, the coupled
/// controller gain, and the setpoint it regulates toward.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub model: LinearModel,
    pub noise: NoiseSpec,
    pub k_lqr: Matrix,
    pub x_desired: Vec<f64>,
    /// Use the Joseph-form covariance update instead of the open form.
    pub joseph_update: bool,
}

impl FilterConfig {
    pub fn new(
        model: LinearModel,
        noise: NoiseSpec,
        k_lqr: Matrix,
        x_desired: Vec<f64>,
    ) -> Result<Self, FilterError> {
        if !model.is_discrete {
            return Err(FilterError::NotDiscrete);
        }
        let (n, m, p, q) = (
            model.num_states(),
            model.num_inputs(),
            model.num_noise(),
            model.num_outputs(),
        );
        if noise.q_process.rows() != p {
            return Err(FilterError::Dimension {
                what: format!(
                    "q_process is {}x{}, model has {p} noise channels",
                    noise.q_process.rows(),
                    noise.q_process.cols()
                ),
            });
        }
        if noise.r_meas.rows() != q {
            return Err(FilterError::Dimension {
                what: format!(
                    "r_meas is {}x{}, model has {q} outputs",
                    noise.r_meas.rows(),
                    noise.r_meas.cols()
                ),
            });
        }
        if noise.d_control.rows() != m {
            return Err(FilterError::Dimension {
                what: format!(
                    "d_control is {}x{}, model has {m} inputs",
                    noise.d_control.rows(),
                    noise.d_control.cols()
                ),
            });
        }
        if k_lqr.rows() != m || k_lqr.cols() != n {
            return Err(FilterError::Dimension {
                what: format!("k_lqr is {}x{}, expected {m}x{n}", k_lqr.rows(), k_lqr.cols()),
            });
        }
        if x_desired.len() != n {
            return Err(FilterError::Dimension {
                what: format!("x_desired has {} entries, expected {n}", x_desired.len()),
            });
        }
        // the innovation covariance H P- H^T + R must be invertible; PD R
        // guarantees it for any PSD P-
        if cholesky(&noise.r_meas).is_err() {
            return Err(FilterError::BadCovariance {
                what: "assumed r_meas must be positive definite".into(),
            });
        }
        Ok(Self {
            model,
            noise,
            k_lqr,
            x_desired,
            joseph_update: false,
        })
    }
}

/// Errors from filter construction and stepping.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterError {
    /// The filter runs on discrete models only.
    NotDiscrete,
    Dimension { what: String },
    BadCovariance { what: String },
    /// Operation applied to a state in the wrong phase (priors feed updates,
    /// posteriors feed predictions).
    Phase { expected_prior: bool },
    Linalg(LinalgError),
}

impl std::fmt::Display for FilterError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FilterError::NotDiscrete => write!(f, "filter requires a discrete-time model"),
            FilterError::Dimension { what } => write!(f, "dimension mismatch: {what}"),
            FilterError::BadCovariance { what } => write!(f, "bad covariance: {what}"),
            FilterError::Phase { expected_prior } => {
                if *expected_prior {
                    write!(f, "operation requires an a-priori state (run kf_predict first)")
                } else {
                    write!(f, "operation requires an a-posteriori or initial state")
                }
            }
            FilterError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FilterError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            FilterError::Linalg(e) => Some(e),
            _ => None,
        }
    }
}

impl From<LinalgError> for FilterError {
    fn from(e: LinalgError) -> Self {
        FilterError::Linalg(e)
    }
}

/// Initial filter state at step zero.
pub fn kf_init(cfg: &FilterConfig, x0: &[f64], p0: &Matrix) -> Result<FilterState, FilterError> {
    let n = cfg.model.num_states();
    if x0.len() != n || p0.rows() != n || p0.cols() != n {
        return Err(FilterError::Dimension {
            what: format!(
                "x0 has {} entries and p0 is {}x{}, expected {n}",
                x0.len(),
                p0.rows(),
                p0.cols()
            ),
        });
    }
    let tol = 1e-10 * (1.0 + p0.max_abs());
    if !p0.is_symmetric(tol) {
        return Err(FilterError::BadCovariance {
            what: "p0 is not symmetric".into(),
        });
    }
    if let Err(e) = cholesky_psd(p0) {
        return Err(FilterError::BadCovariance {
            what: format!("p0 is not positive semidefinite ({e})"),
        });
    }
    Ok(FilterState {
        x_est: x0.to_vec(),
        p_cov: p0.clone(),
        k_step: 0,
        last_innovation: None,
        last_gain: None,
        is_prior: false,
    })
}

/// Extrapolation: propagates the estimate through the model with the coupled
/// control term and inflates the covariance by the control and process noise.
pub fn kf_predict(s: &FilterState, cfg: &FilterConfig) -> Result<FilterState, FilterError> {
    if s.is_prior {
        return Err(FilterError::Phase {
            expected_prior: false,
        });
    }
    let model = &cfg.model;
    let err: Vec<f64> = cfg
        .x_desired
        .iter()
        .zip(&s.x_est)
        .map(|(d, x)| d - x)
        .collect();
    let u = cfg.k_lqr.mul_vec(&err)?;
    let ax = model.a.mul_vec(&s.x_est)?;
    let bu = model.b.mul_vec(&u)?;
    let x_minus: Vec<f64> = ax.iter().zip(&bu).map(|(a, b)| a + b).collect();

    let apa = model
        .a
        .mat_mul(&s.p_cov)?
        .mat_mul(&model.a.transpose())?;
    let bdb = model
        .b
        .mat_mul(cfg.noise.d_control())?
        .mat_mul(&model.b.transpose())?;
    let gqg = model
        .g_noise
        .mat_mul(cfg.noise.q_process())?
        .mat_mul(&model.g_noise.transpose())?;
    let p_minus = apa.add(&bdb)?.add(&gqg)?;

    Ok(FilterState {
        x_est: x_minus,
        p_cov: p_minus,
        k_step: s.k_step,
        last_innovation: s.last_innovation.clone(),
        last_gain: s.last_gain.clone(),
        is_prior: true,
    })
}

/// Innovation of a measurement against an a-priori state: `z - H x-`.
pub fn kf_innovation(
    s: &FilterState,
    z: &[f64],
    cfg: &FilterConfig,
) -> Result<Vec<f64>, FilterError> {
    if !s.is_prior {
        return Err(FilterError::Phase {
            expected_prior: true,
        });
    }
    if z.len() != cfg.model.num_outputs() {
        return Err(FilterError::Dimension {
            what: format!(
                "measurement has {} entries, expected {}",
                z.len(),
                cfg.model.num_outputs()
            ),
        });
    }
    let hx = cfg.model.h_meas.mul_vec(&s.x_est)?;
    Ok(z.iter().zip(&hx).map(|(zi, hi)| zi - hi).collect())
}

/// Filter gain `K = P- H^T (H P- H^T + R)^-1`, computed by solving the
/// transposed system rather than forming the inverse.
pub fn kf_gain(s: &FilterState, cfg: &FilterConfig) -> Result<Matrix, FilterError> {
    if !s.is_prior {
        return Err(FilterError::Phase {
            expected_prior: true,
        });
    }
    let h = &cfg.model.h_meas;
    let hp = h.mat_mul(&s.p_cov)?;
    let innov_cov = hp.mat_mul(&h.transpose())?.add(cfg.noise.r_meas())?;
    // S K^T = H P-  (S symmetric)
    let kt = solve_linear(&innov_cov, &hp)?;
    Ok(kt.transpose())
}

/// Measurement update: folds one innovation into the estimate and contracts
/// the covariance, then symmetrizes it.
pub fn kf_update(s: &FilterState, z: &[f64], cfg: &FilterConfig) -> Result<FilterState, FilterError> {
    let delta = kf_innovation(s, z, cfg)?;
    let gain = kf_gain(s, cfg)?;
    let correction = gain.mul_vec(&delta)?;
    let x_plus: Vec<f64> = s
        .x_est
        .iter()
        .zip(&correction)
        .map(|(x, c)| x + c)
        .collect();

    let n = cfg.model.num_states();
    let i_kh = Matrix::identity(n).sub(&gain.mat_mul(&cfg.model.h_meas)?)?;
    let p_plus = if cfg.joseph_update {
        let krk = gain
            .mat_mul(cfg.noise.r_meas())?
            .mat_mul(&gain.transpose())?;
        i_kh.mat_mul(&s.p_cov)?
            .mat_mul(&i_kh.transpose())?
            .add(&krk)?
    } else {
        i_kh.mat_mul(&s.p_cov)?
    };

    Ok(FilterState {
        x_est: x_plus,
        p_cov: p_plus.symmetrized(),
        k_step: s.k_step + 1,
        last_innovation: Some(delta),
        last_gain: Some(gain),
        is_prior: false,
    })
}

/// One full cycle: exactly `kf_update(kf_predict(s), z)`.
pub fn kf_step(s: &FilterState, z: &[f64], cfg: &FilterConfig) -> Result<FilterState, FilterError> {
    kf_update(&kf_predict(s, cfg)?, z, cfg)
}
