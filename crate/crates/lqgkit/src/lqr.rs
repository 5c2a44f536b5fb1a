//! Optimal state-feedback synthesis: Riccati-based gain computation and the
//! quadratic cost functional.
//!
//! The control law is `u = K (x_desired - x)` with `K = R^-1 B^T P` and `P`
//! the stabilizing Riccati solution; synthesis is continuous-time, and the
//! resulting gain is applied unchanged across discrete simulations.

use crate::airframe::LinearModel;
use crate::linalg::{
    care_residual, eigenvalues, solve_care, solve_linear, LinalgError, Matrix,
};

/// A completed LQR synthesis: the weights, the Riccati solution, and the gain.
#[derive(Debug, Clone, PartialEq)]
pub struct LqrDesign {
    pub q_weight: Matrix,
    pub r_weight: Matrix,
    /// Stabilizing Riccati solution (symmetric PSD).
    pub p_solution: Matrix,
    /// State-feedback gain, `K = R^-1 B^T P`.
    pub k_gain: Matrix,
}

impl LqrDesign {
    /// Frobenius norm of the Riccati residual for this design.
    pub fn riccati_residual(&self, model: &LinearModel) -> Result<f64, LinalgError> {
        care_residual(
            &model.a,
            &model.b,
            &self.q_weight,
            &self.r_weight,
            &self.p_solution,
        )
    }
}

/// Errors from LQR synthesis.
#[derive(Debug, Clone, PartialEq)]
pub enum LqrError {
    /// Synthesis requires a continuous-time model.
    NotContinuous,
    /// The closed loop failed the final stability check.
    UnstableClosedLoop { max_real_part: f64 },
    Linalg(LinalgError),
}

impl std::fmt::Display for LqrError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LqrError::NotContinuous => write!(f, "gain synthesis requires a continuous-time model"),
            LqrError::UnstableClosedLoop { max_real_part } => write!(
                f,
                "closed loop is not Hurwitz (max eigenvalue real part {max_real_part:.3e})"
            ),
            LqrError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LqrError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            LqrError::Linalg(e) => Some(e),
            _ => None,
        }
    }
}

impl From<LinalgError> for LqrError {
    fn from(e: LinalgError) -> Self {
        LqrError::Linalg(e)
    }
}

/// Synthesizes the optimal gain for a continuous model: solves the Riccati
/// equation for `P`, forms `K = R^-1 B^T P`, and verifies the closed loop is
/// Hurwitz.
pub fn lqr_gain(model: &LinearModel, q: &Matrix, r: &Matrix) -> Result<LqrDesign, LqrError> {
    if model.is_discrete {
        return Err(LqrError::NotContinuous);
    }
    let p = solve_care(&model.a, &model.b, q, r)?;
    let k = solve_linear(r, &model.b.transpose().mat_mul(&p)?)?;
    let closed = closed_loop_matrix(model, &k)?;
    let max_re = eigenvalues(&closed)?
        .iter()
        .fold(f64::NEG_INFINITY, |m, e| m.max(e.re));
    if max_re >= 0.0 {
        return Err(LqrError::UnstableClosedLoop {
            max_real_part: max_re,
        });
    }
    Ok(LqrDesign {
        q_weight: q.clone(),
        r_weight: r.clone(),
        p_solution: p,
        k_gain: k,
    })
}

/// Rectangle-rule realization of the quadratic performance index
/// `J = 1/2 * sum (x^T Q x + u^T R u) * dt` over a sampled trajectory.
pub fn lqr_cost(
    trajectory: &[(Vec<f64>, Vec<f64>)],
    q: &Matrix,
    r: &Matrix,
    dt: f64,
) -> Result<f64, LinalgError> {
    let mut total = 0.0;
    for (x, u) in trajectory {
        total += quadratic_form(q, x)? + quadratic_form(r, u)?;
    }
    Ok(0.5 * total * dt)
}

fn quadratic_form(m: &Matrix, v: &[f64]) -> Result<f64, LinalgError> {
    let mv = m.mul_vec(v)?;
    Ok(v.iter().zip(&mv).map(|(a, b)| a * b).sum())
}

/// The closed-loop system matrix `A - B K`.
pub fn closed_loop_matrix(model: &LinearModel, k: &Matrix) -> Result<Matrix, LinalgError> {
    model.a.sub(&model.b.mat_mul(k)?)
}
