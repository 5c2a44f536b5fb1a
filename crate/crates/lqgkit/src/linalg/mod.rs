//! Dense real linear-algebra kernels used by every other module: products,
//! pivoted solves, eigenvalues, Lyapunov and Riccati equations.

mod care;
mod eig;
mod lu;
mod matrix;

pub use care::{care_residual, solve_care, solve_care_with, solve_lyapunov, CareOptions, CARE_MAX_SIZE};
pub use eig::{eigenvalues, eigenvalues_with, ComplexPair, EIG_ITERATION_CAP, EIG_MAX_SIZE};
pub use lu::{cholesky, cholesky_psd, solve_linear};
pub use matrix::Matrix;

/// Errors from the linear-algebra kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// Operand shapes do not conform for the named operation.
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Zero rows or columns.
    EmptyDimension { rows: usize, cols: usize },
    /// Data length does not match the stated dimensions.
    InvalidData { expected: usize, got: usize },
    /// A NaN or infinity at the given position.
    NonFinite { row: usize, col: usize },
    /// Matrix singular to working precision; carries the rejected pivot.
    Singular { pivot: f64 },
    /// Iteration failed to converge within the cap.
    NoConvergence { cap: usize },
    /// Riccati iteration exhausted its cap without meeting the residual target.
    CareDiverged { cap: usize, residual: f64 },
    /// Symmetry required; carries the largest deviation found.
    NotSymmetric { max_dev: f64 },
    NotPositiveDefinite,
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    /// `(A, B)` failed a stabilizability test.
    Unstabilizable { reason: String },
    /// Matrix exceeds the size this kernel supports.
    TooLarge { n: usize, max: usize },
}

impl std::fmt::Display for LinalgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinalgError::DimensionMismatch { op, expected, got } => write!(
                f,
                "{op}: dimension mismatch, expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            LinalgError::EmptyDimension { rows, cols } => {
                write!(f, "matrix dimensions must be positive, got {rows}x{cols}")
            }
            LinalgError::InvalidData { expected, got } => {
                write!(f, "data length mismatch: expected {expected}, got {got}")
            }
            LinalgError::NonFinite { row, col } => {
                write!(f, "non-finite entry at ({row}, {col})")
            }
            LinalgError::Singular { pivot } => write!(
                f,
                "matrix is singular to working precision (pivot magnitude {pivot:.3e})"
            ),
            LinalgError::NoConvergence { cap } => {
                write!(f, "eigenvalue iteration did not converge within {cap} iterations")
            }
            LinalgError::CareDiverged { cap, residual } => write!(
                f,
                "Riccati iteration exhausted {cap} iterations (best residual {residual:.3e})"
            ),
            LinalgError::NotSymmetric { max_dev } => {
                write!(f, "matrix is not symmetric (max deviation {max_dev:.3e})")
            }
            LinalgError::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            LinalgError::NotPositiveSemidefinite { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})"
            ),
            LinalgError::Unstabilizable { reason } => {
                write!(f, "stabilizability test failed: {reason}")
            }
            LinalgError::TooLarge { n, max } => {
                write!(f, "matrix size {n} exceeds the supported maximum {max}")
            }
        }
    }
}

impl std::error::Error for LinalgError {}
