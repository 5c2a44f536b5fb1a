//! Continuous algebraic Riccati equation solver.
//!
//! `solve_care` finds the symmetric positive-semidefinite `P` with
//!
//! ```text
//! A^T P + P A - P B R^-1 B^T P + Q = 0
//! ```
//!
//! by Kleinman-Newton iteration: each step solves the Lyapunov equation of the
//! current closed loop and refreshes the gain, converging quadratically once a
//! stabilizing gain is in hand. The initial stabilizing gain comes from an
//! eigenvalue-shifted Lyapunov construction: with `beta` exceeding the spectral
//! abscissa of `A`, the solution `Z` of
//! `(A + beta I) Z + Z (A + beta I)^T = 2 B B^T` yields `K0 = B^T Z^-1` with
//! `A - B K0` Hurwitz whenever `(A, B)` is controllable.

use super::{eigenvalues, solve_linear, LinalgError, Matrix};

/// Largest state dimension accepted by [`solve_care`] (the Lyapunov steps use
/// a dense n^2 x n^2 Kronecker system).
pub const CARE_MAX_SIZE: usize = 32;

/// Options for [`solve_care_with`].
#[derive(Debug, Clone, Copy)]
pub struct CareOptions {
    /// Relative residual target: converged when the Riccati residual's
    /// Frobenius norm is at most `tol * (1 + ||Q||_F)`.
    pub tol: f64,
    /// Newton iteration cap.
    pub max_iter: usize,
}

impl Default for CareOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
        }
    }
}

/// Frobenius norm of the Riccati residual `A^T P + P A - P B R^-1 B^T P + Q`.
pub fn care_residual(
    a: &Matrix,
    b: &Matrix,
    q: &Matrix,
    r: &Matrix,
    p: &Matrix,
) -> Result<f64, LinalgError> {
    let at_p = a.transpose().mat_mul(p)?;
    let p_a = p.mat_mul(a)?;
    let bt_p = b.transpose().mat_mul(p)?;
    let r_inv_bt_p = solve_linear(r, &bt_p)?;
    let quad = p.mat_mul(b)?.mat_mul(&r_inv_bt_p)?;
    Ok(at_p.add(&p_a)?.sub(&quad)?.add(q)?.frobenius_norm())
}

/// Solves the continuous Lyapunov equation `A^T X + X A + C = 0` through the
/// Kronecker-product linear system; unique when no two eigenvalues of `A` sum
/// to zero (always true for Hurwitz `A`).
pub fn solve_lyapunov(a: &Matrix, c: &Matrix) -> Result<Matrix, LinalgError> {
    let n = a.rows();
    if !a.is_square() || !c.is_square() || c.rows() != n {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_lyapunov",
            expected: (n, n),
            got: (c.rows(), c.cols()),
        });
    }
    // row-major vec: vec(M X N) = (M kron N^T) vec(X)
    // A^T X + X A = -C  =>  [(A^T kron I) + (I kron A^T)] vec(X) = vec(-C)
    let at = a.transpose();
    let mut big = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // (A^T kron I): block (i,k) is at[i][k] * I
                let v = big.get(i * n + j, k * n + j) + at.get(i, k);
                big.set(i * n + j, k * n + j, v);
                // (I kron A^T): block (i,i) is A^T
                let v = big.get(i * n + j, i * n + k) + at.get(j, k);
                big.set(i * n + j, i * n + k, v);
            }
        }
    }
    let rhs = Matrix::new(n * n, 1, c.data().iter().map(|&x| -x).collect())?;
    let x = solve_linear(&big, &rhs)?;
    Matrix::new(n, n, x.into_vec())
}

fn max_real_part(eigs: &[super::ComplexPair]) -> f64 {
    eigs.iter().fold(f64::NEG_INFINITY, |m, e| m.max(e.re))
}

fn is_hurwitz(m: &Matrix) -> Result<bool, LinalgError> {
    Ok(max_real_part(&eigenvalues(m)?) < 0.0)
}

/// Initial stabilizing gain via the shifted Lyapunov construction.
fn stabilizing_gain(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    let n = a.rows();
    let eigs = eigenvalues(a)?;
    if max_real_part(&eigs) < 0.0 {
        return Ok(Matrix::zeros(b.cols(), n));
    }
    let beta = 1.0 + eigs.iter().fold(0.0f64, |m, e| m.max(e.re.abs()));
    let shifted = a.add(&Matrix::identity(n).scale(beta))?;
    let bbt = b.mat_mul(&b.transpose())?.scale(2.0);
    // (A + beta I) Z + Z (A + beta I)^T = 2 B B^T, via the transposed form
    let z = solve_lyapunov(&shifted.transpose(), &bbt.scale(-1.0))?.symmetrized();

    // K0 = B^T Z^-1; regularize Z if the pair is stabilizable but not
    // controllable (Z singular), then verify the result actually stabilizes.
    let scale = z.max_abs().max(1.0);
    for reg in [0.0, 1e-10 * scale, 1e-6 * scale] {
        let z_reg = if reg == 0.0 {
            z.clone()
        } else {
            z.add(&Matrix::identity(n).scale(reg))?
        };
        let x = match solve_linear(&z_reg, b) {
            Ok(x) => x,
            Err(LinalgError::Singular { .. }) => continue,
            Err(e) => return Err(e),
        };
        let k0 = x.transpose();
        if is_hurwitz(&a.sub(&b.mat_mul(&k0)?)?)? {
            return Ok(k0);
        }
    }
    Err(LinalgError::Unstabilizable {
        reason: "no stabilizing initial gain found; (A, B) appears unstabilizable".into(),
    })
}

/// Solves the CARE with default tolerances. See [`solve_care_with`].
pub fn solve_care(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix) -> Result<Matrix, LinalgError> {
    solve_care_with(a, b, q, r, CareOptions::default())
}

/// Solves the CARE for the stabilizing `P`.
///
/// Preconditions: `A` square (n <= [`CARE_MAX_SIZE`]), `B` conforming,
/// `Q` symmetric PSD, `R` symmetric PD, `(A, B)` stabilizable. The returned
/// `P` is symmetric with Riccati residual at most `tol * (1 + ||Q||_F)`.
pub fn solve_care_with(
    a: &Matrix,
    b: &Matrix,
    q: &Matrix,
    r: &Matrix,
    opts: CareOptions,
) -> Result<Matrix, LinalgError> {
    let n = a.rows();
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if n > CARE_MAX_SIZE {
        return Err(LinalgError::TooLarge {
            n,
            max: CARE_MAX_SIZE,
        });
    }
    if b.rows() != n {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_care",
            expected: (n, b.cols()),
            got: (b.rows(), b.cols()),
        });
    }
    let m = b.cols();
    if q.rows() != n || q.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_care",
            expected: (n, n),
            got: (q.rows(), q.cols()),
        });
    }
    if r.rows() != m || r.cols() != m {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_care",
            expected: (m, m),
            got: (r.rows(), r.cols()),
        });
    }
    let q_scale = q.max_abs().max(1.0);
    if !q.is_symmetric(1e-9 * q_scale) {
        return Err(LinalgError::NotSymmetric {
            max_dev: q.sub(&q.transpose())?.max_abs(),
        });
    }
    let q_min = eigenvalues(q)?.iter().fold(f64::INFINITY, |m, e| m.min(e.re));
    if q_min < -1e-9 * q_scale {
        return Err(LinalgError::NotPositiveSemidefinite {
            min_eigenvalue: q_min,
        });
    }
    // R must be PD; Cholesky doubles as the check
    super::cholesky(r)?;

    let k0 = stabilizing_gain(a, b)?;
    let residual_target = opts.tol * (1.0 + q.frobenius_norm());
    let accept_target = 1e-8 * (1.0 + q.frobenius_norm());

    // first Newton step in the standard Kleinman form:
    // (A - B K0)^T P + P (A - B K0) = -(Q + K0^T R K0)
    let a_closed = a.sub(&b.mat_mul(&k0)?)?;
    let cost = q.add(&k0.transpose().mat_mul(r)?.mat_mul(&k0)?)?;
    let mut p = solve_lyapunov(&a_closed, &cost)?.symmetrized();

    // subsequent steps in defect-correction form: the Lyapunov right-hand
    // side is the small residual matrix, so the absolute error of each
    // correction shrinks with it instead of scaling with ||Q + K^T R K||
    let mut best: Option<(f64, Matrix)> = None;
    for _ in 0..opts.max_iter {
        let k = solve_linear(r, &b.transpose().mat_mul(&p)?)?;
        let a_closed = a.sub(&b.mat_mul(&k)?)?;
        if !is_hurwitz(&a_closed)? {
            return Err(LinalgError::Unstabilizable {
                reason: "Newton iterate lost closed-loop stability".into(),
            });
        }
        let res_mat = a
            .transpose()
            .mat_mul(&p)?
            .add(&p.mat_mul(a)?)?
            .sub(&k.transpose().mat_mul(r)?.mat_mul(&k)?)?
            .add(q)?;
        let res = res_mat.frobenius_norm();
        if best.as_ref().is_none_or(|(r0, _)| res < *r0) {
            best = Some((res, p.clone()));
        }
        if res <= residual_target {
            return Ok(p);
        }
        let delta = solve_lyapunov(&a_closed, &res_mat)?;
        p = p.add(&delta)?.symmetrized();
    }

    match best {
        Some((res, p)) if res <= accept_target => Ok(p),
        Some((res, _)) => Err(LinalgError::CareDiverged {
            cap: opts.max_iter,
            residual: res,
        }),
        None => Err(LinalgError::CareDiverged {
            cap: opts.max_iter,
            residual: f64::INFINITY,
        }),
    }
}
