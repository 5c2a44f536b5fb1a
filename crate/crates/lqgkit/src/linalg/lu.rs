//! Linear solves: LU with partial pivoting and a semidefinite-tolerant
//! Cholesky factorization.

use super::{LinalgError, Matrix};

/// Solves `A X = B` for `X` by LU factorization with partial pivoting.
///
/// `A` must be square and `B` must have matching row count; `B` may carry any
/// number of right-hand-side columns. A pivot smaller than
/// `f64::EPSILON * n * max|A|` is treated as singular and the offending pivot
/// magnitude is reported in the error.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if b.rows() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_linear",
            expected: (a.rows(), b.cols()),
            got: (b.rows(), b.cols()),
        });
    }
    let n = a.rows();
    let threshold = f64::EPSILON * n as f64 * a.max_abs();

    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // pick the largest pivot in column k
        let (mut best, mut best_row) = (lu.get(k, k).abs(), k);
        for r in (k + 1)..n {
            let v = lu.get(r, k).abs();
            if v > best {
                best = v;
                best_row = r;
            }
        }
        if best <= threshold {
            return Err(LinalgError::Singular { pivot: best });
        }
        if best_row != k {
            for c in 0..n {
                let tmp = lu.get(k, c);
                lu.set(k, c, lu.get(best_row, c));
                lu.set(best_row, c, tmp);
            }
            perm.swap(k, best_row);
        }
        let pivot = lu.get(k, k);
        for r in (k + 1)..n {
            let factor = lu.get(r, k) / pivot;
            lu.set(r, k, factor);
            for c in (k + 1)..n {
                let v = lu.get(r, c) - factor * lu.get(k, c);
                lu.set(r, c, v);
            }
        }
    }

    // forward/back substitution per right-hand-side column
    let mut x = Matrix::zeros(n, b.cols());
    let mut col = vec![0.0; n];
    for j in 0..b.cols() {
        for i in 0..n {
            col[i] = b.get(perm[i], j);
        }
        for i in 1..n {
            let mut acc = col[i];
            for k in 0..i {
                acc -= lu.get(i, k) * col[k];
            }
            col[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = col[i];
            for k in (i + 1)..n {
                acc -= lu.get(i, k) * col[k];
            }
            col[i] = acc / lu.get(i, i);
        }
        for i in 0..n {
            x.set(i, j, col[i]);
        }
    }
    Ok(x)
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(a: &Matrix) -> Result<Matrix, LinalgError> {
    cholesky_impl(a, false)
}

/// Cholesky factor of a symmetric positive *semi*definite matrix.
///
/// Pivots within rounding of zero produce a zero column in the factor, so
/// degenerate covariances (including the all-zero matrix) factor cleanly:
/// `L L^T` reproduces `A` up to the semidefinite tolerance.
pub fn cholesky_psd(a: &Matrix) -> Result<Matrix, LinalgError> {
    cholesky_impl(a, true)
}

fn cholesky_impl(a: &Matrix, allow_semidefinite: bool) -> Result<Matrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let scale = a.max_abs().max(1.0);
    let sym_tol = 1e-9 * scale;
    if !a.is_symmetric(sym_tol) {
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                dev = dev.max((a.get(i, j) - a.get(j, i)).abs());
            }
        }
        return Err(LinalgError::NotSymmetric { max_dev: dev });
    }
    let zero_tol = 1e-12 * scale;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d > zero_tol {
            let ljj = d.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let mut v = a.get(i, j);
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, v / ljj);
            }
        } else if allow_semidefinite && d > -1e-8 * scale {
            // semidefinite direction: zero column
            l.set(j, j, 0.0);
        } else if allow_semidefinite {
            return Err(LinalgError::NotPositiveSemidefinite { min_eigenvalue: d });
        } else {
            return Err(LinalgError::NotPositiveDefinite);
        }
    }
    Ok(l)
}
