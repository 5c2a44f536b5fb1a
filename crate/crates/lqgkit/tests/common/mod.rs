//! Shared test-only machinery: an independent Riccati oracle built on the
//! Hamiltonian eigendecomposition (complex inverse iteration + complex
//! solves), plus deterministic random-system generators.

use lqgkit::linalg::{eigenvalues, Matrix};
use num_complex::Complex64;

/// Deterministic splitmix-style stream for test data.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::new(rows, cols, (0..rows * cols).map(|_| self.next_f64()).collect()).unwrap()
    }

    pub fn spd(&mut self, n: usize) -> Matrix {
        let g = self.matrix(n, n);
        g.transpose()
            .mat_mul(&g)
            .unwrap()
            .add(&Matrix::identity(n).scale(0.5 * n as f64))
            .unwrap()
    }
}

/// Complex Gaussian elimination with partial pivoting: solves `A x = b`.
fn complex_solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let (pivot_row, _) = (k..n)
            .map(|r| (r, m[r][k].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        m.swap(k, pivot_row);
        rhs.swap(k, pivot_row);
        let pivot = m[k][k];
        let pivot = if pivot.norm() == 0.0 {
            Complex64::new(1e-300, 0.0)
        } else {
            pivot
        };
        for r in (k + 1)..n {
            let f = m[r][k] / pivot;
            for c in k..n {
                let val = m[r][c] - f * m[k][c];
                m[r][c] = val;
            }
            let pivot_rhs = rhs[k];
            rhs[r] -= f * pivot_rhs;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= m[i][j] * x[j];
        }
        let d = m[i][i];
        let d = if d.norm() == 0.0 {
            Complex64::new(1e-300, 0.0)
        } else {
            d
        };
        x[i] = acc / d;
    }
    x
}

/// Independent CARE oracle: assemble the Hamiltonian
/// `[[A, -B R^-1 B^T], [-Q, -A^T]]`, take its stable eigenvalues, recover
/// the associated eigenvectors by complex inverse iteration, and return
/// `P = Re(Y X^-1)` from the stacked stable subspace basis `[X; Y]`.
pub fn care_hamiltonian_oracle(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix) -> Matrix {
    let n = a.rows();
    // R^-1 B^T by real Gaussian elimination through the library solver would
    // couple the routes; do it in complex arithmetic here instead.
    let rc: Vec<Vec<Complex64>> = (0..r.rows())
        .map(|i| (0..r.cols()).map(|j| Complex64::new(r.get(i, j), 0.0)).collect())
        .collect();
    let mut r_inv_bt = vec![vec![Complex64::new(0.0, 0.0); n]; b.cols()];
    for col in 0..n {
        let rhs: Vec<Complex64> = (0..b.cols()).map(|i| Complex64::new(b.get(col, i), 0.0)).collect();
        let x = complex_solve(&rc, &rhs);
        for (i, v) in x.iter().enumerate() {
            r_inv_bt[i][col] = *v;
        }
    }
    // Hamiltonian, as complex entries
    let dim = 2 * n;
    let mut ham = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..n {
        for j in 0..n {
            ham[i][j] = Complex64::new(a.get(i, j), 0.0);
            // -B R^-1 B^T
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..b.cols() {
                acc += Complex64::new(b.get(i, k), 0.0) * r_inv_bt[k][j];
            }
            ham[i][n + j] = -acc;
            ham[n + i][j] = Complex64::new(-q.get(i, j), 0.0);
            ham[n + i][n + j] = Complex64::new(-a.get(j, i), 0.0);
        }
    }
    // real mirror for the eigenvalue call
    let mut ham_real = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            ham_real.set(i, j, ham[i][j].re);
        }
    }
    let stable: Vec<Complex64> = eigenvalues(&ham_real)
        .unwrap()
        .into_iter()
        .filter(|e| e.re < 0.0)
        .map(|e| Complex64::new(e.re, e.im))
        .collect();
    assert_eq!(stable.len(), n, "Hamiltonian must split into n stable eigenvalues");

    // inverse iteration per stable eigenvalue
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (idx, lambda) in stable.iter().enumerate() {
        let mut shifted = ham.clone();
        for d in 0..dim {
            shifted[d][d] -= *lambda;
        }
        let mut v: Vec<Complex64> = (0..dim)
            .map(|k| Complex64::new(1.0 + 0.37 * ((k + idx) as f64), 0.11 * (k as f64 + 1.0)))
            .collect();
        for _ in 0..3 {
            let w = complex_solve(&shifted, &v);
            let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v = w.into_iter().map(|c| c / norm).collect();
        }
        basis.push(v);
    }

    // P = Re(Y X^-1): solve X^T Z = Y^T column by column, P = Re(Z^T).
    // X stacks the top halves as columns, so X^T[i][j] = basis[i][j].
    let xt: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| basis[i][j]).collect())
        .collect();
    let mut p = Matrix::zeros(n, n);
    for col in 0..n {
        let rhs: Vec<Complex64> = (0..n).map(|j| basis[j][n + col]).collect();
        let z = complex_solve(&xt, &rhs);
        for (row, v) in z.iter().enumerate() {
            // Z[row][col] = (Y X^-1)[col][row]
            p.set(col, row, v.re);
        }
    }
    p.symmetrized()
}

#[allow(dead_code)]
pub fn max_real_eig(m: &Matrix) -> f64 {
    eigenvalues(m)
        .unwrap()
        .iter()
        .fold(f64::NEG_INFINITY, |acc, e| acc.max(e.re))
}
