//! Dense nonsymmetric eigenvalue computation.
//!
//! Pipeline: diagonal balancing, Householder reduction to upper Hessenberg
//! form, then the implicit double-shift QR iteration with deflation and
//! exceptional shifts (the classic EISPACK `hqr` scheme). Suitable for the
//! n <= 64 matrices this crate works with.

use super::{LinalgError, Matrix};

/// Largest matrix size accepted by [`eigenvalues`].
pub const EIG_MAX_SIZE: usize = 64;

/// QR iterations allowed per deflation before giving up.
pub const EIG_ITERATION_CAP: usize = 30;

/// A real/imaginary pair; the result type for eigenvalues of real matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
}

impl ComplexPair {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// All eigenvalues of a square matrix, sorted by `(re, im)` ascending.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<ComplexPair>, LinalgError> {
    eigenvalues_with(a, EIG_ITERATION_CAP)
}

/// [`eigenvalues`] with a caller-chosen per-deflation iteration cap.
pub fn eigenvalues_with(a: &Matrix, iteration_cap: usize) -> Result<Vec<ComplexPair>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() > EIG_MAX_SIZE {
        return Err(LinalgError::TooLarge {
            n: a.rows(),
            max: EIG_MAX_SIZE,
        });
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut eigs = hqr(&mut h, iteration_cap)?;
    eigs.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    Ok(eigs)
}

/// Iterative diagonal similarity scaling (radix 2), preserving eigenvalues
/// while roughly equalizing row and column norms.
fn balance(a: &mut Matrix) {
    const RADIX: f64 = 2.0;
    let n = a.rows();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a.get(j, i).abs();
                    r += a.get(i, j).abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                let mut c_work = c;
                while c_work < g {
                    f *= RADIX;
                    c_work *= RADIX * RADIX;
                }
                g = r * RADIX;
                while c_work > g {
                    f /= RADIX;
                    c_work /= RADIX * RADIX;
                }
                if (c_work + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        let v = a.get(i, j) * g;
                        a.set(i, j, v);
                    }
                    for j in 0..n {
                        let v = a.get(j, i) * f;
                        a.set(j, i, v);
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder similarity reduction to upper Hessenberg form (in place).
fn hessenberg(a: &mut Matrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for col in 0..(n - 2) {
        // Householder vector annihilating a[col+2.., col]
        let x0 = a.get(col + 1, col);
        let tail_sq: f64 = ((col + 2)..n).map(|i| a.get(i, col) * a.get(i, col)).sum();
        if tail_sq == 0.0 {
            continue; // column already Hessenberg
        }
        let norm = (x0 * x0 + tail_sq).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        v[col + 1] = x0 - alpha;
        for i in (col + 2)..n {
            v[i] = a.get(i, col);
        }
        let vtv: f64 = ((col + 1)..n).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;
        // A <- (I - beta v v^T) A
        for j in 0..n {
            let dot: f64 = ((col + 1)..n).map(|i| v[i] * a.get(i, j)).sum();
            let s = beta * dot;
            for i in (col + 1)..n {
                let val = a.get(i, j) - s * v[i];
                a.set(i, j, val);
            }
        }
        // A <- A (I - beta v v^T)
        for i in 0..n {
            let dot: f64 = ((col + 1)..n).map(|j| a.get(i, j) * v[j]).sum();
            let s = beta * dot;
            for j in (col + 1)..n {
                let val = a.get(i, j) - s * v[j];
                a.set(i, j, val);
            }
        }
        a.set(col + 1, col, alpha);
        for i in (col + 2)..n {
            a.set(i, col, 0.0);
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Double-shift QR iteration on an upper Hessenberg matrix.
fn hqr(h: &mut Matrix, iteration_cap: usize) -> Result<Vec<ComplexPair>, LinalgError> {
    let n = h.rows();
    let mut eigs: Vec<ComplexPair> = Vec::with_capacity(n);

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h.get(i, j).abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![ComplexPair::new(0.0, 0.0); n]);
    }

    let mut t = 0.0;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // find a negligible subdiagonal entry
            let mut l = nn;
            while l >= 1 {
                let mut s = h.get(l as usize - 1, l as usize - 1).abs()
                    + h.get(l as usize, l as usize).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h.get(l as usize, l as usize - 1).abs() <= f64::EPSILON * s {
                    h.set(l as usize, l as usize - 1, 0.0);
                    break;
                }
                l -= 1;
            }
            let x = h.get(nn as usize, nn as usize);
            if l == nn {
                // single real eigenvalue
                eigs.push(ComplexPair::new(x + t, 0.0));
                nn -= 1;
                break;
            }
            let y = h.get(nn as usize - 1, nn as usize - 1);
            let w = h.get(nn as usize, nn as usize - 1) * h.get(nn as usize - 1, nn as usize);
            if l == nn - 1 {
                // 2x2 block: real pair or complex conjugate pair
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x_sh = x + t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    let first = x_sh + z;
                    let second = if z == 0.0 { x_sh } else { x_sh - w / z };
                    eigs.push(ComplexPair::new(first, 0.0));
                    eigs.push(ComplexPair::new(second, 0.0));
                } else {
                    eigs.push(ComplexPair::new(x_sh + p, z));
                    eigs.push(ComplexPair::new(x_sh + p, -z));
                }
                nn -= 2;
                break;
            }
            // no deflation yet: one double-shift QR sweep
            if its == iteration_cap {
                return Err(LinalgError::NoConvergence { cap: iteration_cap });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its > 0 && its % 10 == 0 {
                // exceptional shift to break cycling
                t += x;
                for i in 0..=nn as usize {
                    let v = h.get(i, i) - x;
                    h.set(i, i, v);
                }
                let s = h.get(nn as usize, nn as usize - 1).abs()
                    + h.get(nn as usize - 1, nn as usize - 2).abs();
                y = 0.75 * s;
                x = y;
                w = -0.4375 * s * s;
            }
            its += 1;

            // look for two consecutive small subdiagonals
            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
            while m >= l {
                let mu = m as usize;
                let z = h.get(mu, mu);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h.get(mu + 1, mu) + h.get(mu, mu + 1);
                q = h.get(mu + 1, mu + 1) - z - rr - ss;
                r = h.get(mu + 2, mu + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h.get(mu, mu - 1).abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (h.get(mu - 1, mu - 1).abs() + z.abs() + h.get(mu + 1, mu + 1).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                h.set(i as usize, i as usize - 2, 0.0);
            }
            for i in (m + 3)..=nn {
                h.set(i as usize, i as usize - 3, 0.0);
            }

            // bulge chase across rows m..nn
            for k in m..=(nn - 1) {
                let ku = k as usize;
                if k != m {
                    p = h.get(ku, ku - 1);
                    q = h.get(ku + 1, ku - 1);
                    r = if k != nn - 1 { h.get(ku + 2, ku - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        let v = -h.get(ku, ku - 1);
                        h.set(ku, ku - 1, v);
                    }
                } else {
                    h.set(ku, ku - 1, -s * x);
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in ku..=nn as usize {
                    let mut pp = h.get(ku, j) + q * h.get(ku + 1, j);
                    if k != nn - 1 {
                        pp += r * h.get(ku + 2, j);
                        let v = h.get(ku + 2, j) - pp * z;
                        h.set(ku + 2, j, v);
                    }
                    let v1 = h.get(ku + 1, j) - pp * y;
                    h.set(ku + 1, j, v1);
                    let v0 = h.get(ku, j) - pp * x;
                    h.set(ku, j, v0);
                }
                let mmin = if nn < k + 3 { nn as usize } else { ku + 3 };
                for i in l as usize..=mmin {
                    let mut pp = x * h.get(i, ku) + y * h.get(i, ku + 1);
                    if k != nn - 1 {
                        pp += z * h.get(i, ku + 2);
                        let v = h.get(i, ku + 2) - pp * r;
                        h.set(i, ku + 2, v);
                    }
                    let v1 = h.get(i, ku + 1) - pp * q;
                    h.set(i, ku + 1, v1);
                    let v0 = h.get(i, ku) - pp;
                    h.set(i, ku, v0);
                }
            }
        }
    }
    Ok(eigs)
}
