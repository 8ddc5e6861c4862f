//! Small dense linear algebra: exact Gaussian elimination over [`Scalar`],
//! a Jacobi eigensolver for symmetric matrices, Sturm bisection for
//! symmetric tridiagonal spectra, and complex LU / Hessenberg QR for the
//! matrix-coefficient paths.
//!
//! Everything here is desk scale (matrices up to a few dozen rows), so the
//! solvers favour clarity and determinism over blocking.

use crate::scalar::Scalar;
use num_complex::Complex64;

pub type Mat = Vec<Vec<Scalar>>;

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("singular matrix")]
    Singular,
    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("resolvent too ill-conditioned (estimate {0:.3e})")]
    IllConditioned(f64),
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

/// Solve `a x = b` for several right-hand sides by Gaussian elimination
/// with partial pivoting. Exact when all entries are exact.
pub fn solve(a: &Mat, rhs: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, LinalgError> {
    let n = a.len();
    let m = rhs.len();
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            for r in rhs {
                row.push(r[i].clone());
            }
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !aug[r][col].is_zero())
            .max_by(|&r, &s| {
                aug[r][col]
                    .abs()
                    .partial_cmp(&aug[s][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(LinalgError::Singular)?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip().ok_or(LinalgError::Singular)?;
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = &aug[r][col] * &inv;
            for c in col..n + m {
                let delta = &factor * &aug[col][c];
                aug[r][c] = &aug[r][c] - &delta;
            }
        }
    }

    let mut out = vec![vec![Scalar::zero(); n]; m];
    for (k, sol) in out.iter_mut().enumerate() {
        for i in 0..n {
            let inv = aug[i][i].recip().ok_or(LinalgError::Singular)?;
            sol[i] = &aug[i][n + k] * &inv;
        }
    }
    Ok(out)
}

pub fn invert(a: &Mat) -> Result<Mat, LinalgError> {
    let n = a.len();
    let basis: Vec<Vec<Scalar>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| if i == k { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect();
    let cols = solve(a, &basis)?;
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    let m = a[0].len();
    (0..m)
        .map(|j| (0..n).map(|i| a[i][j].clone()).collect())
        .collect()
}

pub fn mat_mul_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            let ail = a[i][l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += ail * b[l][j];
            }
        }
    }
    out
}

/// Cyclic Jacobi iteration for a symmetric matrix. Returns `(eigenvalues,
/// eigenvectors)` with eigenvectors as the columns of the returned matrix,
/// sorted by descending eigenvalue.
pub fn jacobi_symmetric(a_in: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>), LinalgError> {
    let n = a_in.len();
    let mut a: Vec<Vec<f64>> = a_in.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if n <= 1 {
        let vals = a.iter().enumerate().map(|(i, r)| r[i]).collect();
        return Ok((vals, v));
    }

    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }

    let max_sweeps = 64;
    for _sweep in 0..max_sweeps {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&p, &q| a[q][q].partial_cmp(&a[p][p]).unwrap());
            let vals = idx.iter().map(|&i| a[i][i]).collect();
            let vecs = (0..n)
                .map(|r| idx.iter().map(|&c| v[r][c]).collect())
                .collect();
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(LinalgError::NoConvergence(max_sweeps))
}

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly below `x`, via the Sturm sequence count.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let mut denom = d;
        if denom.abs() < 1e-300 {
            denom = if denom < 0.0 { -1e-300 } else { 1e-300 };
        }
        d = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `count` eigenvalues of a symmetric tridiagonal matrix by bisection.
pub fn tridiagonal_lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    let count = count.min(n);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < n - 1 {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let span = (hi - lo).max(1e-300);
    (0..count)
        .map(|k| {
            let mut a = lo;
            let mut b = hi;
            // eigenvalue with index k: first x with count(x) > k
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if sturm_count(diag, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= 1e-15 * span {
                    break;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Complex dense kernels
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct ComplexLu {
    lu: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
    sign_swaps: usize,
}

impl ComplexLu {
    pub fn new(a: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let n = a.len();
        let mut lu: Vec<Vec<Complex64>> = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let (pivot, pmax) = (col..n)
                .map(|r| (r, lu[r][col].norm()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap();
            if pmax == 0.0 {
                return Err(LinalgError::Singular);
            }
            if pivot != col {
                lu.swap(col, pivot);
                perm.swap(col, pivot);
                swaps += 1;
            }
            let inv = lu[col][col].finv();
            for r in (col + 1)..n {
                let f = lu[r][col] * inv;
                lu[r][col] = f;
                for c in (col + 1)..n {
                    let delta = f * lu[col][c];
                    lu[r][c] -= delta;
                }
            }
        }
        Ok(ComplexLu {
            lu,
            perm,
            sign_swaps: swaps,
        })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let d = self.lu[i][j] * y[j];
                y[i] -= d;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let d = self.lu[i][j] * y[j];
                y[i] -= d;
            }
            y[i] /= self.lu[i][i];
        }
        y
    }

    pub fn inverse(&self) -> Vec<Vec<Complex64>> {
        let n = self.lu.len();
        let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for k in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[k] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[i][k] = col[i];
            }
        }
        inv
    }

    pub fn det(&self) -> Complex64 {
        let mut d = if self.sign_swaps % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        for (i, row) in self.lu.iter().enumerate() {
            d *= row[i];
        }
        d
    }
}

pub fn complex_one_norm(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    (0..a[0].len())
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition estimate computed from the explicit inverse; fine at
/// the r <= 64 scale this crate works at.
pub fn condition_estimate(a: &[Vec<Complex64>]) -> Result<f64, LinalgError> {
    let lu = ComplexLu::new(a)?;
    let inv = lu.inverse();
    Ok(complex_one_norm(a) * complex_one_norm(&inv))
}

/// Eigenvalues of a general complex matrix: closed forms for n <= 2,
/// Householder reduction to Hessenberg form plus shifted QR above that.
pub fn complex_eigenvalues(a: &[Vec<Complex64>]) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.len();
    match n {
        0 => Ok(vec![]),
        1 => Ok(vec![a[0][0]]),
        2 => {
            let tr = a[0][0] + a[1][1];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let disc = (tr * tr - 4.0 * det).sqrt();
            Ok(vec![(tr + disc) * 0.5, (tr - disc) * 0.5])
        }
        _ => {
            let mut h = to_hessenberg(a);
            qr_eigenvalues(&mut h)
        }
    }
}

fn to_hessenberg(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut h: Vec<Vec<Complex64>> = a.to_vec();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating h[k+2.., k]
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            norm2 += h[i][k].norm_sqr();
        }
        let alpha_norm = norm2.sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * alpha_norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[i][k]).collect();
        v[0] -= alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        // H = I - 2 v v^* / |v|^2 applied on both sides
        for col in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[k + 1 + i][col];
            }
            let f = dot * (2.0 / vn2);
            for (i, vi) in v.iter().enumerate() {
                let d = f * vi;
                h[k + 1 + i][col] -= d;
            }
        }
        for row in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, vi) in v.iter().enumerate() {
                dot += h[row][k + 1 + i] * *vi;
            }
            let f = dot * (2.0 / vn2);
            for (i, vi) in v.iter().enumerate() {
                let d = f * vi.conj();
                h[row][k + 1 + i] -= d;
            }
        }
    }
    h
}

/// Shifted QR on an upper Hessenberg matrix using complex Givens rotations
/// with Wilkinson shifts and deflation.
fn qr_eigenvalues(h: &mut [Vec<Complex64>]) -> Result<Vec<Complex64>, LinalgError> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is lo..hi
    let mut iters_since_deflation = 0usize;
    let max_total = 200 * n;
    let mut total = 0usize;

    while hi > 0 {
        if total > max_total {
            return Err(LinalgError::NoConvergence(max_total));
        }
        // scan for a negligible subdiagonal entry
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if h[lo][lo - 1].norm() <= 1e-15 * s.max(1e-300) {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of the active block
        let a = h[hi - 2][hi - 2];
        let b = h[hi - 2][hi - 1];
        let c = h[hi - 1][hi - 2];
        let d = h[hi - 1][hi - 1];
        let tr = a + d;
        let det = a * d - b * c;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let e1 = (tr + disc) * 0.5;
        let e2 = (tr - disc) * 0.5;
        let mut shift = if (e1 - d).norm() < (e2 - d).norm() {
            e1
        } else {
            e2
        };
        if iters_since_deflation > 0 && iters_since_deflation % 12 == 0 {
            shift += Complex64::new(h[hi - 1][hi - 2].norm(), 0.0);
        }

        // explicit single-shift QR sweep: H - sI = QR, then H <- RQ + sI
        for i in lo..hi {
            h[i][i] -= shift;
        }
        // G_i = [[c*, s*], [-s, c]] annihilates h[i+1][i]
        let mut rots: Vec<(Complex64, Complex64)> = Vec::with_capacity(hi - 1 - lo);
        for i in lo..(hi - 1) {
            let x = h[i][i];
            let y = h[i + 1][i];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cg, sg) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for col in i..hi {
                let u = h[i][col];
                let v = h[i + 1][col];
                h[i][col] = cg.conj() * u + sg.conj() * v;
                h[i + 1][col] = -sg * u + cg * v;
            }
            rots.push((cg, sg));
        }
        for (idx, i) in (lo..(hi - 1)).enumerate() {
            let (cg, sg) = rots[idx];
            let last_row = (i + 2).min(hi - 1);
            for row in lo..=last_row {
                let u = h[row][i];
                let v = h[row][i + 1];
                h[row][i] = u * cg + v * sg;
                h[row][i + 1] = -u * sg.conj() + v * cg.conj();
            }
        }
        for i in lo..hi {
            h[i][i] += shift;
        }
        iters_since_deflation += 1;
        total += 1;
    }
    Ok(eigs)
}
