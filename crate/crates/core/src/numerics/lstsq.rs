use super::eigen::sym_eigen;
use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

/// Singular values below `RANK_TOL · σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Solves `argmin_θ ‖y − Xθ‖² + ridge·‖θ‖²`.
///
/// Uses Householder QR with column pivoting; rank-deficient systems (including
/// `n < d` with `ridge = 0`) fall back to the SVD pseudoinverse and return the
/// minimum-norm minimizer. A positive ridge is handled by augmenting the
/// system with `√ridge · I`.
pub fn least_squares(x: &Matrix, y: &[f64], ridge: f64) -> Result<Vec<f64>> {
    if x.rows() != y.len() {
        return Err(Error::InvalidInput(format!("{} rows but {} responses", x.rows(), y.len())));
    }
    if !(ridge >= 0.0) || !ridge.is_finite() {
        return Err(Error::InvalidInput(format!("ridge must be a nonnegative number, got {ridge}")));
    }
    let d = x.cols();
    if d == 0 {
        return Ok(Vec::new());
    }
    if ridge > 0.0 {
        let n = x.rows();
        let mut aug = Matrix::zeros(n + d, d);
        for i in 0..n {
            aug.row_mut(i).copy_from_slice(x.row(i));
        }
        let r = ridge.sqrt();
        for j in 0..d {
            aug[(n + j, j)] = r;
        }
        let mut yy = y.to_vec();
        yy.extend(std::iter::repeat_n(0.0, d));
        return Ok(pivoted_qr_solve(&aug, &yy).unwrap_or_else(|| svd_solve(&aug, &yy)));
    }
    Ok(pivoted_qr_solve(x, y).unwrap_or_else(|| svd_solve(x, y)))
}

/// Full-rank pivoted QR solve; `None` when the system is numerically rank
/// deficient.
fn pivoted_qr_solve(x: &Matrix, y: &[f64]) -> Option<Vec<f64>> {
    let (n, d) = (x.rows(), x.cols());
    if n < d {
        return None;
    }
    let mut a = x.clone();
    let mut b = y.to_vec();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut r00 = 0.0;

    for j in 0..d {
        // pivot on the largest remaining column norm
        let (mut best, mut best_norm) = (j, -1.0);
        for c in j..d {
            let s: f64 = (j..n).map(|i| a[(i, c)] * a[(i, c)]).sum();
            if s > best_norm {
                best = c;
                best_norm = s;
            }
        }
        if best != j {
            perm.swap(j, best);
            for i in 0..n {
                let tmp = a[(i, j)];
                a[(i, j)] = a[(i, best)];
                a[(i, best)] = tmp;
            }
        }
        let col_norm = best_norm.sqrt();
        if j == 0 {
            r00 = col_norm;
            if r00 == 0.0 {
                return None;
            }
        }
        if col_norm <= RANK_TOL * r00 {
            return None;
        }
        // Householder reflector zeroing a[j+1.., j]
        let alpha = if a[(j, j)] > 0.0 { -col_norm } else { col_norm };
        let mut v: Vec<f64> = (j..n).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 > 0.0 {
            for c in j..d {
                let s: f64 = (j..n).map(|i| v[i - j] * a[(i, c)]).sum::<f64>() * 2.0 / vnorm2;
                for i in j..n {
                    a[(i, c)] -= s * v[i - j];
                }
            }
            let s: f64 = (j..n).map(|i| v[i - j] * b[i]).sum::<f64>() * 2.0 / vnorm2;
            for i in j..n {
                b[i] -= s * v[i - j];
            }
        }
        a[(j, j)] = alpha;
        for i in (j + 1)..n {
            a[(i, j)] = 0.0;
        }
    }

    let mut z = vec![0.0; d];
    for j in (0..d).rev() {
        let s: f64 = ((j + 1)..d).map(|c| a[(j, c)] * z[c]).sum();
        z[j] = (b[j] - s) / a[(j, j)];
    }
    let mut theta = vec![0.0; d];
    for (j, &p) in perm.iter().enumerate() {
        theta[p] = z[j];
    }
    Some(theta)
}

/// Thin SVD computed by one-sided (Hestenes) Jacobi rotations.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors scaled by their singular values (`U Σ`), one per column.
    pub us: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(x: &Matrix) -> Svd {
    let (n, d) = (x.rows(), x.cols());
    let mut u = x.clone();
    let mut v = Matrix::identity(d);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..d {
            for q in (p + 1)..d {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..d {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let singular_values = (0..d).map(|j| (0..n).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt()).collect();
    Svd { us: u, singular_values, v }
}

/// Minimum-norm least squares through the SVD pseudoinverse.
fn svd_solve(x: &Matrix, y: &[f64]) -> Vec<f64> {
    let s = svd(x);
    let d = x.cols();
    let smax = s.singular_values.iter().fold(0.0f64, |m, &v| m.max(v));
    let mut theta = vec![0.0; d];
    if smax == 0.0 {
        return theta;
    }
    for j in 0..d {
        let sj = s.singular_values[j];
        if sj <= RANK_TOL * smax {
            continue;
        }
        let coef = (0..x.rows()).map(|i| s.us[(i, j)] * y[i]).sum::<f64>() / (sj * sj);
        for (r, t) in theta.iter_mut().enumerate() {
            *t += coef * s.v[(r, j)];
        }
    }
    theta
}

/// Orthonormalizes the columns of `a` (modified Gram–Schmidt with
/// re-orthogonalization). Returns `(Q, R)` with `a = Q R`; requires full
/// column rank.
pub fn thin_qr(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let (n, k) = (a.rows(), a.cols());
    let mut q = Matrix::zeros(n, k);
    let mut r = Matrix::zeros(k, k);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for j in 0..k {
        let mut col = a.column(j);
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let proj = dot(&qi, &col);
                r[(i, j)] += proj;
                for (c, qv) in col.iter_mut().zip(&qi) {
                    *c -= proj * qv;
                }
            }
        }
        let nrm = dot(&col, &col).sqrt();
        if nrm <= 1e-13 * scale {
            return Err(Error::Numerical("thin_qr: rank-deficient columns".into()));
        }
        r[(j, j)] = nrm;
        for (i, c) in col.iter().enumerate() {
            q[(i, j)] = c / nrm;
        }
    }
    Ok((q, r))
}

/// Solves a symmetric positive semi-definite system, via Cholesky when the
/// matrix is safely definite and the eigen pseudoinverse otherwise.
pub fn solve_psd(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = m.rows();
    let maxdiag = (0..n).fold(0.0f64, |acc, i| acc.max(m[(i, i)].abs()));
    if maxdiag == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut l = Matrix::zeros(n, n);
    let mut ok = true;
    'outer: for j in 0..n {
        let mut s = m[(j, j)];
        for p in 0..j {
            s -= l[(j, p)] * l[(j, p)];
        }
        if s <= 1e-12 * maxdiag {
            ok = false;
            break 'outer;
        }
        let ljj = s.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    if ok {
        let mut z = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|p| l[(i, p)] * z[p]).sum();
            z[i] = (b[i] - s) / l[(i, i)];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|p| l[(p, i)] * x[p]).sum();
            x[i] = (z[i] - s) / l[(i, i)];
        }
        return Ok(x);
    }
    Ok(sym_eigen(m)?.pinv_solve(b, RANK_TOL))
}
