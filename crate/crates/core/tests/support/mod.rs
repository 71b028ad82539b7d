//! Independent oracles for the integration tests. Nothing here calls into
//! the library's numerics.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(r: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(r)
}

pub fn normals(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(r)).collect()
}

pub fn uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    r.random_range(lo..hi)
}

/// Random symmetric matrix with N(0,1) entries on and above the diagonal.
pub fn random_symmetric(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = normal(r);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}

/// `Σ v vᵀ` over `count` Gaussian vectors.
pub fn random_psd(r: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for _ in 0..count {
        let v = normals(r, n);
        for i in 0..n {
            for j in 0..n {
                a[i][j] += v[i] * v[j];
            }
        }
    }
    a
}

/// Determinant of `a − x I` by LU with partial pivoting.
pub fn shifted_det(a: &[Vec<f64>], x: f64) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= x;
    }
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    det
}

/// Number of eigenvalues of symmetric `a` below `x`: negative pivots of the
/// unpivoted LU of `a − x I` (Sylvester's law of inertia).
pub fn count_below(a: &[Vec<f64>], x: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= x;
    }
    let scale = a.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
    let mut negative = 0;
    for c in 0..n {
        if m[c][c] == 0.0 {
            m[c][c] = -1e-300 * scale;
        }
        if m[c][c] < 0.0 {
            negative += 1;
        }
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    negative
}

/// Eigenvalues of symmetric `a`, descending, by bisection on the inertia
/// count over the Gershgorin interval.
pub fn bisection_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let radius = |i: usize| a[i].iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.abs()).sum::<f64>();
    let lo0 = (0..n).map(|i| a[i][i] - radius(i)).fold(f64::INFINITY, f64::min) - 1.0;
    let hi0 = (0..n).map(|i| a[i][i] + radius(i)).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let mut ascending = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count_below(a, mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * (1.0 + hi.abs()) {
                break;
            }
        }
        ascending.push(0.5 * (lo + hi));
    }
    ascending.reverse();
    ascending
}

pub fn to_matrix(a: &[Vec<f64>]) -> currlab::Matrix {
    currlab::Matrix::from_rows(a).unwrap()
}

pub fn add_outer(a: &[Vec<f64>], u: &[f64]) -> Vec<Vec<f64>> {
    a.iter().enumerate().map(|(i, row)| row.iter().enumerate().map(|(j, v)| v + u[i] * u[j]).collect()).collect()
}

/// Gram `Σ_t c_t β_t β_tᵀ` for counts `c`.
pub fn weighted_gram(betas: &[Vec<f64>], counts: &[usize]) -> Vec<Vec<f64>> {
    let k = betas[0].len();
    let mut g = vec![vec![0.0; k]; k];
    for (b, &c) in betas.iter().zip(counts) {
        for i in 0..k {
            for j in 0..k {
                g[i][j] += c as f64 * b[i] * b[j];
            }
        }
    }
    g
}

/// Exact mean excess risk of OLS with Gaussian design and identity
/// covariance: `dσ²/(n − d − 1)`.
pub fn ols_risk(d: usize, sigma2: f64, n: usize) -> f64 {
    d as f64 * sigma2 / (n - d - 1) as f64
}

/// One-dimensional expected prediction gain for x ~ N(0,1): with
/// `e = θ − θ_T`, `Δ = θ_t − θ_T`, the update leaves
/// `e − ηx²(e − Δ) + ηxε`, whose second moment uses `E x⁴ = 3`.
pub fn gain_1d(eta: f64, e: f64, delta: f64, s2: f64) -> f64 {
    let g = e - delta;
    2.0 * eta * e * g - 3.0 * eta * eta * g * g - eta * eta * s2
}

/// Monte Carlo mean of the realized one-dimensional gain.
pub fn gain_1d_mc(eta: f64, e: f64, delta: f64, s2: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let s = s2.sqrt();
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for _ in 0..samples {
        let x = normal(&mut r);
        let eps = s * normal(&mut r);
        let after = e - eta * x * x * (e - delta) + eta * x * eps;
        let g = e * e - after * after;
        sum += g;
        sum2 += g * g;
    }
    let n = samples as f64;
    let mean = sum / n;
    (mean, ((sum2 / n - mean * mean) / n).sqrt())
}

/// Single-line verdict printed by the acceptance suite. Written to the raw
/// stdout handle so the line shows even when the harness captures output.
pub fn verdict(id: &str, pass: bool, detail: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    let _ = out.flush();
}
