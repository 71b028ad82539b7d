use super::matrix::Matrix;
use super::rng::RngStream;
use crate::error::{Error, Result};

const JITTER: f64 = 1e-12;

/// Lower-triangular `L` with `L Lᵀ = cov`.
///
/// Zero pivots (within `1e-12` of the scale) produce a zero column so
/// degenerate PSD covariances are accepted; a negative pivot triggers one
/// retry with `1e-12` added to the diagonal before giving up.
pub fn cholesky_psd(cov: &Matrix) -> Result<Matrix> {
    if !cov.is_square() {
        return Err(Error::InvalidCovariance("not square".into()));
    }
    if !cov.is_finite() {
        return Err(Error::InvalidCovariance("non-finite entry".into()));
    }
    if !cov.is_symmetric(1e-10) {
        return Err(Error::InvalidCovariance("not symmetric".into()));
    }
    let sym = cov.symmetrized();
    match try_cholesky(&sym) {
        Some(l) => Ok(l),
        None => {
            let mut jittered = sym;
            for i in 0..jittered.rows() {
                jittered[(i, i)] += JITTER;
            }
            try_cholesky(&jittered)
                .ok_or_else(|| Error::InvalidCovariance("not positive semi-definite".into()))
        }
    }
}

fn try_cholesky(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    let scale = (0..n).fold(0.0f64, |m, i| m.max(a[(i, i)].abs())).max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut s = a[(j, j)];
        for p in 0..j {
            s -= l[(j, p)] * l[(j, p)];
        }
        if s < -eps {
            return None;
        }
        if s <= eps {
            // degenerate direction: remaining column must vanish as well
            for i in (j + 1)..n {
                let mut r = a[(i, j)];
                for p in 0..j {
                    r -= l[(i, p)] * l[(j, p)];
                }
                if r.abs() > 1e-8 * scale {
                    return None;
                }
            }
            continue;
        }
        let ljj = s.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut r = a[(i, j)];
            for p in 0..j {
                r -= l[(i, p)] * l[(j, p)];
            }
            l[(i, j)] = r / ljj;
        }
    }
    Some(l)
}

/// Multivariate normal sampler with a cached Cholesky factor.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    mean: Vec<f64>,
    factor: Option<Matrix>,
}

impl GaussianSampler {
    pub fn new(mean: Vec<f64>, cov: &Matrix) -> Result<Self> {
        if cov.rows() != mean.len() {
            return Err(Error::InvalidCovariance(format!(
                "covariance is {}x{} but mean has length {}",
                cov.rows(),
                cov.cols(),
                mean.len()
            )));
        }
        let factor = if cov.is_identity() { None } else { Some(cholesky_psd(cov)?) };
        Ok(Self { mean, factor })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        let z = rng.normals(self.mean.len());
        match &self.factor {
            None => z.iter().zip(&self.mean).map(|(a, m)| a + m).collect(),
            Some(l) => {
                let mut out = self.mean.clone();
                for (i, o) in out.iter_mut().enumerate() {
                    let row = l.row(i);
                    *o += row[..=i].iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
                }
                out
            }
        }
    }
}

/// One draw from `N(mean, cov)`: `mean + L z` with `L Lᵀ = cov`.
pub fn gaussian_vector(mean: &[f64], cov: &Matrix, rng: &mut RngStream) -> Result<Vec<f64>> {
    Ok(GaussianSampler::new(mean.to_vec(), cov)?.sample(rng))
}
