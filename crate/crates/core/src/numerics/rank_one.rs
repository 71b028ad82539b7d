use super::eigen::SymmetricEigen;
use super::matrix::{dot, norm};

/// Spectrum of `G + θθᵀ` for a fixed symmetric `G` and varying `θ`.
///
/// With `G = V diag(λ) Vᵀ` and `z = Vᵀθ`, the number of eigenvalues of
/// `G + θθᵀ` above `μ` equals `#{λ_j > μ} + [1 + Σ z_j²/(λ_j − μ) < 0]`
/// (Haynsworth inertia additivity), so any single eigenvalue can be
/// bisected in `O(d)` per probe without refactorizing.
#[derive(Debug, Clone)]
pub struct RankOneSpectrum {
    eig: SymmetricEigen,
}

const BISECT_ITERS: usize = 200;

impl RankOneSpectrum {
    pub fn new(eig: SymmetricEigen) -> Self {
        Self { eig }
    }

    pub fn base(&self) -> &SymmetricEigen {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    /// Coordinates of `theta` in the eigenbasis of `G`.
    pub fn coords(&self, theta: &[f64]) -> Vec<f64> {
        self.eig.vectors.tr_matvec(theta)
    }

    fn count_above(&self, z: &[f64], mu: f64) -> usize {
        let mut count = 0;
        let mut secular = 1.0;
        for (&l, &zj) in self.eig.values.iter().zip(z) {
            if l > mu {
                count += 1;
            }
            if zj != 0.0 {
                secular += zj * zj / (l - mu);
            }
        }
        if secular < 0.0 {
            count += 1;
        }
        count
    }

    /// k-th largest eigenvalue (1-based) of `G + θθᵀ`.
    pub fn kth_largest(&self, theta: &[f64], k: usize) -> f64 {
        let z = self.coords(theta);
        self.kth_largest_from_coords(&z, k)
    }

    fn kth_largest_from_coords(&self, z: &[f64], k: usize) -> f64 {
        let vals = &self.eig.values;
        assert!(k >= 1 && k <= vals.len(), "k out of range");
        let zz = dot(z, z);
        // interlacing: λ_k ≤ ν_k ≤ min(λ_{k-1}, λ_k + ‖θ‖²)
        let mut lo = vals[k - 1];
        let mut hi = vals[k - 1] + zz;
        if k >= 2 {
            hi = hi.min(vals[k - 2]);
        }
        if hi <= lo {
            return lo;
        }
        let scale = vals.iter().fold(zz, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for _ in 0..BISECT_ITERS {
            if hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.count_above(z, mid) >= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// k-th largest eigenvalue of `G + θθᵀ` and its supergradient with
    /// respect to `θ`, `2 (uᵀθ) u` for the associated unit eigenvector `u`.
    pub fn kth_with_gradient(&self, theta: &[f64], k: usize) -> (f64, Vec<f64>) {
        let z = self.coords(theta);
        let nu = self.kth_largest_from_coords(&z, k);
        let vals = &self.eig.values;
        let d = vals.len();
        let znorm = norm(&z);
        let scale = vals.iter().fold(znorm * znorm, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);

        // ν sitting on an eigenvalue of G whose direction θ does not touch:
        // the eigenvector is that direction and the gradient vanishes.
        let deflated = (0..d).any(|j| {
            z[j].abs() <= 1e-12 * znorm.max(f64::MIN_POSITIVE) && (vals[j] - nu).abs() <= 1e-10 * scale
        });
        if znorm == 0.0 || deflated {
            return (nu, vec![0.0; d]);
        }
        let mut w: Vec<f64> = Vec::with_capacity(d);
        for j in 0..d {
            let gap = vals[j] - nu;
            if gap.abs() <= 1e-300 {
                w.push(z[j].signum() * 1e300);
            } else {
                w.push(z[j] / gap);
            }
        }
        let wn = norm(&w);
        if !wn.is_finite() || wn == 0.0 {
            return (nu, vec![0.0; d]);
        }
        let u = self.eig.vectors.matvec(&w.iter().map(|x| x / wn).collect::<Vec<_>>());
        let c = 2.0 * dot(&u, theta);
        (nu, u.iter().map(|x| c * x).collect())
    }
}
