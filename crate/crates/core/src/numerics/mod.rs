//! Dense linear algebra and random sampling primitives.
//!
//! Every problem in the lab is tiny (dimension at most a few dozen), so all
//! routines are plain row-major loops without external BLAS.

mod eigen;
mod gaussian;
mod lstsq;
mod matrix;
mod rank_one;
mod rng;

pub use eigen::{kth_largest_eigenvalue, sym_eigen, SymmetricEigen};
pub use gaussian::{cholesky_psd, gaussian_vector, GaussianSampler};
pub use lstsq::{least_squares, solve_psd, svd, thin_qr, Svd, RANK_TOL};
pub use matrix::{axpy, dist_sq, dot, norm, sub_vec, Matrix};
pub use rank_one::RankOneSpectrum;
pub use rng::RngStream;

use crate::error::Result;

/// `d × k` matrix with orthonormal columns, drawn from the Haar measure
/// (Gram–Schmidt on a Gaussian matrix).
pub fn random_orthonormal(d: usize, k: usize, rng: &mut RngStream) -> Result<Matrix> {
    assert!(k <= d, "cannot fit {k} orthonormal columns in dimension {d}");
    loop {
        let g = Matrix::from_vec(d, k, rng.normals(d * k))?;
        if let Ok((q, _)) = thin_qr(&g) {
            return Ok(q);
        }
    }
}

/// Orthonormal basis of the top-`k` left singular subspace of `m`.
pub fn top_left_singular_subspace(m: &Matrix, k: usize) -> Result<Matrix> {
    let mmt = m.matmul(&m.transpose());
    let eig = sym_eigen(&mmt)?;
    let cols: Vec<Vec<f64>> = (0..k).map(|j| eig.vector(j)).collect();
    Matrix::from_columns(&cols)
}

/// Sine of the largest principal angle between `span(a)` and `span(b)`
/// (0 when the spans coincide, 1 when some direction is orthogonal).
pub fn subspace_distance(a: &Matrix, b: &Matrix) -> Result<f64> {
    let (qa, _) = thin_qr(a)?;
    let (qb, _) = thin_qr(b)?;
    let c = qa.transpose().matmul(&qb);
    let eig = sym_eigen(&c.gram())?;
    let cos2_min = eig.min().clamp(0.0, 1.0);
    if qa.cols() != qb.cols() {
        return Ok(1.0);
    }
    Ok((1.0 - cos2_min).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_orthonormal_is_orthonormal() {
        let mut rng = RngStream::new(3, 0);
        let q = random_orthonormal(6, 3, &mut rng).unwrap();
        assert!(q.gram().sub(&Matrix::identity(3)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn subspace_distance_basic() {
        let a = Matrix::from_columns(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let b = Matrix::from_columns(&[vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0]]).unwrap();
        assert!(subspace_distance(&a, &b).unwrap() < 1e-7);
        let c = Matrix::from_columns(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!((subspace_distance(&a, &c).unwrap() - 1.0).abs() < 1e-12);
    }
}
