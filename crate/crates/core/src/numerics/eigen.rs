use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

const OFF_DIAG_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: Matrix,
}

impl SymmetricEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// k-th largest eigenvalue, 1-based (`kth_largest(1)` is the maximum).
    pub fn kth_largest(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.values.len(), "k out of range");
        self.values[k - 1]
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("empty decomposition")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    /// `V diag(λ) Vᵀ`
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (j, &l) in self.values.iter().enumerate() {
            let v = self.vector(j);
            out.add_outer(l, &v, &v);
        }
        out
    }

    /// Minimum-norm solution of `A x = b` using this decomposition, with
    /// eigenvalues below `rel_tol · max|λ|` treated as zero.
    pub fn pinv_solve(&self, b: &[f64], rel_tol: f64) -> Vec<f64> {
        let n = self.dim();
        let scale = self.values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let mut x = vec![0.0; n];
        if scale == 0.0 {
            return x;
        }
        for (j, &l) in self.values.iter().enumerate() {
            if l.abs() <= rel_tol * scale {
                continue;
            }
            let v = self.vector(j);
            let c = dot(&v, b) / l;
            for (xi, vi) in x.iter_mut().zip(&v) {
                *xi += c * vi;
            }
        }
        x
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// The input is symmetrized as `(A + Aᵀ)/2` first. Sweeps stop once the
/// off-diagonal Frobenius norm falls below `1e-12 · ‖A‖_F` or after 100
/// sweeps.
pub fn sym_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::InvalidMatrix(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    let scale = m.frobenius_norm();
    let target = OFF_DIAG_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// `M ← Jᵀ M J`, `V ← V J` with the plane rotation on `(p, q)`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// k-th largest eigenvalue of a symmetric matrix (1-based).
pub fn kth_largest_eigenvalue(a: &Matrix, k: usize) -> Result<f64> {
    if k == 0 || k > a.rows() {
        return Err(Error::InvalidInput(format!("k = {k} out of range for {}x{}", a.rows(), a.cols())));
    }
    Ok(sym_eigen(a)?.kth_largest(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_spectrum() {
        let e = sym_eigen(&Matrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let e = sym_eigen(&Matrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(e.vector(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(e.vector(1), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_non_finite_and_non_square() {
        let mut a = Matrix::identity(2);
        a[(0, 1)] = f64::INFINITY;
        assert!(matches!(sym_eigen(&a), Err(Error::InvalidMatrix(_))));
        assert!(sym_eigen(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let r = e.reconstruct().sub(&a).frobenius_norm();
        assert!(r < 1e-14);
    }

    #[test]
    fn asymmetric_input_is_symmetrized() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-14);
        assert!(e.values[1].abs() < 1e-14);
    }

    #[test]
    fn pinv_solve_on_singular_system() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let x = sym_eigen(&a).unwrap().pinv_solve(&[2.0, 2.0], 1e-10);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
