//! Dense numerics: Jacobi eigendecomposition and the rank-one update
//! evaluator that the optimistic scheduler uses for `λ_k(G + θθᵀ)`.
//!
//! ```bash
//! cargo run --release --example spectrum
//! ```

use currlab::numerics::{sym_eigen, Matrix, RankOneSpectrum, RngStream};

fn main() -> currlab::Result<()> {
    let mut rng = RngStream::new(1, 0);
    let a = Matrix::from_vec(5, 5, rng.normals(25))?;
    let g = a.gram();
    let eig = sym_eigen(&g)?;
    println!("eigenvalues {:.4?}", eig.values);
    println!("reconstruction error {:.2e}", eig.reconstruct().sub(&g).frobenius_norm());

    let spec = RankOneSpectrum::new(eig);
    let theta = rng.normals(5);
    let mut updated = g.clone();
    updated.add_outer(1.0, &theta, &theta);
    let full = sym_eigen(&updated)?;
    for k in 1..=5 {
        println!("λ_{k}: rank-one {:.6}  full {:.6}", spec.kth_largest(&theta, k), full.kth_largest(k));
    }
    Ok(())
}
