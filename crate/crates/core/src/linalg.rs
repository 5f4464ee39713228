//! Small dense linear-algebra helpers shared by the eigenstructure and
//! profile machinery.

use crate::error::{CoreError, Result};
use nalgebra::{DMatrix, DVector};

/// Solve the symmetric-definite generalized eigenproblem K v = lambda M v
/// with K symmetric and M symmetric positive definite.
///
/// Returns eigenvalues in ascending order with eigenvectors normalized so
/// that (M v_i) . v_j = delta_ij. This is the natural normalization for
/// entropy-symmetrizable flux Jacobians (M = entropy Hessian).
pub fn symmetric_pencil_eigen(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let n = k.nrows();
    assert_eq!(k.shape(), (n, n));
    assert_eq!(m.shape(), (n, n));
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| CoreError::NotPositiveDefinite("pencil mass matrix".into()))?;
    let l = chol.l();
    // A = L^{-1} K L^{-T}, built in two triangular solves.
    let x = l
        .solve_lower_triangular(k)
        .ok_or_else(|| CoreError::NotPositiveDefinite("singular Cholesky factor".into()))?;
    let a_t = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| CoreError::NotPositiveDefinite("singular Cholesky factor".into()))?;
    let mut a = a_t.transpose();
    // symmetrize roundoff
    let a_sym = 0.5 * (&a + a.transpose());
    a = a_sym;
    let se = a.symmetric_eigen();
    let lt = l.transpose();
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..n)
        .map(|i| {
            let y = se.eigenvectors.column(i).into_owned();
            let v = lt
                .solve_upper_triangular(&y)
                .expect("upper triangular solve with nonsingular factor");
            (se.eigenvalues[i], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(pairs.into_iter().unzip())
}

/// Cholesky-based positive definiteness test for a symmetric part of `b`.
pub fn is_positive_definite(b: &DMatrix<f64>) -> bool {
    let sym = 0.5 * (b + b.transpose());
    sym.cholesky().is_some()
}

/// Row-major n x n matrix times vector, into `out`.
#[inline]
pub fn matvec(a: &[f64], x: &[f64], n: usize, out: &mut [f64]) {
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += a[i * n + j] * x[j];
        }
        out[i] = s;
    }
}

/// Infinity norm of a row-major n x n matrix product A * B (upper bound for
/// the spectral radius of the product).
pub fn product_inf_norm(a: &[f64], b: &[f64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += a[i * n + k] * b[k * n + j];
            }
            row += s.abs();
        }
        worst = worst.max(row);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pencil_reduces_to_plain_eigen_for_identity_mass() {
        let k = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let m = DMatrix::identity(2, 2);
        let (lams, vecs) = symmetric_pencil_eigen(&k, &m).unwrap();
        // eigenvalues of [[2,1],[1,3]] are (5 +/- sqrt(5))/2
        let lo = (5.0 - 5.0f64.sqrt()) / 2.0;
        let hi = (5.0 + 5.0f64.sqrt()) / 2.0;
        assert!((lams[0] - lo).abs() < 1e-12);
        assert!((lams[1] - hi).abs() < 1e-12);
        for (lam, v) in lams.iter().zip(&vecs) {
            let r = &k * v - *lam * v;
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn pencil_normalization_is_m_orthonormal() {
        let k = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 0.0]);
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let (_lams, vecs) = symmetric_pencil_eigen(&k, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let q = (&m * &vecs[i]).dot(&vecs[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((q - want).abs() < 1e-12);
            }
        }
    }
}
