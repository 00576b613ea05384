//! Dense complex linear algebra on top of nalgebra.

use nalgebra::DMatrix;

use crate::complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvector matrices with a larger condition number count as defective.
pub const MAX_EIGVEC_COND: f64 = 1e10;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn min_singular_value(m: &CMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    m.clone().try_inverse()
}

pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    m.clone().schur().unpack().1.diagonal().iter().copied().collect()
}

/// Eigenvalues with unit eigenvectors as columns, or `None` when the matrix is
/// defective to working precision.
///
/// Eigenvectors of the Schur factor are found by back substitution; a
/// vanishing pivot with a nonvanishing right side signals a Jordan block.
pub fn eigen_decomposition(m: &CMatrix) -> (Vec<Complex64>, Option<CMatrix>) {
    let n = m.nrows();
    let (q, t) = m.clone().schur().unpack();
    let values: Vec<Complex64> = t.diagonal().iter().copied().collect();
    let scale = spectral_norm(&t).max(f64::MIN_POSITIVE);
    let tiny = 1e-13 * scale;
    let mut y = CMatrix::zeros(n, n);
    for i in 0..n {
        let lambda = values[i];
        y[(i, i)] = Complex64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let rhs: Complex64 = (j + 1..=i).map(|k| t[(j, k)] * y[(k, i)]).sum();
            let pivot = t[(j, j)] - lambda;
            if pivot.norm() <= tiny {
                if rhs.norm() <= 1e-10 * scale {
                    y[(j, i)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                return (values, None);
            }
            y[(j, i)] = -rhs / pivot;
        }
    }
    let mut v = q * y;
    for mut col in v.column_iter_mut() {
        let norm = col.norm();
        col /= Complex64::new(norm, 0.0);
    }
    if condition_number(&v) > MAX_EIGVEC_COND {
        return (values, None);
    }
    (values, Some(v))
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular values fall below `rel_tol·σ_max`.
pub fn kernel_basis(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let sv = &svd.singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let v_t = svd.v_t.expect("requested V^*");
    let mut cols: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= rel_tol * max).collect();
    if max == 0.0 {
        cols = (0..sv.len()).collect();
    }
    // A square input has as many singular values as columns; wide inputs
    // would need the null rows of a full V, which never arise here.
    debug_assert_eq!(sv.len(), n);
    let mut basis = CMatrix::zeros(n, cols.len());
    for (c, &i) in cols.iter().enumerate() {
        for r in 0..n {
            basis[(r, c)] = v_t[(i, r)].conj();
        }
    }
    basis
}

/// `‖(I − PP*)TP‖` for an orthonormal `P`.
pub fn invariance_residual(t: &CMatrix, p: &CMatrix) -> f64 {
    if p.ncols() == 0 {
        return 0.0;
    }
    let tp = t * p;
    let proj = p * (p.adjoint() * &tp);
    spectral_norm(&(tp - proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigen_of_triangular_and_normal() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let (vals, vecs) = eigen_decomposition(&m);
        let v = vecs.expect("diagonalizable");
        for (i, l) in vals.iter().enumerate() {
            let col = v.column(i);
            let res = &m * col - col * *l;
            assert!(res.norm() < 1e-12);
        }
        let jordan = CMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)]);
        assert!(eigen_decomposition(&jordan).1.is_none());
        let scalar = identity(3) * c(0.5, 0.2);
        assert!(eigen_decomposition(&scalar).1.is_some());
    }

    #[test]
    fn kernel_of_projector() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let k = kernel_basis(&m, 1e-10);
        assert_eq!(k.ncols(), 1);
        assert!((k[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert_eq!(kernel_basis(&CMatrix::zeros(3, 3), 1e-10).ncols(), 3);
        assert!(invariance_residual(&m, &k) < 1e-14);
    }

    #[test]
    fn norms() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)]);
        assert!((spectral_norm(&m) - 2.0).abs() < 1e-14);
        assert!((min_singular_value(&m) - 0.5).abs() < 1e-14);
        assert!((condition_number(&m) - 4.0).abs() < 1e-13);
    }
}
