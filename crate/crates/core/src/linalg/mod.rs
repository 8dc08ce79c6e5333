//! Dense matrix helpers shared by the channel code.
//!
//! Matrices are `nalgebra` dynamic matrices. Vectorization is row-stacking:
//! `vec(ρ)[i·d + j] = ρ[i, j]`, under which `vec(AρB) = (A ⊗ Bᵀ) vec(ρ)`.

mod eigen;
mod matching;

pub use eigen::{eigenvalues, eigenvalues_with, EigenOptions};
pub use matching::bottleneck_distance;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type CVector = DVector<Complex64>;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Row-stacking vectorization of a square matrix.
pub fn vec_rows(m: &CMatrix) -> CVector {
    let (r, cols) = m.shape();
    CVector::from_fn(r * cols, |k, _| m[(k / cols, k % cols)])
}

/// Inverse of [`vec_rows`] for a `d²` vector.
pub fn unvec_rows(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| v[i * d + j])
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues of a Hermitian matrix in increasing order.
///
/// Only the Hermitian part `(A + A†)/2` is used.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Singular values of a real matrix in decreasing order.
pub fn singular_values(m: &RMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Inverse of a real square matrix via LU.
pub fn real_inverse(m: &RMatrix) -> Result<RMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("matrix is singular".into()))
}

/// 2-norm condition number of a real square matrix.
pub fn condition_number(m: &RMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Product of a complex multiset.
pub fn product(values: &[Complex64]) -> Complex64 {
    values.iter().fold(c(1.0, 0.0), |acc, z| acc * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_stacking_matches_kron_identity() {
        // vec(AρB) = (A ⊗ Bᵀ) vec(ρ)
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 0.3), c(0.0, 1.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[c(0.2, 0.0), c(0.0, -1.0), c(3.0, 0.0), c(1.0, 1.0)]);
        let rho = CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let lhs = vec_rows(&(&a * &rho * &b));
        let rhs = kron(&a, &b.transpose()) * vec_rows(&rho);
        assert!((lhs - rhs).norm() < 1e-14);
        assert_eq!(unvec_rows(&vec_rows(&rho), 2), rho);
    }

    #[test]
    fn singular_values_examples() {
        assert_eq!(singular_values(&RMatrix::identity(3, 3)), vec![1.0, 1.0, 1.0]);
        let s = singular_values(&RMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.5, -0.5])));
        assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] - 0.5).abs() < 1e-15 && (s[2] - 0.5).abs() < 1e-15);
        let nil = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let s = singular_values(&nil);
        assert!((s[0] - 1.0).abs() < 1e-15 && s[1].abs() < 1e-15);
    }

    #[test]
    fn singular_values_square_to_gram_eigenvalues() {
        let m = RMatrix::from_row_slice(3, 3, &[0.3, -1.2, 0.4, 2.0, 0.1, 0.0, -0.7, 0.5, 1.1]);
        let s = singular_values(&m);
        let gram = to_complex(&(m.transpose() * &m));
        let mut ev = hermitian_eigenvalues(&gram);
        ev.reverse();
        for (si, ei) in s.iter().zip(ev) {
            assert!((si * si - ei).abs() < 1e-10);
        }
    }
}
