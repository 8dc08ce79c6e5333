use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{all_finite, max_imag, real_part, CMatrix};

use super::{basis_change, ChoiMatrix, Spectrum, TransferMatrix, TP_TOL};

/// A channel as a `d² x d²` matrix acting on row-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if dim == 0 || matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "superoperator for d = {dim} must be {n}x{n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !all_finite(&matrix) {
            return Err(Error::NonFinite("superoperator"));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Sequential composition: `self ∘ other` (other acts first).
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("cannot compose d = {} with d = {}", self.dim, other.dim)));
        }
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Convex combination `p·self + (1 − p)·other`.
    pub fn mix(&self, other: &Superoperator, p: f64) -> Result<Superoperator> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("cannot mix d = {} with d = {}", self.dim, other.dim)));
        }
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * Complex64::new(p, 0.0) + &other.matrix * Complex64::new(1.0 - p, 0.0),
        })
    }

    /// Frobenius distance between the two matrices.
    pub fn distance(&self, other: &Superoperator) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).norm()
    }

    /// `U† Φ U` in the fixed Hermitian basis, without any checks.
    pub fn transfer_complex(&self) -> CMatrix {
        let u = basis_change(self.dim);
        u.adjoint() * &self.matrix * &u
    }

    /// Real block form `(1 0; k T)`.
    ///
    /// Fails with [`Error::NotTracePreserving`] when the first row deviates from
    /// `(1, 0, …, 0)` by more than `1e-8`, and with
    /// [`Error::NonHermitianImage`] when the imaginary residue exceeds `1e-8`.
    pub fn to_transfer(&self) -> Result<TransferMatrix> {
        let r = self.transfer_complex();
        let n = self.dim * self.dim;
        let mut first_dev = (r[(0, 0)] - Complex64::new(1.0, 0.0)).norm();
        for j in 1..n {
            first_dev = first_dev.max(r[(0, j)].norm());
        }
        if first_dev > TP_TOL {
            return Err(Error::NotTracePreserving(first_dev));
        }
        let imag = max_imag(&r);
        if imag > TP_TOL {
            return Err(Error::NonHermitianImage(imag));
        }
        TransferMatrix::from_full(self.dim, &real_part(&r))
    }

    pub fn choi(&self) -> ChoiMatrix {
        super::choi_matrix(self)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::of(self)
    }

    /// Largest deviation of the transfer-matrix first row from `(1, 0, …, 0)`.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let r = self.transfer_complex();
        r.row(0)
            .iter()
            .enumerate()
            .map(|(j, z)| if j == 0 { (z - Complex64::new(1.0, 0.0)).norm() } else { z.norm() })
            .fold(0.0, f64::max)
    }
}
