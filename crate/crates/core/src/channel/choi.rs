use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_deviation, CMatrix};

use super::Superoperator;

const CHOI_HERMITIAN_TOL: f64 = 1e-8;

/// `J = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)`; the channel is completely positive iff
/// `J ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: CMatrix,
}

impl ChoiMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Increasing eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > tol).count()
    }
}

/// Reshuffles a row-stacked superoperator:
/// `J[(i,a),(j,b)] = Φ[(a,b),(i,j)]`.
pub fn choi_matrix(phi: &Superoperator) -> ChoiMatrix {
    let d = phi.dim();
    let m = phi.matrix();
    let j = CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, a) = (row / d, row % d);
        let (jj, b) = (col / d, col % d);
        m[(a * d + b, i * d + jj)]
    });
    ChoiMatrix { dim: d, matrix: j }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpReport {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

/// Default PSD slack on the minimal Choi eigenvalue: `1e-10 · d`.
pub fn default_cp_tolerance(d: usize) -> f64 {
    1e-10 * d as f64
}

/// Choi-matrix positivity test: CP iff the minimal eigenvalue is `≥ -tol`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
pub fn is_completely_positive(phi: &Superoperator, tol: f64) -> Result<CpReport> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("CP tolerance must be positive, got {tol}")));
    }
    let choi = choi_matrix(phi);
    let herm = hermiticity_deviation(choi.matrix());
    if herm > CHOI_HERMITIAN_TOL {
        return Err(Error::NonHermitianChoi(herm));
    }
    let min = choi.eigenvalues().first().copied().unwrap_or(0.0);
    Ok(CpReport {
        completely_positive: min >= -tol,
        min_eigenvalue: min,
        tolerance: tol,
    })
}
