use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{to_complex, RMatrix};

use super::{basis_change, BasisId, Superoperator, TP_TOL};

/// Real block form `(1 0; k T)` of a trace-preserving, Hermiticity-preserving
/// channel in the fixed basis identified by `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    dim: usize,
    translation: DVector<f64>,
    bloch_map: RMatrix,
    basis: BasisId,
}

impl TransferMatrix {
    pub fn new(dim: usize, translation: DVector<f64>, bloch_map: RMatrix) -> Result<Self> {
        let m = dim * dim - 1;
        if dim < 2 || translation.len() != m || bloch_map.shape() != (m, m) {
            return Err(Error::Dimension(format!(
                "transfer matrix for d = {dim} needs k of length {m} and a {m}x{m} T, got {} and {}x{}",
                translation.len(),
                bloch_map.nrows(),
                bloch_map.ncols()
            )));
        }
        if !translation.iter().chain(bloch_map.iter()).all(|x| x.is_finite()) {
            return Err(Error::NonFinite("transfer matrix"));
        }
        Ok(Self {
            dim,
            translation,
            bloch_map,
            basis: BasisId::for_dim(dim),
        })
    }

    /// Unital channel `k = 0` with the given Bloch map.
    pub fn unital(dim: usize, bloch_map: RMatrix) -> Result<Self> {
        Self::new(dim, DVector::zeros(dim * dim - 1), bloch_map)
    }

    /// Splits a full `d² x d²` real matrix; its first row must be
    /// `(1, 0, …, 0)` within `1e-8` and is then set exactly.
    pub fn from_full(dim: usize, full: &RMatrix) -> Result<Self> {
        let n = dim * dim;
        if full.shape() != (n, n) {
            return Err(Error::Dimension(format!("expected {n}x{n}, got {}x{}", full.nrows(), full.ncols())));
        }
        let mut dev = (full[(0, 0)] - 1.0).abs();
        for j in 1..n {
            dev = dev.max(full[(0, j)].abs());
        }
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        let k = full.view((1, 0), (n - 1, 1)).column(0).into_owned();
        let t = full.view((1, 1), (n - 1, n - 1)).into_owned();
        Self::new(dim, k, t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    /// Non-unitality vector `k`.
    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    /// Bloch map `T`.
    pub fn bloch_map(&self) -> &RMatrix {
        &self.bloch_map
    }

    pub fn translation_norm_sqr(&self) -> f64 {
        self.translation.norm_squared()
    }

    /// Full `d² x d²` matrix with first row exactly `(1, 0, …, 0)`.
    pub fn full(&self) -> RMatrix {
        let n = self.dim * self.dim;
        let mut r = RMatrix::zeros(n, n);
        r[(0, 0)] = 1.0;
        r.view_mut((1, 0), (n - 1, 1)).copy_from(&self.translation);
        r.view_mut((1, 1), (n - 1, n - 1)).copy_from(&self.bloch_map);
        r
    }

    pub fn to_superoperator(&self) -> Superoperator {
        let u = basis_change(self.dim);
        let m = &u * to_complex(&self.full()) * u.adjoint();
        Superoperator::new(self.dim, m).expect("shape fixed by construction")
    }

    /// Determinant of the Bloch map.
    pub fn det_bloch(&self) -> f64 {
        self.bloch_map.determinant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausSet;
    use crate::linalg::{c, max_abs, CMatrix};

    fn diag3(a: f64, b: f64, cc: f64) -> RMatrix {
        RMatrix::from_diagonal(&DVector::from_vec(vec![a, b, cc]))
    }

    fn assert_close(a: &RMatrix, b: &RMatrix, tol: f64) {
        let d = (a - b).iter().map(|x| x.abs()).fold(0.0, f64::max);
        assert!(d <= tol, "deviation {d:e}\n{a}\n{b}");
    }

    #[test]
    fn identity_channel() {
        let tm = Superoperator::identity(2).to_transfer().unwrap();
        assert_eq!(tm.translation(), &DVector::zeros(3));
        assert_close(tm.bloch_map(), &RMatrix::identity(3, 3), 1e-15);
        assert_eq!(tm.basis(), BasisId::PauliNormalized);
    }

    #[test]
    fn bit_flip_quarter() {
        let tm = KrausSet::bit_flip(0.25).unwrap().to_superoperator().to_transfer().unwrap();
        assert!(tm.translation().norm() < 1e-15);
        assert_close(tm.bloch_map(), &diag3(1.0, 0.5, 0.5), 1e-15);
    }

    #[test]
    fn amplitude_damping_half() {
        let tm = KrausSet::amplitude_damping(0.5).unwrap().to_superoperator().to_transfer().unwrap();
        let k = tm.translation();
        assert!(k[0].abs() < 1e-15 && k[1].abs() < 1e-15 && (k[2] - 0.5).abs() < 1e-15);
        let r = 0.5f64.sqrt();
        assert_close(tm.bloch_map(), &diag3(r, r, 0.5), 1e-15);
    }

    #[test]
    fn completely_depolarizing() {
        let tm = KrausSet::depolarizing(0.0).unwrap().to_superoperator().to_transfer().unwrap();
        assert!(tm.translation().norm() < 1e-15);
        assert_close(tm.bloch_map(), &RMatrix::zeros(3, 3), 1e-15);
    }

    #[test]
    fn inverse_basis_change() {
        let id = TransferMatrix::unital(2, RMatrix::identity(3, 3)).unwrap().to_superoperator();
        assert!(max_abs(&(id.matrix() - CMatrix::identity(4, 4))) < 1e-15);
        let bf = TransferMatrix::unital(2, diag3(1.0, 0.5, 0.5)).unwrap().to_superoperator();
        let want = KrausSet::bit_flip(0.25).unwrap().to_superoperator();
        assert!(max_abs(&(bf.matrix() - want.matrix())) < 1e-15);
    }

    #[test]
    fn best_approximate_not_round_trip() {
        let tm = TransferMatrix::unital(2, diag3(-1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0)).unwrap();
        let phi = tm.to_superoperator();
        let back = phi.to_transfer().unwrap();
        assert_close(&back.full(), &tm.full(), 1e-15);
        let v0 = phi.matrix().column(0).into_owned();
        // |0⟩⟨0| ↦ (I − Z/3)/2 = diag(1/3, 2/3)
        assert!((v0[0] - c(1.0 / 3.0, 0.0)).norm() < 1e-15 && (v0[3] - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn from_full_rejects_bad_first_row() {
        let mut r = RMatrix::identity(4, 4);
        r[(0, 2)] = 1e-6;
        assert!(matches!(TransferMatrix::from_full(2, &r), Err(Error::NotTracePreserving(_))));
        r[(0, 2)] = 1e-10;
        let tm = TransferMatrix::from_full(2, &r).unwrap();
        assert_eq!(tm.full()[(0, 2)], 0.0);
    }
}
