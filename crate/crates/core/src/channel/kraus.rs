use crate::error::{Error, Result};
use crate::linalg::{all_finite, c, kron, max_abs, CMatrix};

use super::Superoperator;

/// Maximum entrywise deviation of `Σ K†K` from the identity.
pub const KRAUS_TP_TOL: f64 = 1e-12;

/// Kraus operators `{K_n}` of a trace-preserving channel `ρ ↦ Σ K_n ρ K_n†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    /// Validates shapes, finiteness, `1 ≤ L ≤ d²` and trace preservation.
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let ks = Self::new_unchecked_tp(operators)?;
        let dev = ks.completeness_deviation();
        if dev > KRAUS_TP_TOL {
            return Err(Error::KrausNotTracePreserving(dev));
        }
        Ok(ks)
    }

    /// Structural checks only; trace preservation is not enforced.
    pub fn new_unchecked_tp(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Dimension("a Kraus set needs at least one operator".into()))?;
        let dim = first.nrows();
        if dim == 0 {
            return Err(Error::Dimension("Kraus operators must be non-empty".into()));
        }
        for (n, k) in operators.iter().enumerate() {
            if k.shape() != (dim, dim) {
                return Err(Error::Dimension(format!(
                    "Kraus operator {n} is {}x{}, expected {dim}x{dim}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if !all_finite(k) {
                return Err(Error::NonFinite("Kraus operator"));
            }
        }
        if operators.len() > dim * dim {
            return Err(Error::Dimension(format!(
                "{} Kraus operators exceed the maximal rank d² = {}",
                operators.len(),
                dim * dim
            )));
        }
        Ok(Self { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, k| acc + k.adjoint() * k);
        max_abs(&(sum - CMatrix::identity(self.dim, self.dim)))
    }

    /// `E(ρ) = Σ K ρ K†`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.operators
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, k| acc + k * rho * k.adjoint())
    }

    /// `Φ = Σ K ⊗ K̄` (row-stacking vectorization).
    pub fn to_superoperator(&self) -> Superoperator {
        let n = self.dim * self.dim;
        let m = self
            .operators
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| acc + kron(k, &k.map(|z| z.conj())));
        Superoperator::new(self.dim, m).expect("shape is d² x d² by construction")
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim: d,
            operators: vec![CMatrix::identity(d, d)],
        }
    }

    /// Qubit bit flip: `{√(1-p) I, √p X}`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("bit-flip probability {p} outside [0, 1]")));
        }
        let k0 = CMatrix::identity(2, 2) * c((1.0 - p).sqrt(), 0.0);
        let s = p.sqrt();
        let k1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
        Self::new(vec![k0, k1])
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("damping {gamma} outside [0, 1]")));
        }
        let k0 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - gamma).sqrt(), 0.0)]);
        let k1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(gamma.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        Self::new(vec![k0, k1])
    }

    /// Qubit depolarizing channel with Bloch contraction `eta`, i.e.
    /// `T = η I₃`, written with the four Pauli Kraus operators.
    /// Valid for `-1/3 ≤ η ≤ 1`.
    pub fn depolarizing(eta: f64) -> Result<Self> {
        if !(-1.0 / 3.0 - 1e-15..=1.0).contains(&eta) {
            return Err(Error::Domain(format!("depolarizing contraction {eta} outside [-1/3, 1]")));
        }
        let w0 = ((1.0 + 3.0 * eta) / 4.0).max(0.0).sqrt();
        let w = ((1.0 - eta) / 4.0).max(0.0).sqrt();
        let paulis = paulis();
        let ops = vec![
            &paulis[0] * c(w0, 0.0),
            &paulis[1] * c(w, 0.0),
            &paulis[2] * c(w, 0.0),
            &paulis[3] * c(w, 0.0),
        ];
        Self::new(ops)
    }
}

/// Unnormalized Pauli matrices `I, X, Y, Z`.
pub(crate) fn paulis() -> [CMatrix; 4] {
    let z0 = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    [
        CMatrix::identity(2, 2),
        CMatrix::from_row_slice(2, 2, &[z0, one, one, z0]),
        CMatrix::from_row_slice(2, 2, &[z0, c(0.0, -1.0), c(0.0, 1.0), z0]),
        CMatrix::from_row_slice(2, 2, &[one, z0, z0, -one]),
    ]
}
