use serde::{Deserialize, Serialize};

use crate::linalg::{c, vec_rows, CMatrix};

/// The fixed Hermitian orthonormal operator basis used for transfer matrices.
///
/// `B₀ = 𝟙/√d`, then for every pair `j < k` (lexicographic) the symmetric
/// element `(|j⟩⟨k| + |k⟩⟨j|)/√2`, then for every pair the antisymmetric
/// element `(-i|j⟩⟨k| + i|k⟩⟨j|)/√2`, then the diagonal elements
/// `(Σ_{m<l} |m⟩⟨m| − l|l⟩⟨l|)/√(l(l+1))` for `l = 1..d-1`.
/// For `d = 2` this is `{I, X, Y, Z}/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisId {
    PauliNormalized,
    GellMannNormalized,
}

impl BasisId {
    pub fn for_dim(d: usize) -> Self {
        if d == 2 {
            BasisId::PauliNormalized
        } else {
            BasisId::GellMannNormalized
        }
    }
}

pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d);
    out.push(CMatrix::identity(d, d) * c(1.0 / (d as f64).sqrt(), 0.0));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = c(r, 0.0);
        m[(k, j)] = c(r, 0.0);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = c(0.0, -r);
        m[(k, j)] = c(0.0, r);
        out.push(m);
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = c(norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    out
}

/// Unitary whose columns are the row-stacked basis elements, so that the
/// transfer matrix is `U† Φ U`.
pub fn basis_change(d: usize) -> CMatrix {
    let basis = hermitian_basis(d);
    let n = d * d;
    let mut u = CMatrix::zeros(n, n);
    for (j, b) in basis.iter().enumerate() {
        u.set_column(j, &vec_rows(b));
    }
    u
}
