//! Necessary complete-positivity criteria for qubit channels expressed
//! through gauge-invariant data, together with the exact conditions on the
//! singular-value parametrization `T = O₁ diag(η) O₂ᵀ` they are derived from.
//!
//! Verdicts coming from spectra alone can refute complete positivity but
//! never certify it; the exception is a normal Bloch map, where the
//! spectral conditions coincide with the exact ones.

mod zsearch;

pub use zsearch::{nelder_mead_max, z_feasibility, z_feasibility_with, ZFeasibility, ZSearchOptions, ZWitness};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::Spectrum;
use crate::error::{Error, Result};
use crate::linalg::RMatrix;

/// A verdict is satisfied iff its margin is at least `-VERDICT_TOL`.
pub const VERDICT_TOL: f64 = 1e-12;
/// `|det T|` below this is treated as zero and both branches are evaluated.
pub const DET_ZERO_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `det T > 0` (or a positive eigenvalue product)
    Positive,
    /// `det T < 0`
    Negative,
    /// `|det T|` inside the zero band; the larger branch margin is reported.
    Zero,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetSign {
    Positive,
    Zero,
    Negative,
}

impl DetSign {
    pub fn of(value: f64) -> Self {
        if value.abs() < DET_ZERO_BAND {
            DetSign::Zero
        } else if value > 0.0 {
            DetSign::Positive
        } else {
            DetSign::Negative
        }
    }

    fn branch(self) -> Branch {
        match self {
            DetSign::Positive => Branch::Positive,
            DetSign::Zero => Branch::Zero,
            DetSign::Negative => Branch::Negative,
        }
    }

    pub(crate) fn factor(self) -> f64 {
        match self {
            DetSign::Positive => 1.0,
            DetSign::Zero => 0.0,
            DetSign::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: String,
    pub satisfied: bool,
    /// Smallest slack among the inequalities tested; negative when violated.
    pub margin: f64,
    pub branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ZWitness>,
}

impl CriterionVerdict {
    pub fn from_margin(criterion: &str, margin: f64, branch: Branch) -> Self {
        Self {
            criterion: criterion.to_string(),
            satisfied: margin >= -VERDICT_TOL,
            margin,
            branch,
            witness: None,
        }
    }
}

/// Signed parameters `η` of `T = O₁ diag(η) O₂ᵀ` with `O₁, O₂ ∈ SO(3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaTriple(pub [f64; 3]);

impl EtaTriple {
    pub fn new(e1: f64, e2: f64, e3: f64) -> Self {
        Self([e1, e2, e3])
    }

    pub fn det(&self) -> f64 {
        self.0[0] * self.0[1] * self.0[2]
    }

    pub fn singular(&self) -> SingularTriple {
        SingularTriple::new(self.0[0].abs(), self.0[1].abs(), self.0[2].abs()).expect("absolute values are valid")
    }
}

/// Singular values `s₁ ≥ s₂ ≥ s₃ ≥ 0`, sorted on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularTriple(pub(crate) [f64; 3]);

impl SingularTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let mut s = [a, b, c];
        if s.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain(format!("singular values must be finite and non-negative, got {s:?}")));
        }
        s.sort_by(|x, y| y.total_cmp(x));
        Ok(Self(s))
    }

    pub fn values(&self) -> [f64; 3] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }

    pub fn min(&self) -> f64 {
        self.0[2]
    }
}

/// Signed SVD of a real 3x3 Bloch map: `T = O₁ diag(η) O₂ᵀ` with both
/// rotations in SO(3).
pub fn eta_decomposition(t: &RMatrix) -> Result<(EtaTriple, RMatrix, RMatrix)> {
    if t.shape() != (3, 3) {
        return Err(Error::Dimension(format!("qubit Bloch map must be 3x3, got {}x{}", t.nrows(), t.ncols())));
    }
    let svd = t.clone().svd(true, true);
    let mut u = svd.u.ok_or_else(|| Error::Numeric("SVD without U".into()))?;
    let mut v = svd.v_t.ok_or_else(|| Error::Numeric("SVD without Vᵀ".into()))?.transpose();
    let mut eta = [svd.singular_values[0], svd.singular_values[1], svd.singular_values[2]];
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        eta[2] = -eta[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        eta[2] = -eta[2];
    }
    Ok((EtaTriple(eta), u, v))
}

/// Exact CP conditions for a unital qubit channel:
/// `1 + η₃ ≥ |η₁ + η₂|` and `1 − η₃ ≥ |η₁ − η₂|`.
pub fn fa_conditions(eta: EtaTriple) -> CriterionVerdict {
    let [e1, e2, e3] = eta.0;
    let margin = (1.0 + e3 - (e1 + e2).abs()).min(1.0 - e3 - (e1 - e2).abs());
    CriterionVerdict::from_margin("fa_conditions", margin, Branch::None)
}

fn fa_singular_margin(s: &SingularTriple, sign: DetSign) -> f64 {
    let pos = 1.0 - s.sum() + 2.0 * s.min();
    let neg = 1.0 - s.sum();
    match sign {
        DetSign::Positive => pos,
        DetSign::Negative => neg,
        DetSign::Zero => pos.max(neg),
    }
}

/// The same conditions written in singular values and the sign of `det T`:
/// `1 − Σs + 2 min s ≥ 0` for `det T ≥ 0`, `1 − Σs ≥ 0` for `det T ≤ 0`.
pub fn fa_singular(s: SingularTriple, det_sign: DetSign) -> CriterionVerdict {
    CriterionVerdict::from_margin("fa_singular", fa_singular_margin(&s, det_sign), det_sign.branch())
}

fn require_qubit(sp: &Spectrum) -> Result<()> {
    if sp.dim() != 2 {
        return Err(Error::UnsupportedDimension(sp.dim()));
    }
    Ok(())
}

/// Real part of `λ₁λ₂λ₃` (real for conjugation-closed spectra).
fn eigen_product(sp: &Spectrum) -> f64 {
    sp.non_unit_product().re
}

/// Gauge-invariant necessary CP criterion on the moduli `mᵢ = |λᵢ|` of the
/// non-unit eigenvalues and their product `P`:
/// `1 − Σm + 2 min m ≥ 0` if `P ≥ 0`, `1 − Σm ≥ 0` if `P < 0`.
///
/// Holds for unital and non-unital qubit channels. A violation certifies the
/// spectrum cannot belong to a CP map; satisfaction is inconclusive.
pub fn theorem1(sp: &Spectrum) -> Result<CriterionVerdict> {
    require_qubit(sp)?;
    let m = sp.moduli();
    let sum: f64 = m.iter().sum();
    let min = m.iter().copied().fold(f64::INFINITY, f64::min);
    let sign = DetSign::of(eigen_product(sp));
    let pos = 1.0 - sum + 2.0 * min;
    let neg = 1.0 - sum;
    let margin = match sign {
        DetSign::Positive => pos,
        DetSign::Negative => neg,
        DetSign::Zero => pos.max(neg),
    };
    Ok(CriterionVerdict::from_margin("theorem1", margin, sign.branch()))
}

/// All-real qubit spectra: the four tetrahedron faces
/// `1 + l₁ + l₂ + l₃`, `1 + l₁ − l₂ − l₃`, `1 − l₁ + l₂ − l₃`, `1 − l₁ − l₂ + l₃`.
pub fn real_tetrahedron(l1: f64, l2: f64, l3: f64) -> CriterionVerdict {
    let margin = tetrahedron_slacks(l1, l2, l3).into_iter().fold(f64::INFINITY, f64::min);
    CriterionVerdict::from_margin("real_tetrahedron", margin, Branch::None)
}

pub(crate) fn tetrahedron_slacks(l1: f64, l2: f64, l3: f64) -> [f64; 4] {
    [
        1.0 + l1 + l2 + l3,
        1.0 + l1 - l2 - l3,
        1.0 - l1 + l2 - l3,
        1.0 - l1 - l2 + l3,
    ]
}

/// Spectra `{1, x, z, z̄}`: `|z| ≤ (1 + x)/2`.
pub fn complex_pair_disc(x: f64, z: Complex64) -> CriterionVerdict {
    let disc = (1.0 + x) / 2.0 - z.norm();
    let margin = if x.abs() <= 1.0 { disc } else { disc.min(1.0 - x.abs()) };
    CriterionVerdict::from_margin("complex_pair_disc", margin, Branch::None)
}

/// `-1/27 ≤ λ₁λ₂λ₃ ≤ 1`.
pub fn det_range_check(sp: &Spectrum) -> Result<CriterionVerdict> {
    require_qubit(sp)?;
    let p = eigen_product(sp);
    let margin = (p + 1.0 / 27.0).min(1.0 - p);
    Ok(CriterionVerdict::from_margin("det_range", margin, DetSign::of(p).branch()))
}

/// Upper bound on `‖k‖²` implied by complete positivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "bound", rename_all = "snake_case")]
pub enum KNormBound {
    /// `‖k‖² ≤ B`; `B = 0` forces the channel to be unital.
    Bound(f64),
    /// `B < 0`: no CP channel has this spectrum.
    Infeasible(f64),
}

impl KNormBound {
    pub fn value(&self) -> f64 {
        match *self {
            KNormBound::Bound(b) | KNormBound::Infeasible(b) => b,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, KNormBound::Bound(_))
    }

    /// Verdict against a known `‖k‖²` (gauge dependent), or against `0` when
    /// only the spectrum is available.
    pub fn verdict(&self, k_norm_sqr: Option<f64>) -> CriterionVerdict {
        let margin = self.value() - k_norm_sqr.unwrap_or(0.0);
        CriterionVerdict::from_margin("k_norm_bound", margin, Branch::None)
    }
}

/// `B = 1 − |λ₁|² − |λ₂|² − |λ₃|² + 2λ₁λ₂λ₃`.
pub fn k_norm_bound(sp: &Spectrum) -> Result<KNormBound> {
    require_qubit(sp)?;
    let b = 1.0 - sp.moduli().iter().map(|m| m * m).sum::<f64>() + 2.0 * eigen_product(sp);
    Ok(if b < -VERDICT_TOL {
        KNormBound::Infeasible(b)
    } else {
        KNormBound::Bound(b)
    })
}

/// `q(η) = (1+η₁+η₂+η₃)(1+η₁−η₂−η₃)(1−η₁+η₂−η₃)(1−η₁−η₂+η₃)`.
pub fn q_product(eta: [f64; 3]) -> f64 {
    let [a, b, c] = eta;
    tetrahedron_slacks(a, b, c).iter().product()
}

fn z_k_terms(sq: [f64; 3], k: [f64; 3]) -> f64 {
    let kk: f64 = k.iter().map(|x| x * x).sum();
    let cross: f64 = (0..3).map(|i| sq[i] * (2.0 * k[i] * k[i] - kk)).sum();
    kk * kk - 2.0 * kk - 2.0 * cross
}

/// `Z(η) = ‖k‖⁴ − 2‖k‖² − 2Σηᵢ²(2kᵢ² − ‖k‖²) + q(η)`, with `k` expressed in
/// the frame where `T` is diagonal.
pub fn z_value(eta: EtaTriple, k: [f64; 3]) -> f64 {
    let e = eta.0;
    z_k_terms([e[0] * e[0], e[1] * e[1], e[2] * e[2]], k) + q_product(e)
}

/// Non-unital qubit CP condition `Z(η) ≥ 0`.
pub fn z_condition(eta: EtaTriple, k: [f64; 3]) -> CriterionVerdict {
    CriterionVerdict::from_margin("z_condition", z_value(eta, k), Branch::None)
}

pub(crate) fn z_singular_margin(s: &SingularTriple, k: [f64; 3], sign: DetSign) -> f64 {
    let v = s.values();
    let base = z_k_terms([v[0] * v[0], v[1] * v[1], v[2] * v[2]], k) + q_product(v);
    // q(η) = q(s) for det T ≥ 0 and q(η) = q(s) − 16 s₁s₂s₃ = q(s) + 16 det T
    // for det T ≤ 0.
    let neg = base - 16.0 * s.product();
    match sign {
        DetSign::Positive => base,
        DetSign::Negative => neg,
        DetSign::Zero => base.max(neg),
    }
}

/// `Z ≥ 0` written in singular values: `Z(s) ≥ 0` for `det T ≥ 0` and
/// `Z(s) + 16 det T ≥ 0` for `det T ≤ 0`, where `kᵢ` pairs with `sᵢ`.
pub fn z_condition_singular(s: SingularTriple, k: [f64; 3], det_sign: DetSign) -> CriterionVerdict {
    CriterionVerdict::from_margin("z_condition_singular", z_singular_margin(&s, k, det_sign), det_sign.branch())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{KrausSet, Superoperator};
    use crate::linalg::c;

    const THIRD: f64 = 1.0 / 3.0;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn fa_examples() {
        let v = fa_conditions(EtaTriple::new(1.0, 1.0, 1.0));
        assert!(v.satisfied && approx(v.margin, 0.0));
        let v = fa_conditions(EtaTriple::new(1.0, 1.0, -1.0));
        assert!(!v.satisfied);
        assert!(approx(v.margin, -2.0));
        let v = fa_conditions(EtaTriple::new(-THIRD, -THIRD, -THIRD));
        assert!(v.satisfied && approx(v.margin, 0.0));
    }

    #[test]
    fn fa_singular_examples() {
        let v = fa_singular(SingularTriple::new(1.0, 1.0, 1.0).unwrap(), DetSign::Positive);
        assert!(v.satisfied && approx(v.margin, 0.0));
        let v = fa_singular(SingularTriple::new(THIRD, THIRD, THIRD).unwrap(), DetSign::Negative);
        assert!(v.satisfied && approx(v.margin, 0.0));
        let v = fa_singular(SingularTriple::new(0.9, 0.9, 0.1).unwrap(), DetSign::Negative);
        assert!(!v.satisfied && approx(v.margin, -0.9));
    }

    #[test]
    fn singular_triple_sorts_and_validates() {
        assert_eq!(SingularTriple::new(0.1, 0.9, 0.5).unwrap().values(), [0.9, 0.5, 0.1]);
        assert!(SingularTriple::new(-0.1, 0.2, 0.3).is_err());
    }

    #[test]
    fn table_one_sign_patterns() {
        // Every sign assignment of (s₁, s₂, s₃) maps onto the branch given by Π sign.
        let s = [0.7, 0.5, 0.2];
        for mask in 0..8 {
            let sg = |b: usize| if mask & (1 << b) != 0 { -1.0 } else { 1.0 };
            let eta = EtaTriple::new(sg(0) * s[0], sg(1) * s[1], sg(2) * s[2]);
            let a = fa_conditions(eta);
            let b = fa_singular(eta.singular(), DetSign::of(eta.det()));
            assert_eq!(a.satisfied, b.satisfied, "mask {mask}");
            assert!(approx(a.margin, b.margin), "mask {mask}: {} vs {}", a.margin, b.margin);
        }
    }

    #[test]
    fn theorem1_examples() {
        let v = theorem1(&Spectrum::qubit_real(0.9, 0.9, 0.9).unwrap()).unwrap();
        assert!(v.satisfied && (v.margin - 0.1).abs() < 1e-14);
        assert_eq!(v.branch, Branch::Positive);

        let v = theorem1(&Spectrum::qubit_real(-0.5, 0.4, 0.3).unwrap()).unwrap();
        assert!(!v.satisfied && (v.margin + 0.2).abs() < 1e-14);
        assert_eq!(v.branch, Branch::Negative);

        let z = Complex64::from_polar(0.5, std::f64::consts::FRAC_PI_3);
        let v = theorem1(&Spectrum::qubit(c(0.4, 0.0), z, z.conj()).unwrap()).unwrap();
        assert!(v.satisfied && (v.margin - 0.4).abs() < 1e-14);
    }

    #[test]
    fn theorem1_rejects_other_dimensions() {
        let sp = Spectrum::of(&Superoperator::identity(3)).unwrap();
        assert!(matches!(theorem1(&sp), Err(Error::UnsupportedDimension(3))));
        assert!(det_range_check(&sp).is_err());
        assert!(k_norm_bound(&sp).is_err());
    }

    #[test]
    fn tetrahedron_examples() {
        let v = real_tetrahedron(1.0, 1.0, 1.0);
        assert!(v.satisfied && v.margin == 0.0);
        let v = real_tetrahedron(-1.0, -1.0, -1.0);
        assert!(!v.satisfied && v.margin == -2.0);
        let v = real_tetrahedron(-THIRD, -THIRD, -THIRD);
        assert!(v.satisfied && approx(v.margin, 0.0));
        let slacks = tetrahedron_slacks(-THIRD, -THIRD, -THIRD);
        assert!(approx(slacks[0], 0.0) && slacks[1..].iter().all(|s| approx(*s, 4.0 / 3.0)));
    }

    #[test]
    fn disc_examples() {
        let v = complex_pair_disc(1.0, Complex64::from_polar(1.0, 0.7));
        assert!(v.satisfied && v.margin.abs() < 1e-15);
        let v = complex_pair_disc(0.4, Complex64::from_polar(0.7, 1.1));
        assert!(v.satisfied && v.margin.abs() < 1e-15);
        let v = complex_pair_disc(-0.4, c(0.0, 0.5));
        assert!(!v.satisfied && (v.margin + 0.2).abs() < 1e-15);
        assert!(!complex_pair_disc(1.5, c(0.0, 0.1)).satisfied);
    }

    #[test]
    fn det_range_examples() {
        assert!(det_range_check(&Spectrum::qubit_real(1.0, 1.0, 1.0).unwrap()).unwrap().satisfied);
        let v = det_range_check(&Spectrum::qubit_real(-THIRD, -THIRD, -THIRD).unwrap()).unwrap();
        assert!(v.satisfied && v.margin.abs() < 1e-15);
        let v = det_range_check(&Spectrum::qubit_real(-0.5, -0.5, -0.5).unwrap()).unwrap();
        assert!(!v.satisfied);
    }

    #[test]
    fn k_norm_examples() {
        let b = k_norm_bound(&Spectrum::qubit_real(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(b, KNormBound::Bound(0.0));
        let b = k_norm_bound(&Spectrum::qubit_real(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(b, KNormBound::Bound(1.0));
        let b = k_norm_bound(&Spectrum::qubit_real(0.5, 0.5, 0.5).unwrap()).unwrap();
        assert!((b.value() - 0.5).abs() < 1e-15);
        let b = k_norm_bound(&Spectrum::qubit_real(0.9, 0.9, -0.9).unwrap()).unwrap();
        assert!(!b.is_feasible());
    }

    #[test]
    fn z_examples() {
        let v = z_condition(EtaTriple::new(0.0, 0.0, 0.0), [0.0; 3]);
        assert!(v.satisfied && v.margin == 1.0);
        let v = z_condition(EtaTriple::new(1.0, 1.0, 1.0), [0.0; 3]);
        assert!(v.satisfied && v.margin == 0.0);
        let r = 0.5f64.sqrt();
        let v = z_condition(EtaTriple::new(r, r, 0.5), [0.0, 0.0, 0.5]);
        assert!(v.satisfied && v.margin.abs() < 1e-15, "{}", v.margin);
        // The Choi oracle agrees that amplitude damping sits on the boundary.
        let phi = KrausSet::amplitude_damping(0.5).unwrap().to_superoperator();
        assert!(phi.choi().eigenvalues()[0].abs() < 1e-15);
    }

    #[test]
    fn z_singular_examples() {
        let one = SingularTriple::new(1.0, 1.0, 1.0).unwrap();
        let v = z_condition_singular(one, [0.0; 3], DetSign::Positive);
        assert!(v.satisfied && v.margin == 0.0);

        // T = −I/3: q(s) = 16/27 and the negative branch subtracts 16/27.
        let third = SingularTriple::new(THIRD, THIRD, THIRD).unwrap();
        assert!(approx(q_product(third.values()), 16.0 / 27.0));
        let v = z_condition_singular(third, [0.0; 3], DetSign::Negative);
        assert!(v.satisfied && v.margin.abs() < 1e-15, "{}", v.margin);
        assert!(approx(v.margin, z_value(EtaTriple::new(-THIRD, -THIRD, -THIRD), [0.0; 3])));

        // s = (1,1,1) with det T < 0 is η = −(1,1,1), the transpose-like map.
        let v = z_condition_singular(one, [0.0; 3], DetSign::Negative);
        assert!(!v.satisfied && approx(v.margin, -16.0));
    }

    #[test]
    fn z_singular_matches_signed_form() {
        let s = [0.8, 0.45, 0.3];
        let k = [0.1, -0.2, 0.15];
        for mask in 0..8 {
            let sg = |b: usize| if mask & (1 << b) != 0 { -1.0 } else { 1.0 };
            let eta = EtaTriple::new(sg(0) * s[0], sg(1) * s[1], sg(2) * s[2]);
            let direct = z_value(eta, k);
            let sing = z_singular_margin(&eta.singular(), k, DetSign::of(eta.det()));
            assert!(approx(direct, sing), "mask {mask}: {direct} vs {sing}");
        }
    }

    #[test]
    fn eta_decomposition_reconstructs() {
        let t = RMatrix::from_row_slice(3, 3, &[0.2, -0.4, 0.1, 0.3, 0.1, -0.5, -0.2, 0.05, -0.3]);
        let (eta, o1, o2) = eta_decomposition(&t).unwrap();
        let back = &o1 * RMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&eta.0)) * o2.transpose();
        assert!((back - &t).abs().max() < 1e-14);
        assert!((eta.det() - t.determinant()).abs() < 1e-14);
        assert!((o1.determinant() - 1.0).abs() < 1e-14 && (o2.determinant() - 1.0).abs() < 1e-14);
    }
}
