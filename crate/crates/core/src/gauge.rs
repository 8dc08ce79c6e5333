//! Gauge freedom of gate set tomography.
//!
//! A gauge element is a real invertible `d² x d²` matrix `X` acting in the
//! Hermitian transfer basis with first row exactly `(1, 0, …, 0)`, so that
//! trace preservation survives `M = X⁻¹ΦX`. Gate sets transform as
//! `M_k = X⁻¹Φ_kX`, `|ρ⟩⟩ ↦ X⁻¹|ρ⟩⟩`, `⟨⟨E| ↦ ⟨⟨E|X`, leaving every sequence
//! probability unchanged.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::{basis_change, default_cp_tolerance, haar_pure_state, is_completely_positive, sample_cptp, Superoperator, TP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{
    bottleneck_distance, c, condition_number, hermitian_eigenvalues, hermiticity_deviation, real_inverse, to_complex, unvec_rows,
    vec_rows, CMatrix, CVector, RMatrix,
};

pub const DEFAULT_CONDITION_CAP: f64 = 1e4;
/// Probability deviations are compared against this times the condition estimate.
pub const PROB_TOL: f64 = 1e-9;
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Positivity and trace slack for physical states and effects.
pub const STATE_TOL: f64 = 1e-10;
const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    dim: usize,
    matrix: RMatrix,
    condition_estimate: f64,
}

fn first_row_is_unit(m: &RMatrix) -> bool {
    m[(0, 0)] == 1.0 && (1..m.ncols()).all(|j| m[(0, j)] == 0.0)
}

impl GaugeTransform {
    /// Validates shape, the exact first row and the conditioning cap.
    pub fn new(dim: usize, matrix: RMatrix, cap: f64) -> Result<Self> {
        let n = dim * dim;
        if dim == 0 || matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!("gauge for d = {dim} must be {n}x{n}, got {:?}", matrix.shape())));
        }
        if !matrix.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("gauge matrix"));
        }
        if !first_row_is_unit(&matrix) {
            return Err(Error::Domain("gauge first row must be exactly (1, 0, …, 0)".into()));
        }
        Self::with_condition(dim, matrix, cap)
    }

    fn with_condition(dim: usize, matrix: RMatrix, cap: f64) -> Result<Self> {
        let condition_estimate = condition_number(&matrix);
        if !condition_estimate.is_finite() || condition_estimate > cap {
            return Err(Error::Numeric(format!("gauge condition estimate {condition_estimate} exceeds cap {cap}")));
        }
        Ok(Self { dim, matrix, condition_estimate })
    }

    pub fn identity(dim: usize) -> Self {
        let n = dim * dim;
        Self { dim, matrix: RMatrix::identity(n, n), condition_estimate: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Blockwise inverse `[[1, 0], [−A⁻¹v, A⁻¹]]`, which keeps the first row exact.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.matrix.nrows();
        let inv = if first_row_is_unit(&self.matrix) {
            let mut inv = RMatrix::zeros(n, n);
            inv[(0, 0)] = 1.0;
            if n > 1 {
                let a_inv = real_inverse(&self.matrix.view((1, 1), (n - 1, n - 1)).into_owned())?;
                let v = self.matrix.view((1, 0), (n - 1, 1)).into_owned();
                inv.view_mut((1, 0), (n - 1, 1)).copy_from(&(-&a_inv * v));
                inv.view_mut((1, 1), (n - 1, n - 1)).copy_from(&a_inv);
            }
            inv
        } else {
            real_inverse(&self.matrix)?
        };
        Ok(Self { dim: self.dim, matrix: inv, condition_estimate: self.condition_estimate })
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &GaugeTransform) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("gauge dims {} and {} differ", self.dim, other.dim)));
        }
        let m = &self.matrix * &other.matrix;
        let condition_estimate = condition_number(&m);
        Ok(Self { dim: self.dim, matrix: m, condition_estimate })
    }

    /// `X` expressed on row-stacked density matrices: `U X U†`.
    pub fn natural(&self) -> CMatrix {
        let n = self.matrix.nrows();
        if self.matrix == RMatrix::identity(n, n) {
            return CMatrix::identity(n, n);
        }
        let u = basis_change(self.dim);
        &u * to_complex(&self.matrix) * u.adjoint()
    }

    fn natural_inverse(&self) -> Result<CMatrix> {
        Ok(self.inverse()?.natural())
    }

    /// Similarity transform whose first row is *not* `(1, 0, …, 0)`: the
    /// `X₀₁` entry is set to `epsilon` on top of a random gauge. Such a map
    /// does not preserve the trace functional and is only useful to show
    /// that the orbit checks notice it.
    #[cfg(any(test, feature = "broken-gauge"))]
    pub fn broken(dim: usize, strength: f64, epsilon: f64, seed: u64) -> Result<Self> {
        let mut m = random_gauge(dim, strength, seed)?.matrix;
        m[(0, 1)] = epsilon;
        Self::with_condition(dim, m, DEFAULT_CONDITION_CAP)
    }
}

/// `X = I + strength·G`, `G` Gaussian with entries of variance `1/d²` and a
/// zero first row; resampled while the condition estimate exceeds the cap.
pub fn random_gauge(dim: usize, strength: f64, seed: u64) -> Result<GaugeTransform> {
    if !(strength >= 0.0 && strength.is_finite()) {
        return Err(Error::Domain(format!("gauge strength must be finite and non-negative, got {strength}")));
    }
    if dim == 0 {
        return Err(Error::Dimension("d must be positive".into()));
    }
    let n = dim * dim;
    if strength == 0.0 {
        return Ok(GaugeTransform::identity(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = strength / (n as f64).sqrt();
    for _ in 0..MAX_RESAMPLES {
        let mut m = RMatrix::identity(n, n);
        for i in 1..n {
            for j in 0..n {
                let g: f64 = rng.sample(StandardNormal);
                m[(i, j)] += scale * g;
            }
        }
        if let Ok(x) = GaugeTransform::new(dim, m, DEFAULT_CONDITION_CAP) {
            return Ok(x);
        }
    }
    Err(Error::Numeric(format!("no gauge with condition ≤ {DEFAULT_CONDITION_CAP} after {MAX_RESAMPLES} draws")))
}

fn check_dims(phi_dim: usize, x: &GaugeTransform) -> Result<()> {
    if phi_dim != x.dim {
        return Err(Error::Dimension(format!("channel d = {phi_dim}, gauge d = {}", x.dim)));
    }
    Ok(())
}

/// `M = X⁻¹ΦX`.
pub fn apply_gauge(phi: &Superoperator, x: &GaugeTransform) -> Result<Superoperator> {
    check_dims(phi.dim(), x)?;
    let m = x.natural_inverse()? * phi.matrix() * x.natural();
    Superoperator::new(phi.dim(), m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Validated states, effects and CPTP gates.
    Physical,
    /// Image of a gate set under a gauge; no positivity is implied.
    Gauge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSet {
    dim: usize,
    gates: Vec<Superoperator>,
    /// `|ρ⟩⟩ = vec(ρ)`.
    state: CVector,
    /// `⟨⟨E|` as the covector `conj(vec(E))`, so `p = Σ eᵢ vᵢ`.
    effect: CVector,
    frame: Frame,
}

fn check_state(rho: &CMatrix) -> Result<()> {
    let herm = hermiticity_deviation(rho);
    if herm > STATE_TOL {
        return Err(Error::Domain(format!("state is not Hermitian (deviation {herm})")));
    }
    let tr = rho.trace();
    if (tr - c(1.0, 0.0)).norm() > STATE_TOL {
        return Err(Error::Domain(format!("state trace {tr} ≠ 1")));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -STATE_TOL {
        return Err(Error::Domain(format!("state has negative eigenvalue {min}")));
    }
    Ok(())
}

fn check_effect(e: &CMatrix) -> Result<()> {
    let herm = hermiticity_deviation(e);
    if herm > STATE_TOL {
        return Err(Error::Domain(format!("effect is not Hermitian (deviation {herm})")));
    }
    let ev = hermitian_eigenvalues(e);
    if ev[0] < -STATE_TOL || ev[ev.len() - 1] > 1.0 + STATE_TOL {
        return Err(Error::Domain(format!("effect eigenvalues {ev:?} leave [0, 1]")));
    }
    Ok(())
}

impl GateSet {
    /// Physical gate set: CPTP gates, a density matrix `ρ` and an effect `E`
    /// of the two-outcome measurement `{E, 𝟙 − E}`.
    pub fn new(gates: Vec<Superoperator>, rho: &CMatrix, effect: &CMatrix) -> Result<Self> {
        let dim = rho.nrows();
        if rho.shape() != (dim, dim) || effect.shape() != (dim, dim) {
            return Err(Error::Dimension("state and effect must be square of equal size".into()));
        }
        if gates.is_empty() {
            return Err(Error::Domain("gate set needs at least one gate".into()));
        }
        for g in &gates {
            if g.dim() != dim {
                return Err(Error::Dimension(format!("gate d = {} but state d = {dim}", g.dim())));
            }
            let dev = g.trace_preservation_deviation();
            if dev > TP_TOL {
                return Err(Error::NotTracePreserving(dev));
            }
            let cp = is_completely_positive(g, default_cp_tolerance(dim))?;
            if !cp.completely_positive {
                return Err(Error::Domain(format!("gate is not completely positive (Choi min {})", cp.min_eigenvalue)));
            }
        }
        check_state(rho)?;
        check_effect(effect)?;
        Ok(Self {
            dim,
            gates,
            state: vec_rows(rho),
            effect: vec_rows(effect).map(|z| z.conj()),
            frame: Frame::Physical,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gates(&self) -> &[Superoperator] {
        &self.gates
    }

    pub fn state(&self) -> &CVector {
        &self.state
    }

    pub fn effect(&self) -> &CVector {
        &self.effect
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// State as a `d x d` matrix (not necessarily positive in a gauge frame).
    pub fn state_matrix(&self) -> CMatrix {
        unvec_rows(&self.state, self.dim)
    }
}

/// Physical gate set with `gates` random CPTP gates of random Kraus rank and
/// Haar-random pure state and projective effect.
pub fn random_gateset(dim: usize, gates: usize, seed: u64) -> Result<GateSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list = (0..gates)
        .map(|_| {
            let rank = rng.random_range(1..=dim * dim);
            Ok(sample_cptp(dim, rank, rng.random())?.to_superoperator())
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = haar_pure_state(dim, &mut rng);
    let phi = haar_pure_state(dim, &mut rng);
    GateSet::new(list, &(&psi * psi.adjoint()), &(&phi * phi.adjoint()))
}

/// Gates conjugated, state multiplied by `X⁻¹`, effect by `X`.
pub fn transform_gateset(gs: &GateSet, x: &GaugeTransform) -> Result<GateSet> {
    check_dims(gs.dim, x)?;
    let xn = x.natural();
    let xi = x.natural_inverse()?;
    let gates = gs.gates.iter().map(|g| Superoperator::new(gs.dim, &xi * g.matrix() * &xn)).collect::<Result<Vec<_>>>()?;
    Ok(GateSet {
        dim: gs.dim,
        gates,
        state: &xi * &gs.state,
        effect: (gs.effect.transpose() * &xn).transpose(),
        frame: Frame::Gauge,
    })
}

fn evolve(gs: &GateSet, seq: &[usize]) -> Result<CVector> {
    let mut v = gs.state.clone();
    for &k in seq.iter().rev() {
        let g = gs
            .gates
            .get(k)
            .ok_or_else(|| Error::Domain(format!("gate index {k} out of range (have {})", gs.gates.len())))?;
        v = g.matrix() * v;
    }
    Ok(v)
}

fn real_probability(p: num_complex::Complex64) -> Result<f64> {
    if p.im.abs() > PROB_TOL {
        return Err(Error::ImaginaryResidue(p.im));
    }
    Ok(p.re)
}

/// `⟨⟨E|Φ_{k₁}⋯Φ_{kₙ}|ρ⟩⟩` for `seq = [k₁, …, kₙ]`, so the last listed gate acts first.
pub fn sequence_probability(gs: &GateSet, seq: &[usize]) -> Result<f64> {
    let v = evolve(gs, seq)?;
    real_probability(gs.effect.iter().zip(v.iter()).map(|(e, x)| e * x).sum())
}

/// Probability of the complementary outcome `𝟙 − E`, using the fixed
/// physical trace functional `⟨⟨𝟙|`. This matches `1 − p` on every gauge
/// orbit only when the gauge preserves the trace, i.e. when its first row is
/// `(1, 0, …, 0)`.
pub fn complement_probability(gs: &GateSet, seq: &[usize]) -> Result<f64> {
    let v = evolve(gs, seq)?;
    let d = gs.dim;
    let trace: num_complex::Complex64 = (0..d).map(|i| v[i * d + i]).sum();
    let p: num_complex::Complex64 = gs.effect.iter().zip(v.iter()).map(|(e, x)| e * x).sum();
    real_probability(trace - p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    /// Worst change of any outcome probability over all sequences.
    pub max_prob_deviation: f64,
    /// Worst optimal-assignment distance between gate spectra.
    pub max_spectral_deviation: f64,
    pub condition_estimate: f64,
    pub prob_tolerance: f64,
    pub spectral_tolerance: f64,
    pub sequences_checked: usize,
    pub passed: bool,
}

/// Compares every sequence of length `0..=max_len` (both outcomes) and every
/// gate spectrum before and after the gauge.
pub fn verify_orbit_invariance(gs: &GateSet, x: &GaugeTransform, max_len: usize) -> Result<OrbitReport> {
    if max_len < 1 {
        return Err(Error::Domain("max_len must be at least 1".into()));
    }
    let image = transform_gateset(gs, x)?;
    let n = gs.gates.len();
    let mut max_prob: f64 = 0.0;
    let mut count = 0;
    let mut seq = Vec::with_capacity(max_len);
    for len in 0..=max_len {
        let total = n.pow(len as u32);
        for mut code in 0..total {
            seq.clear();
            for _ in 0..len {
                seq.push(code % n);
                code /= n;
            }
            let dp = (sequence_probability(gs, &seq)? - sequence_probability(&image, &seq)?).abs();
            let dq = (complement_probability(gs, &seq)? - complement_probability(&image, &seq)?).abs();
            max_prob = max_prob.max(dp).max(dq);
            count += 1;
        }
    }
    let mut max_spec: f64 = 0.0;
    for (g, m) in gs.gates.iter().zip(&image.gates) {
        let a = g.spectrum()?;
        let b = m.spectrum()?;
        max_spec = max_spec.max(bottleneck_distance(a.values(), b.values()));
    }
    let prob_tolerance = PROB_TOL * x.condition_estimate;
    Ok(OrbitReport {
        max_prob_deviation: max_prob,
        max_spectral_deviation: max_spec,
        condition_estimate: x.condition_estimate,
        prob_tolerance,
        spectral_tolerance: SPECTRAL_TOL,
        sequences_checked: count,
        passed: max_prob <= prob_tolerance && max_spec <= SPECTRAL_TOL,
    })
}
