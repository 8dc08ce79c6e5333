//! Canonical qubit channels realizing a prescribed spectrum.
//!
//! Spectra `{1, x, z, z̄}` are realized by `p·S_a + (1 − p)·Ψ_α`, mixing a
//! classical bistochastic channel with a phase unitary; real spectra by the
//! normal superoperator `Ξ_λ`. Superoperators are written in the row-stacked
//! computational basis `|00⟩⟩, |01⟩⟩, |10⟩⟩, |11⟩⟩`.

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::{default_cp_tolerance, is_completely_positive, QubitSpectralClass, Superoperator, TransferMatrix};
use crate::criteria::{complex_pair_disc, real_tetrahedron, VERDICT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, RMatrix};

/// `|z|` within this distance of 1 is treated as a phase unitary.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

fn in_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

fn superop(m: CMatrix) -> Superoperator {
    Superoperator::new(2, m).expect("4x4 finite matrix")
}

fn classical_matrix(a: f64) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = c(a, 0.0);
    m[(0, 3)] = c(1.0 - a, 0.0);
    m[(3, 0)] = c(1.0 - a, 0.0);
    m[(3, 3)] = c(a, 0.0);
    m
}

fn phase_matrix(alpha: f64) -> CMatrix {
    let e = Complex64::from_polar(1.0, alpha);
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), e.conj(), e, c(1.0, 0.0)]))
}

fn mixture_matrix(p: f64, a: f64, alpha: f64) -> CMatrix {
    classical_matrix(a) * c(p, 0.0) + phase_matrix(alpha) * c(1.0 - p, 0.0)
}

/// Classical doubly stochastic channel `S_a`: keeps a population with
/// probability `a`, swaps it otherwise, and erases coherences.
/// Eigenvalues `{1, 2a − 1, 0, 0}`.
pub fn classical_channel(a: f64) -> Result<Superoperator> {
    in_unit_interval("a", a)?;
    Ok(superop(classical_matrix(a)))
}

/// `Ψ_α = diag(1, e^{−iα}, e^{iα}, 1)`, conjugation by `diag(1, e^{iα})`.
pub fn phase_unitary_channel(alpha: f64) -> Superoperator {
    superop(phase_matrix(alpha))
}

/// `p·S_a + (1 − p)·Ψ_α`, with spectrum `{1, 1 − 2p(1 − a), (1 − p)e^{∓iα}}`.
pub fn mixture_channel(p: f64, a: f64, alpha: f64) -> Result<Superoperator> {
    in_unit_interval("p", p)?;
    in_unit_interval("a", a)?;
    Ok(superop(mixture_matrix(p, a, alpha)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureParameters {
    pub p: f64,
    pub a: f64,
    pub alpha: f64,
}

/// `p = 1 − |z|`, `a = (x − 2|z| + 1)/(2 − 2|z|)`, `α = arg z`, without
/// range checks; `a` leaves `[0, 1]` exactly when the pair is not realizable.
pub fn mixture_parameters(x: f64, z: Complex64) -> Result<MixtureParameters> {
    let r = z.norm();
    if r >= 1.0 - UNIT_MODULUS_TOL {
        return Err(Error::Domain(format!("|z| = {r} leaves no room for a classical part")));
    }
    Ok(MixtureParameters {
        p: 1.0 - r,
        a: (x - 2.0 * r + 1.0) / (2.0 - 2.0 * r),
        alpha: z.arg(),
    })
}

/// Mixture channel with spectrum `{1, x, z, z̄}`.
///
/// Requires `Im z ≠ 0` (real spectra go through [`xi_from_real_spectrum`])
/// and `|z| ≤ (1 + x)/2`. For `|z| = 1` the disc forces `x = 1` and the
/// phase unitary `Ψ_{arg z}` is returned.
pub fn synthesize_from_complex_pair(x: f64, z: Complex64) -> Result<Superoperator> {
    if !x.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("spectrum"));
    }
    if z.im == 0.0 {
        return Err(Error::Domain("z is real; use the real-spectrum construction".into()));
    }
    if x.abs() > 1.0 + VERDICT_TOL {
        return Err(Error::NotRealizable(format!("|x| ≤ 1 violated: x = {x}")));
    }
    let verdict = complex_pair_disc(x, z);
    if !verdict.satisfied {
        return Err(Error::NotRealizable(format!(
            "|z| ≤ (1 + x)/2 violated: |z| = {}, (1 + x)/2 = {} (margin {})",
            z.norm(),
            (1.0 + x) / 2.0,
            verdict.margin
        )));
    }
    if z.norm() >= 1.0 - UNIT_MODULUS_TOL {
        return Ok(phase_unitary_channel(z.arg()));
    }
    let params = mixture_parameters(x, z)?;
    // The disc check admits margins down to -1e-12; pull `a` back into range.
    mixture_channel(params.p, params.a.clamp(0.0, 1.0), params.alpha)
}

/// Normal superoperator `Ξ_λ` with eigenvalues `{1, l1, l2, l3}`: corner
/// block `½(1 ± l1)` on populations, middle block `½(l2 + l3)` on the
/// diagonal and `½(l3 − l2)` off it. Equivalent to the Pauli-diagonal
/// channel `T = diag(l3, l2, l1)`.
pub fn xi_from_real_spectrum(l1: f64, l2: f64, l3: f64) -> Result<Superoperator> {
    if ![l1, l2, l3].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("spectrum"));
    }
    let verdict = real_tetrahedron(l1, l2, l3);
    if !verdict.satisfied {
        return Err(Error::NotRealizable(format!(
            "tetrahedron 1 ± l1 ± l2 ± l3 ≥ 0 violated for ({l1}, {l2}, {l3}) (margin {})",
            verdict.margin
        )));
    }
    let mut m = CMatrix::zeros(4, 4);
    let hi = 0.5 * (1.0 + l1);
    let lo = 0.5 * (1.0 - l1);
    m[(0, 0)] = c(hi, 0.0);
    m[(0, 3)] = c(lo, 0.0);
    m[(3, 0)] = c(lo, 0.0);
    m[(3, 3)] = c(hi, 0.0);
    m[(1, 1)] = c(0.5 * (l2 + l3), 0.0);
    m[(2, 2)] = c(0.5 * (l2 + l3), 0.0);
    m[(1, 2)] = c(0.5 * (l3 - l2), 0.0);
    m[(2, 1)] = c(0.5 * (l3 - l2), 0.0);
    Ok(superop(m))
}

/// Transfer form of [`det_saturating_channel`]: `k = 0`, `T = −I/3`.
pub fn det_saturating_transfer() -> TransferMatrix {
    TransferMatrix::unital(2, RMatrix::identity(3, 3) * (-1.0 / 3.0)).expect("3x3 Bloch map")
}

/// Unital qubit channel with `T = −I/3`, the minimum `det T = −1/27`.
pub fn det_saturating_channel() -> Superoperator {
    det_saturating_transfer().to_superoperator()
}

/// Realizes a classified qubit spectrum with the matching construction.
pub fn synthesize(class: &QubitSpectralClass) -> Result<Superoperator> {
    match *class {
        QubitSpectralClass::AllReal { l1, l2, l3 } => xi_from_real_spectrum(l1, l2, l3),
        QubitSpectralClass::ConjugatePair { x, z_re, z_im } => synthesize_from_complex_pair(x, c(z_re, z_im)),
    }
}

/// One lattice point of the complex-eigenvalue region for a fixed `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub re_z: f64,
    pub im_z: f64,
    /// `|z| ≤ (1 + x)/2`.
    pub disc: bool,
    /// Choi positivity of the unconstrained mixture `p·S_a + (1 − p)·Ψ_α`
    /// built from the mixture parameters; `None` where no such mixture
    /// exists (`|z| ≥ 1`, except the unitary point `x = 1, |z| = 1`).
    pub oracle: Option<bool>,
}

/// Evaluates the disc criterion and the Choi oracle at `z` for fixed `x`.
pub fn region_cell(x: f64, z: Complex64) -> RegionCell {
    let disc = complex_pair_disc(x, z).satisfied;
    let oracle = match mixture_parameters(x, z) {
        Ok(MixtureParameters { p, a, alpha }) => {
            let phi = superop(mixture_matrix(p, a, alpha));
            is_completely_positive(&phi, default_cp_tolerance(2)).ok().map(|r| r.completely_positive)
        }
        Err(_) if (z.norm() - 1.0).abs() < UNIT_MODULUS_TOL && (x - 1.0).abs() < UNIT_MODULUS_TOL => Some(true),
        Err(_) => None,
    };
    RegionCell { re_z: z.re, im_z: z.im, disc, oracle }
}

/// `grid × grid` lattice `−1 + 2i/(grid − 1)` over `[−1, 1]²`, rows by
/// increasing `Im z`, columns by increasing `Re z`.
pub fn region_grid(x: f64, grid: usize) -> Result<Vec<RegionCell>> {
    if grid < 2 {
        return Err(Error::Domain(format!("grid must be at least 2, got {grid}")));
    }
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
    Ok((0..grid)
        .flat_map(|j| (0..grid).map(move |i| (i, j)))
        .map(|(i, j)| region_cell(x, c(coord(i), coord(j))))
        .collect())
}
