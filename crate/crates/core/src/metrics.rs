//! Average gate fidelity, unitarity and diamond-norm bounds.
//!
//! Fidelity depends only on `Tr Φ` and is therefore gauge invariant; exact
//! unitarity needs the full transfer matrix and is not. The lower bounds
//! built from the error rate and the spectrum are gauge invariant.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{haar_pure_state, KrausSet, Spectrum, Superoperator, TransferMatrix, TP_TOL};
use crate::error::{Error, Result};

/// Largest tolerated imaginary part of a trace that must be real.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;
/// Radicands of the Wallman bound above `-WALLMAN_CLAMP` are clamped to 0.
pub const WALLMAN_CLAMP: f64 = 1e-12;

fn fidelity_from_trace(trace: Complex64, d: usize) -> Result<f64> {
    if trace.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue(trace.im));
    }
    let d = d as f64;
    Ok((trace.re + d) / (d * (d + 1.0)))
}

/// `F = (Tr Φ + d) / (d(d + 1))` for a trace-preserving `Φ`.
pub fn avg_gate_fidelity(phi: &Superoperator) -> Result<f64> {
    let dev = phi.trace_preservation_deviation();
    if dev > TP_TOL {
        return Err(Error::NotTracePreserving(dev));
    }
    fidelity_from_trace(phi.trace(), phi.dim())
}

/// Same formula with `Tr Φ = Σ λₘ`.
pub fn avg_gate_fidelity_from_spectrum(sp: &Spectrum) -> Result<f64> {
    fidelity_from_trace(sp.trace(), sp.dim())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
}

fn mc_estimate(ks: &KrausSet, n: usize, seed: u64, integrand: impl Fn(&[Complex64], &[Complex64]) -> f64) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::Domain(format!("Monte-Carlo needs at least 2 samples, got {n}")));
    }
    let d = ks.dim();
    let phi = ks.to_superoperator();
    // Row-major copy so the inner loop avoids matrix allocations.
    let m: Vec<Complex64> = (0..d * d).flat_map(|r| (0..d * d).map(move |c| (r, c))).map(|(r, c)| phi.matrix()[(r, c)]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n);
    let mut v = vec![Complex64::default(); d * d];
    let mut w = vec![Complex64::default(); d * d];
    for _ in 0..n {
        let psi = haar_pure_state(d, &mut rng);
        for i in 0..d {
            for j in 0..d {
                v[i * d + j] = psi[i] * psi[j].conj();
            }
        }
        for (r, out) in w.iter_mut().enumerate() {
            *out = m[r * d * d..(r + 1) * d * d].iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        values.push(integrand(psi.as_slice(), &w));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(McEstimate { estimate: mean, std_error: (var / n as f64).sqrt() })
}

/// Haar average of `⟨ψ|E(|ψ⟩⟨ψ|)|ψ⟩` over `n` pure states.
pub fn mc_avg_gate_fidelity(ks: &KrausSet, n: usize, seed: u64) -> Result<McEstimate> {
    let d = ks.dim();
    mc_estimate(ks, n, seed, |psi, w| {
        let mut acc = Complex64::default();
        for i in 0..d {
            for j in 0..d {
                acc += psi[i].conj() * w[i * d + j] * psi[j];
            }
        }
        acc.re
    })
}

/// Haar average of `d/(d−1)·Tr[E′(ψ)†E′(ψ)]` with `E′(ρ) = E(ρ − 𝟙/d)`.
///
/// Subtracting the image of the maximally mixed state removes the
/// non-unital shift, so the estimate converges to [`unitarity_exact`] for
/// unital and non-unital channels alike.
pub fn mc_unitarity(ks: &KrausSet, n: usize, seed: u64) -> Result<McEstimate> {
    let d = ks.dim();
    let shift = ks.apply(&(crate::linalg::CMatrix::identity(d, d) / Complex64::new(d as f64, 0.0)));
    let scale = d as f64 / (d as f64 - 1.0);
    mc_estimate(ks, n, seed, |_, w| {
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (w[i * d + j] - shift[(i, j)]).norm_sqr();
            }
        }
        scale * acc
    })
}

/// `u = (Tr[RᵀR] − 1 − ‖k‖²)/(d² − 1)` from the full block matrix `R`,
/// i.e. `‖T‖²_F/(d² − 1)`.
pub fn unitarity_exact(tm: &TransferMatrix) -> f64 {
    let d2 = (tm.dim() * tm.dim()) as f64;
    let full = tm.full();
    (full.norm_squared() - 1.0 - tm.translation_norm_sqr()) / (d2 - 1.0)
}

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Dimension(format!("need d ≥ 2, got {d}")));
    }
    Ok(())
}

fn require_rate(r: f64) -> Result<f64> {
    if !r.is_finite() || r < -WALLMAN_CLAMP {
        return Err(Error::Domain(format!("error rate must be non-negative, got {r}")));
    }
    Ok(r.max(0.0))
}

/// `u ≥ (1 − d·r/(d − 1))²`, saturated exactly when `T` is a multiple of the
/// identity.
pub fn unitarity_lower_from_r(r: f64, d: usize) -> Result<f64> {
    require_dim(d)?;
    let r = require_rate(r)?;
    let d = d as f64;
    Ok((1.0 - d * r / (d - 1.0)).powi(2))
}

/// `u ≥ (Σ|λₖ|² − d)/(d(d − 1))`, summed over all `d²` eigenvalues; tight for
/// unitary channels.
pub fn unitarity_lower_from_spectrum(sp: &Spectrum) -> f64 {
    let d = sp.dim() as f64;
    let total: f64 = sp.values().iter().map(|z| z.norm_sqr()).sum();
    (total - d) / (d * (d - 1.0))
}

/// `((d + 1)r/d, √(d(d + 1)r))` bracketing the diamond distance to the identity.
pub fn diamond_bounds_from_r(r: f64, d: usize) -> Result<(f64, f64)> {
    require_dim(d)?;
    let r = require_rate(r)?;
    let d = d as f64;
    Ok(((d + 1.0) * r / d, (d * (d + 1.0) * r).sqrt()))
}

/// `√((d² − 1)/(2d²)) · √(u − 1 + 2dr/(d − 1))`.
///
/// The bound increases with `u`, so any lower bound on `u` may be supplied
/// and the result stays a valid, fully gauge-invariant lower bound.
pub fn diamond_lower_wallman(u: f64, r: f64, d: usize) -> Result<f64> {
    require_dim(d)?;
    let df = d as f64;
    let radicand = u - 1.0 + 2.0 * df * r / (df - 1.0);
    if !radicand.is_finite() || radicand < -WALLMAN_CLAMP {
        return Err(Error::Domain(format!("inconsistent (u, r) = ({u}, {r}): radicand {radicand}")));
    }
    Ok(((df * df - 1.0) / (2.0 * df * df)).sqrt() * radicand.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metric {
    pub value: f64,
    pub gauge_invariant: bool,
}

impl Metric {
    fn invariant(value: f64) -> Self {
        Self { value, gauge_invariant: true }
    }

    fn dependent(value: f64) -> Self {
        Self { value, gauge_invariant: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub f_avg: Metric,
    pub r: Metric,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity: Option<Metric>,
    pub u_lower_r: Metric,
    pub u_lower_spectrum: Metric,
    pub diamond_lower_r: Metric,
    pub diamond_upper_r: Metric,
    /// Evaluated with the larger of the two unitarity lower bounds.
    pub diamond_lower_wallman: Metric,
    /// Evaluated with the exact (gauge-dependent) unitarity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diamond_lower_wallman_exact_u: Option<Metric>,
}

impl MetricsReport {
    /// Everything computable from the spectrum alone.
    pub fn from_spectrum(sp: &Spectrum) -> Result<Self> {
        let d = sp.dim();
        let f = avg_gate_fidelity_from_spectrum(sp)?;
        let r = 1.0 - f;
        let u_r = unitarity_lower_from_r(r, d)?;
        let u_sp = unitarity_lower_from_spectrum(sp);
        let (lo, hi) = diamond_bounds_from_r(r, d)?;
        let wallman = diamond_lower_wallman(u_r.max(u_sp), r, d)?;
        Ok(Self {
            f_avg: Metric::invariant(f),
            r: Metric::invariant(r),
            unitarity: None,
            u_lower_r: Metric::invariant(u_r),
            u_lower_spectrum: Metric::invariant(u_sp),
            diamond_lower_r: Metric::invariant(lo),
            diamond_upper_r: Metric::invariant(hi),
            diamond_lower_wallman: Metric::invariant(wallman),
            diamond_lower_wallman_exact_u: None,
        })
    }

    /// Adds the fields that need the full transfer matrix. The exact-`u`
    /// Wallman bound is left out when `(u, r)` is inconsistent, which only
    /// happens for maps that are not completely positive.
    pub fn with_transfer(mut self, tm: &TransferMatrix) -> Self {
        let u = unitarity_exact(tm);
        self.unitarity = Some(Metric::dependent(u));
        self.diamond_lower_wallman_exact_u = diamond_lower_wallman(u, self.r.value, tm.dim()).ok().map(Metric::dependent);
        self
    }
}
