use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, eigenvalues, product};

use super::Superoperator;

/// Distance from 1 above which the designated unit eigenvalue is flagged.
pub const UNIT_FLAG_DISTANCE: f64 = 1e-6;
/// Tolerance for greedy nearest-conjugate pairing.
pub const CONJUGATE_PAIR_TOL: f64 = 1e-8;
/// Imaginary parts below this make a qubit spectrum count as all-real.
pub const REAL_CLASS_TOL: f64 = 1e-9;

/// Eigenvalues of a superoperator with the designated unit eigenvalue `λ₀`
/// and the spectral gap `γ = 1 − max_{m≠0} |λ_m|`.
///
/// Values are kept in decreasing modulus order (ties: larger real part,
/// then larger imaginary part first).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    dim: usize,
    values: Vec<Complex64>,
    unit_index: usize,
    gap: f64,
    unit_flagged: bool,
}

/// The two shapes a qubit spectrum `{1, λ₁, λ₂, λ₃}` can take.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum QubitSpectralClass {
    /// Three real eigenvalues in decreasing `|·|` order.
    AllReal { l1: f64, l2: f64, l3: f64 },
    /// `{x, z, z̄}` with `Im z > 0`.
    ConjugatePair { x: f64, z_re: f64, z_im: f64 },
}

impl QubitSpectralClass {
    pub fn z(&self) -> Option<Complex64> {
        match *self {
            QubitSpectralClass::ConjugatePair { z_re, z_im, .. } => Some(c(z_re, z_im)),
            QubitSpectralClass::AllReal { .. } => None,
        }
    }
}

fn order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

impl Spectrum {
    /// Eigenvalues of `Φ` from the general nonsymmetric eigensolver.
    pub fn of(phi: &Superoperator) -> Result<Self> {
        let vals = eigenvalues(phi.matrix())?;
        Self::from_values(phi.dim(), vals)
    }

    /// Builds a spectrum from `d²` supplied values.
    pub fn from_values(dim: usize, mut values: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || values.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "a d = {dim} spectrum has {} values, got {}",
                dim * dim,
                values.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("spectrum"));
        }
        values.sort_by(order);
        let one = c(1.0, 0.0);
        let (unit_index, dist) = values
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - one).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        let gap = 1.0
            - values
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != unit_index)
                .map(|(_, z)| z.norm())
                .fold(0.0, f64::max);
        Ok(Self {
            dim,
            values,
            unit_index,
            gap,
            unit_flagged: dist > UNIT_FLAG_DISTANCE,
        })
    }

    /// Qubit spectrum `{1, λ₁, λ₂, λ₃}`.
    pub fn qubit(l1: Complex64, l2: Complex64, l3: Complex64) -> Result<Self> {
        Self::from_values(2, vec![c(1.0, 0.0), l1, l2, l3])
    }

    /// Qubit spectrum with three real non-unit eigenvalues.
    pub fn qubit_real(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        Self::qubit(c(l1, 0.0), c(l2, 0.0), c(l3, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn unit_index(&self) -> usize {
        self.unit_index
    }

    pub fn unit(&self) -> Complex64 {
        self.values[self.unit_index]
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Whether the value closest to 1 is further than `1e-6` from it.
    pub fn unit_flagged(&self) -> bool {
        self.unit_flagged
    }

    /// The `d² − 1` remaining eigenvalues, decreasing modulus.
    pub fn non_unit(&self) -> Vec<Complex64> {
        self.values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.unit_index)
            .map(|(_, z)| *z)
            .collect()
    }

    /// Moduli of the non-unit eigenvalues, decreasing.
    pub fn moduli(&self) -> Vec<f64> {
        self.non_unit().iter().map(|z| z.norm()).collect()
    }

    pub fn non_unit_product(&self) -> Complex64 {
        product(&self.non_unit())
    }

    pub fn trace(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn sum_sq_moduli(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Number of eigenvalues within `tol` of 1 (degenerate leading
    /// eigenvalue signals a reducible channel).
    pub fn unit_multiplicity(&self, tol: f64) -> usize {
        self.values.iter().filter(|z| (*z - c(1.0, 0.0)).norm() <= tol).count()
    }

    /// Number of eigenvalues with modulus within `tol` of 1.
    pub fn peripheral_count(&self, tol: f64) -> usize {
        self.values.iter().filter(|z| (z.norm() - 1.0).abs() <= tol).count()
    }

    /// Greedy nearest-conjugate matching over all values.
    pub fn check_conjugation_closed(&self, tol: f64) -> Result<()> {
        pair_conjugates(&self.values, tol).map(|_| ())
    }

    /// Splits a qubit spectrum into its all-real or conjugate-pair form.
    pub fn classify_qubit(&self) -> Result<QubitSpectralClass> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let rest = self.non_unit();
        if rest.iter().all(|z| z.im.abs() < REAL_CLASS_TOL) {
            let mut re: Vec<f64> = rest.iter().map(|z| z.re).collect();
            re.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
            return Ok(QubitSpectralClass::AllReal {
                l1: re[0],
                l2: re[1],
                l3: re[2],
            });
        }
        pair_conjugates(&rest, CONJUGATE_PAIR_TOL)?;
        let xi = (0..3)
            .min_by(|&a, &b| rest[a].im.abs().total_cmp(&rest[b].im.abs()))
            .expect("three values");
        let zi = (0..3)
            .filter(|&i| i != xi)
            .max_by(|&a, &b| rest[a].im.total_cmp(&rest[b].im))
            .expect("two values");
        Ok(QubitSpectralClass::ConjugatePair {
            x: rest[xi].re,
            z_re: rest[zi].re,
            z_im: rest[zi].im,
        })
    }
}

/// Greedy nearest-conjugate pairing. Values with `|Im| ≤ tol` pair with
/// themselves. Returns the partner index of each value.
fn pair_conjugates(values: &[Complex64], tol: f64) -> Result<Vec<usize>> {
    let n = values.len();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if partner[i].is_some() {
            continue;
        }
        if values[i].im.abs() <= tol {
            partner[i] = Some(i);
            continue;
        }
        let target = values[i].conj();
        let best = (0..n)
            .filter(|&j| j != i && partner[j].is_none())
            .map(|j| (j, (values[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, dist)) if dist <= tol => {
                partner[i] = Some(j);
                partner[j] = Some(i);
            }
            _ => {
                return Err(Error::MalformedSpectrum(format!(
                    "eigenvalue {:.6e}{:+.6e}i has no conjugate partner within {tol:e}",
                    values[i].re, values[i].im
                )))
            }
        }
    }
    Ok(partner.into_iter().map(|p| p.expect("all paired")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausSet;
    use crate::linalg::bottleneck_distance;

    #[test]
    fn identity_spectrum() {
        let sp = Spectrum::of(&Superoperator::identity(2)).unwrap();
        assert!(bottleneck_distance(sp.values(), &[c(1.0, 0.0); 4]) < 1e-15);
        assert_eq!(sp.gap(), 0.0);
        assert!(!sp.unit_flagged());
        assert_eq!(sp.unit_multiplicity(1e-9), 4);
    }

    #[test]
    fn bit_flip_spectrum() {
        let sp = Spectrum::of(&KrausSet::bit_flip(0.25).unwrap().to_superoperator()).unwrap();
        let want = [c(1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        assert!(bottleneck_distance(sp.values(), &want) < 1e-14);
        assert!(sp.gap().abs() < 1e-14);
    }

    #[test]
    fn value_count_is_checked() {
        assert!(matches!(Spectrum::from_values(2, vec![c(1.0, 0.0); 3]), Err(Error::Dimension(_))));
    }

    #[test]
    fn far_from_unit_is_flagged() {
        let sp = Spectrum::from_values(2, vec![c(0.5, 0.0); 4]).unwrap();
        assert!(sp.unit_flagged());
        assert_eq!(sp.gap(), 0.5);
    }

    #[test]
    fn classify_examples() {
        let sp = Spectrum::qubit_real(0.5, 0.5, 0.5).unwrap();
        assert_eq!(sp.classify_qubit().unwrap(), QubitSpectralClass::AllReal { l1: 0.5, l2: 0.5, l3: 0.5 });

        let z = Complex64::from_polar(0.5, std::f64::consts::FRAC_PI_3);
        let sp = Spectrum::qubit(c(0.4, 0.0), z, z.conj()).unwrap();
        match sp.classify_qubit().unwrap() {
            QubitSpectralClass::ConjugatePair { x, z_re, z_im } => {
                assert_eq!(x, 0.4);
                assert_eq!(c(z_re, z_im), z);
            }
            other => panic!("{other:?}"),
        }

        let t = -1.0 / 3.0;
        let sp = Spectrum::qubit_real(t, t, t).unwrap();
        assert_eq!(sp.classify_qubit().unwrap(), QubitSpectralClass::AllReal { l1: t, l2: t, l3: t });
    }

    #[test]
    fn classify_rejects_unpaired_complex_values() {
        let sp = Spectrum::qubit(c(0.4, 0.0), c(0.1, 0.3), c(0.1, -0.2)).unwrap();
        assert!(matches!(sp.classify_qubit(), Err(Error::MalformedSpectrum(_))));
        let sp = Spectrum::from_values(3, vec![c(1.0, 0.0); 9]).unwrap();
        assert!(matches!(sp.classify_qubit(), Err(Error::UnsupportedDimension(3))));
    }
}
