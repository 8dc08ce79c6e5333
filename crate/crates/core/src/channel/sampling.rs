use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector, RMatrix};

use super::{KrausSet, TransferMatrix};

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-random isometry `rows x cols` (`rows ≥ cols`) from the QR
/// decomposition of a complex Ginibre matrix with the phases of `R` removed.
pub(crate) fn haar_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(rows, cols, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { c(1.0, 0.0) } else { d / d.norm() };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random CPTP map with `kraus_rank` Kraus operators taken as the `d x d`
/// blocks of a Haar isometry `C^d → C^{d·rank}`.
pub fn sample_cptp(d: usize, kraus_rank: usize, seed: u64) -> Result<KrausSet> {
    if d == 0 || kraus_rank == 0 || kraus_rank > d * d {
        return Err(Error::Domain(format!("Kraus rank {kraus_rank} outside 1..={} for d = {d}", d * d)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = haar_isometry(d * kraus_rank, d, &mut rng);
    let ops = (0..kraus_rank).map(|n| v.rows(n * d, d).into_owned()).collect();
    KrausSet::new(ops)
}

/// Haar-random rotation in SO(3).
pub fn haar_rotation(rng: &mut impl Rng) -> RMatrix {
    let g = RMatrix::from_fn(3, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..3 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Uniform sample from the region `1 ± η₃ ≥ |η₁ ± η₂|` by rejection from
/// `[-1, 1]³` (acceptance 1/3).
pub fn sample_fa_eta(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let e: [f64; 3] = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        if 1.0 + e[2] >= (e[0] + e[1]).abs() && 1.0 - e[2] >= (e[0] - e[1]).abs() {
            return e;
        }
    }
}

/// Unital qubit channel with `T = O₁ diag(η) O₂ᵀ`.
pub fn unital_qubit_from_parts(eta: [f64; 3], o1: &RMatrix, o2: &RMatrix) -> Result<TransferMatrix> {
    if o1.shape() != (3, 3) || o2.shape() != (3, 3) {
        return Err(Error::Dimension("rotations must be 3x3".into()));
    }
    let t = o1 * RMatrix::from_diagonal(&DVector::from_column_slice(&eta)) * o2.transpose();
    TransferMatrix::unital(2, t)
}

/// Random unital qubit channel: η uniform over the Fujiwara–Algoet region,
/// independent Haar rotations on both sides.
pub fn sample_unital_qubit(seed: u64) -> TransferMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = sample_fa_eta(&mut rng);
    let o1 = haar_rotation(&mut rng);
    let o2 = haar_rotation(&mut rng);
    unital_qubit_from_parts(eta, &o1, &o2).expect("3x3 rotations")
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn haar_pure_state(d: usize, rng: &mut impl Rng) -> CVector {
    let v = ginibre(d, 1, rng).column(0).into_owned();
    let n = v.norm();
    v / c(n, 0.0)
}
