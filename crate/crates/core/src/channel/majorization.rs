use serde::Serialize;

use crate::error::{Error, Result};

/// Outcome of comparing eigenvalue moduli against singular values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub weak_ok: bool,
    pub log_ok: bool,
    pub det_ok: bool,
    /// `min_k Σ_{i≤k} s_i − Σ_{i≤k} |λ_i|`
    pub weak_margin: f64,
    /// `min_{k<N} Π_{i≤k} s_i − Π_{i≤k} |λ_i|`
    pub log_margin: f64,
    /// `|Π s_i − Π |λ_i||`
    pub det_gap: f64,
}

const SUM_TOL: f64 = 1e-10;
const DET_TOL: f64 = 1e-9;

/// Weak majorization of partial sums, log majorization of partial products
/// and equality of the full products. Inputs are sorted in decreasing order
/// before comparison.
pub fn check_majorization(moduli: &[f64], singulars: &[f64]) -> Result<MajorizationReport> {
    if moduli.len() != singulars.len() {
        return Err(Error::Dimension(format!(
            "{} moduli against {} singular values",
            moduli.len(),
            singulars.len()
        )));
    }
    let mut m = moduli.to_vec();
    let mut s = singulars.to_vec();
    m.sort_by(|a, b| b.total_cmp(a));
    s.sort_by(|a, b| b.total_cmp(a));
    let n = m.len();

    let scale = s.iter().sum::<f64>().max(1.0);
    let (mut sm, mut ss) = (0.0, 0.0);
    let mut weak_margin = f64::INFINITY;
    for k in 0..n {
        sm += m[k];
        ss += s[k];
        weak_margin = weak_margin.min(ss - sm);
    }

    let (mut pm, mut ps) = (1.0, 1.0);
    let mut log_margin = f64::INFINITY;
    let mut log_ok = true;
    for k in 0..n {
        pm *= m[k];
        ps *= s[k];
        if k + 1 < n {
            let gap = ps - pm;
            log_margin = log_margin.min(gap);
            if gap < -SUM_TOL * ps.max(1.0) {
                log_ok = false;
            }
        }
    }
    let det_gap = (pm - ps).abs();
    Ok(MajorizationReport {
        weak_ok: n == 0 || weak_margin >= -SUM_TOL * scale,
        log_ok,
        det_ok: det_gap <= DET_TOL * ps.abs().max(1.0),
        weak_margin: if n == 0 { 0.0 } else { weak_margin },
        log_margin: if n < 2 { 0.0 } else { log_margin },
        det_gap,
    })
}
