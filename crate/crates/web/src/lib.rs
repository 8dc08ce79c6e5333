//! Browser bindings for the qubit eigenvalue-region demo.
//!
//! Each export is a thin wrapper over a plain Rust function so the logic is
//! testable natively; the wrappers only translate errors into `JsValue`s.

use num_complex::Complex64;
use qchan::criteria::{complex_pair_disc, real_tetrahedron};
use qchan::synthesis::{region_grid, synthesize_from_complex_pair, xi_from_real_spectrum};
use qchan::channel::Superoperator;
use wasm_bindgen::prelude::*;

/// Cell flag: `|z| ≤ (1 + x)/2`.
pub const DISC: u8 = 1;
/// Cell flag: the Choi oracle produced a verdict.
pub const ORACLE_KNOWN: u8 = 2;
/// Cell flag: the oracle verdict is "completely positive".
pub const ORACLE_CP: u8 = 4;

/// Region flags for a `grid × grid` lattice over `[-1, 1]²`, row-major with
/// rows indexed by `Im z` (bottom row first).
pub fn region_flags(x: f64, grid: usize) -> Result<Vec<u8>, String> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(format!("x must lie in [-1, 1], got {x}"));
    }
    let cells = region_grid(x, grid).map_err(|e| e.to_string())?;
    Ok(cells
        .iter()
        .map(|c| {
            let mut f = if c.disc { DISC } else { 0 };
            if let Some(cp) = c.oracle {
                f |= ORACLE_KNOWN;
                if cp {
                    f |= ORACLE_CP;
                }
            }
            f
        })
        .collect())
}

/// Summary of a synthesized channel: smallest Choi eigenvalue followed by the
/// spectrum as interleaved `(re, im)` pairs.
fn summary(phi: &Superoperator) -> Result<Vec<f64>, String> {
    let mut out = vec![phi.choi().eigenvalues()[0]];
    for z in phi.spectrum().map_err(|e| e.to_string())?.values() {
        out.extend([z.re, z.im]);
    }
    Ok(out)
}

/// Synthesizes the mixture channel with spectrum `{1, x, z, z̄}`.
pub fn pair_channel(x: f64, re: f64, im: f64) -> Result<Vec<f64>, String> {
    let z = Complex64::new(re, im);
    let margin = complex_pair_disc(x, z).margin;
    let phi = synthesize_from_complex_pair(x, z).map_err(|e| format!("{e} (margin {margin:.3e})"))?;
    summary(&phi)
}

/// Tetrahedron margin followed, when realizable, by the summary of the
/// normal channel with spectrum `{1, l1, l2, l3}`.
pub fn real_channel(l1: f64, l2: f64, l3: f64) -> Result<Vec<f64>, String> {
    let margin = real_tetrahedron(l1, l2, l3).margin;
    let xi = xi_from_real_spectrum(l1, l2, l3).map_err(|e| format!("{e} (margin {margin:.3e})"))?;
    let mut out = vec![margin];
    out.extend(summary(&xi)?);
    Ok(out)
}

#[wasm_bindgen]
pub fn region(x: f64, grid: usize) -> Result<Vec<u8>, JsValue> {
    region_flags(x, grid).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = synthesizePair)]
pub fn synthesize_pair(x: f64, re: f64, im: f64) -> Result<Vec<f64>, JsValue> {
    pair_channel(x, re, im).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = synthesizeReal)]
pub fn synthesize_real(l1: f64, l2: f64, l3: f64) -> Result<Vec<f64>, JsValue> {
    real_channel(l1, l2, l3).map_err(|e| JsValue::from_str(&e))
}
