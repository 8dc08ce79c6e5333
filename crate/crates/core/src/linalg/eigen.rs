//! General (nonsymmetric) dense eigenvalues: balancing, Householder
//! reduction to upper Hessenberg form and single-shift complex QR iteration
//! with Wilkinson shifts.

use num_complex::Complex64;

use super::{c, CMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// QR sweeps allowed per eigenvalue before giving up.
    pub max_sweeps_per_eigenvalue: usize,
    pub balance: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            max_sweeps_per_eigenvalue: 60,
            balance: true,
        }
    }
}

/// Eigenvalues of a square complex matrix, in the order they deflate.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    eigenvalues_with(m, EigenOptions::default())
}

pub fn eigenvalues_with(m: &CMatrix, opts: EigenOptions) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !super::all_finite(m) {
        return Err(Error::NonFinite("eigenvalue input"));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.clone();
    if opts.balance {
        balance(&mut h);
    }
    reduce_to_hessenberg(&mut h);
    hessenberg_qr(&mut h, opts.max_sweeps_per_eigenvalue)
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two so that rows and columns have
/// comparable norms.
fn balance(a: &mut CMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += abs1(a[(j, i)]);
                    row += abs1(a[(i, j)]);
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let sum = col + row;
            let mut f = 1.0;
            let mut g = row / RADIX;
            while col < g {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * sum {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place unitary similarity to upper Hessenberg form.
fn reduce_to_hessenberg(a: &mut CMatrix) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![c(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { c(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(k + 1) {
            *vi /= vnorm;
        }
        // A ← (I − 2vv†) A
        for j in k..n {
            let mut s = c(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * a[(i, j)];
            }
            s *= 2.0;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s;
            }
        }
        // A ← A (I − 2vv†)
        for i in 0..n {
            let mut s = c(0.0, 0.0);
            for j in k + 1..n {
                s += a[(i, j)] * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = c(0.0, 0.0);
        }
    }
}

/// Rotation `[c s; -s̄ c]` (c real) mapping `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == c(0.0, 0.0) {
        return (1.0, c(0.0, 0.0));
    }
    let na = a.norm();
    if na == 0.0 {
        return (0.0, c(1.0, 0.0));
    }
    let r = na.hypot(b.norm());
    (na / r, (a / na) * b.conj() / r)
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * cc;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let den = if plus.norm() >= minus.norm() { plus } else { minus };
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

fn hessenberg_qr(h: &mut CMatrix, max_sweeps: usize) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut eig = vec![c(0.0, 0.0); n];
    let scale = h.iter().map(|z| abs1(*z)).fold(0.0, f64::max);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the unreduced block ending at `hi`.
        let mut l = hi;
        while l > 0 {
            let mut s = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if s == 0.0 {
                s = scale;
            }
            if abs1(h[(l, l - 1)]) <= f64::EPSILON * s {
                h[(l, l - 1)] = c(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            sweeps = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::NoConvergence {
                iterations: total,
                unresolved: hi + 1,
            });
        }
        let shift = if sweeps > 0 && sweeps.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            let sub = abs1(h[(hi, hi - 1)]) + if hi >= 2 { abs1(h[(hi - 1, hi - 2)]) } else { 0.0 };
            h[(hi, hi)] + c(0.75 * sub, -0.4375 * sub)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(h, l, hi, shift);
        sweeps += 1;
        total += 1;
    }
    Ok(eig)
}

/// One explicit shifted QR step `H - μI = QR, H ← RQ + μI` on the block
/// `l..=hi`.
fn qr_sweep(h: &mut CMatrix, l: usize, hi: usize, mu: Complex64) {
    for k in l..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * cs + sn * y;
            h[(k + 1, j)] = -sn.conj() * x + y * cs;
        }
        h[(k + 1, k)] = c(0.0, 0.0);
        rots.push((cs, sn));
    }
    for (k, &(cs, sn)) in (l..hi).zip(rots.iter()) {
        for i in l..=(k + 1) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * cs + y * sn.conj();
            h[(i, k + 1)] = -x * sn + y * cs;
        }
    }
    for k in l..=hi {
        h[(k, k)] += mu;
    }
}
