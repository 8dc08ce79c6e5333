//! Feasibility search: does some `(s, k)` reproduce a qubit spectrum while
//! satisfying every exact CP condition?
//!
//! The search runs over `(s₁, s₂, ‖k‖, θ, φ)`; `s₃` is pinned by the product
//! constraint `s₁s₂s₃ = |λ₁λ₂λ₃|`. The objective is the smallest slack among
//! weak and log majorization of the moduli by `s`, the sign-resolved
//! Fujiwara–Algoet conditions, the Bloch-norm bound, the `‖k‖²` bound and the
//! `Z ≥ 0` condition. A non-negative maximum means feasible.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fa_singular_margin, k_norm_bound, z_singular_margin, Branch, CriterionVerdict, DetSign, SingularTriple};
use crate::channel::Spectrum;
use crate::error::{Error, Result};

/// Margin above which the best point counts as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSearchOptions {
    /// Points per axis of the `(s₁, s₂)` grid scanned at `k = 0`.
    pub grid: usize,
    pub refine_iterations: usize,
}

impl Default for ZSearchOptions {
    fn default() -> Self {
        Self { grid: 25, refine_iterations: 200 }
    }
}

/// A candidate `(s, k)` with `kᵢ` paired to `sᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZWitness {
    pub s: [f64; 3],
    pub k: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZFeasibility {
    pub feasible: bool,
    pub best_margin: f64,
    pub witness: Option<ZWitness>,
    /// Name of the closed-form condition that already rules the spectrum out.
    pub certificate: Option<String>,
}

impl ZFeasibility {
    pub fn verdict(&self) -> CriterionVerdict {
        CriterionVerdict {
            criterion: "z_feasibility".into(),
            satisfied: self.feasible,
            margin: self.best_margin,
            branch: Branch::None,
            witness: self.witness,
        }
    }
}

struct Problem {
    moduli: [f64; 3],
    p_abs: f64,
    sign: DetSign,
    k_bound: f64,
    upper: [f64; 5],
}

impl Problem {
    fn point(&self, x: &[f64; 5]) -> Option<ZWitness> {
        let (s1, s2, r, th, ph) = (x[0], x[1], x[2], x[3], x[4]);
        let s3 = if self.p_abs < 1e-12 {
            0.0
        } else if s1 * s2 > 0.0 {
            self.p_abs / (s1 * s2)
        } else {
            return None;
        };
        let k = [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()];
        let mut pairs = [(s1, k[0]), (s2, k[1]), (s3, k[2])];
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        Some(ZWitness {
            s: [pairs[0].0, pairs[1].0, pairs[2].0],
            k: [pairs[0].1, pairs[1].1, pairs[2].1],
        })
    }

    fn margin_of(&self, w: &ZWitness) -> f64 {
        let s = w.s;
        let m = self.moduli;
        let weak = [s[0] - m[0], s[0] + s[1] - m[0] - m[1], s[0] + s[1] + s[2] - m[0] - m[1] - m[2]];
        let log = [s[0] - m[0], s[0] * s[1] - m[0] * m[1]];
        let st = SingularTriple(s);
        let kk: f64 = w.k.iter().map(|x| x * x).sum();
        let det = self.sign.factor() * st.product();
        let bloch = 1.0 - s.iter().map(|x| x * x).sum::<f64>() + 2.0 * det - kk;
        let bound = self.k_bound - kk;
        let fa = fa_singular_margin(&st, self.sign);
        let z = z_singular_margin(&st, w.k, self.sign);
        weak.into_iter()
            .chain(log)
            .chain([fa, bloch, bound, z])
            .fold(f64::INFINITY, f64::min)
    }

    fn objective(&self, x: &[f64; 5]) -> f64 {
        match self.point(x) {
            Some(w) => self.margin_of(&w),
            None => -1e6,
        }
    }

    fn clamp(&self, x: &mut [f64; 5]) {
        for (v, hi) in x.iter_mut().zip(self.upper) {
            *v = v.clamp(0.0, hi);
        }
    }
}

/// [`z_feasibility_with`] using default options.
pub fn z_feasibility(sp: &Spectrum, samples: usize, seed: u64) -> Result<ZFeasibility> {
    z_feasibility_with(sp, samples, seed, ZSearchOptions::default())
}

/// Searches for a CP-consistent `(s, k)` matching the spectrum.
///
/// `samples` random starts are drawn from a ChaCha8 stream seeded with
/// `seed`, so results are reproducible. Finding no feasible point is strong
/// numerical evidence, not a proof, that no CP channel has the spectrum.
pub fn z_feasibility_with(sp: &Spectrum, samples: usize, seed: u64, opts: ZSearchOptions) -> Result<ZFeasibility> {
    let bound = k_norm_bound(sp)?;
    if !bound.is_feasible() {
        return Ok(ZFeasibility {
            feasible: false,
            best_margin: bound.value(),
            witness: None,
            certificate: Some("k_norm_bound".into()),
        });
    }
    let mut m = sp.moduli();
    m.sort_by(|a, b| b.total_cmp(a));
    let moduli = [m[0], m[1], m[2]];
    let p = sp.non_unit_product().re;
    let s_hi = moduli[0].max(1.0);
    let k_bound = bound.value().max(0.0);
    let problem = Problem {
        moduli,
        p_abs: p.abs(),
        sign: DetSign::of(p),
        k_bound,
        upper: [s_hi, s_hi, k_bound.sqrt(), FRAC_PI_2, FRAC_PI_2],
    };

    let mut best_x = [moduli[0], moduli[1], 0.0, 0.0, 0.0];
    let mut best_f = problem.objective(&best_x);
    let consider = |x: [f64; 5], f: f64, best_x: &mut [f64; 5], best_f: &mut f64| {
        if f > *best_f || (f == *best_f && x.iter().zip(best_x.iter()).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()) == Some(std::cmp::Ordering::Less)) {
            *best_x = x;
            *best_f = f;
        }
    };

    let g = opts.grid.max(2);
    for i in 0..g {
        for j in 0..g {
            let s1 = moduli[0] + (s_hi - moduli[0]) * i as f64 / (g - 1) as f64;
            let s2 = s_hi * j as f64 / (g - 1) as f64;
            let x = [s1, s2, 0.0, 0.0, 0.0];
            consider(x, problem.objective(&x), &mut best_x, &mut best_f);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut x = [0.0; 5];
        for (v, hi) in x.iter_mut().zip(problem.upper) {
            *v = rng.random::<f64>() * hi;
        }
        consider(x, problem.objective(&x), &mut best_x, &mut best_f);
    }

    if best_f < FEASIBILITY_TOL && opts.refine_iterations > 0 {
        let step: Vec<f64> = problem.upper.iter().map(|h| 0.05 * h).collect();
        let (x, f) = nelder_mead_max(
            |v| {
                let mut x = [v[0], v[1], v[2], v[3], v[4]];
                problem.clamp(&mut x);
                problem.objective(&x)
            },
            &best_x,
            &step,
            opts.refine_iterations,
        );
        let mut x = [x[0], x[1], x[2], x[3], x[4]];
        problem.clamp(&mut x);
        consider(x, f, &mut best_x, &mut best_f);
    }

    let witness = problem.point(&best_x);
    if !best_f.is_finite() {
        return Err(Error::Numeric("feasibility objective is not finite".into()));
    }
    Ok(ZFeasibility {
        feasible: best_f >= -FEASIBILITY_TOL,
        best_margin: best_f,
        witness,
        certificate: None,
    })
}

/// Derivative-free maximization (Nelder–Mead) from `x0` with an axis-aligned
/// initial simplex of the given step sizes. Returns the best vertex.
pub fn nelder_mead_max<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], step: &[f64], iterations: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += if step[i] != 0.0 { step[i] } else { 1e-3 };
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };

    for _ in 0..iterations {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let fr = f(&reflected);
        if fr > simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let fe = f(&expanded);
            simplex[n] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = lerp(&centroid, &worst.0, 0.5);
            let fc = f(&contracted);
            if fc > worst.1 {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = lerp(&best, &vertex.0, 0.5);
                    let fx = f(&x);
                    *vertex = (x, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    simplex.swap_remove(0)
}
