use serde::Serialize;

use qchan::channel::{sample_cptp, Spectrum};
use qchan::criteria::{det_range_check, k_norm_bound, theorem1, z_feasibility};

use crate::{to_json, Globals, Outcome, SampleArgs};

const HISTOGRAM_BINS: usize = 10;
/// Smallest `det T` of a CP qubit channel.
pub const DET_T_FLOOR: f64 = -1.0 / 27.0;

#[derive(Debug, Serialize)]
struct Histogram {
    edges: Vec<f64>,
    counts: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct Summary {
    min: f64,
    max: f64,
    mean: f64,
}

impl Summary {
    fn of(v: &[f64]) -> Self {
        Self {
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

#[derive(Debug, Serialize)]
struct QubitStats {
    theorem1_pass_rate: f64,
    det_range_pass_rate: f64,
    k_norm_pass_rate: f64,
    z_feasibility_pass_rate: f64,
    /// Samples refuted by at least one necessary criterion.
    refutations: usize,
    det_t: Summary,
    det_t_negative_fraction: f64,
    det_t_floor: f64,
    det_t_above_floor: bool,
}

#[derive(Debug, Serialize)]
struct DimStats {
    dim: usize,
    rank: usize,
    samples: usize,
    mean_abs_lambda1: f64,
    gap: Summary,
    gap_histogram: Histogram,
    #[serde(skip_serializing_if = "Option::is_none")]
    qubit: Option<QubitStats>,
}

#[derive(Debug, Serialize)]
struct SampleReport {
    seed: u64,
    dims: Vec<DimStats>,
    /// Mean `|λ₁|` decreases as `d` grows (only meaningful with several dims).
    mean_abs_lambda1_decreasing: bool,
}

/// Seed of the `i`-th channel sampled in dimension `d`.
pub fn channel_seed(seed: u64, d: usize, i: usize) -> u64 {
    seed.wrapping_add((d as u64) << 40).wrapping_add(i as u64)
}

fn sample_dim(d: usize, rank: usize, n: usize, z_samples: usize, seed: u64) -> anyhow::Result<DimStats> {
    let mut gaps = Vec::with_capacity(n);
    let mut dets = Vec::new();
    let mut passes = [0usize; 4];
    let mut refutations = 0;
    for i in 0..n {
        let s = channel_seed(seed, d, i);
        let phi = sample_cptp(d, rank, s)?.to_superoperator();
        let sp = Spectrum::of(&phi)?;
        gaps.push(sp.gap());
        if d == 2 {
            let tm = phi.to_transfer()?;
            dets.push(tm.det_bloch());
            let ok = [
                theorem1(&sp)?.satisfied,
                det_range_check(&sp)?.satisfied,
                k_norm_bound(&sp)?.verdict(Some(tm.translation_norm_sqr())).satisfied,
                z_feasibility(&sp, z_samples.max(1), s)?.feasible,
            ];
            for (p, ok) in passes.iter_mut().zip(ok) {
                *p += usize::from(ok);
            }
            refutations += usize::from(ok.contains(&false));
        }
    }
    let mut counts = vec![0; HISTOGRAM_BINS];
    for g in &gaps {
        let bin = ((g.clamp(0.0, 1.0) * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        counts[bin] += 1;
    }
    let rate = |k: usize| k as f64 / n as f64;
    let qubit = (d == 2).then(|| {
        let det_t = Summary::of(&dets);
        QubitStats {
            theorem1_pass_rate: rate(passes[0]),
            det_range_pass_rate: rate(passes[1]),
            k_norm_pass_rate: rate(passes[2]),
            z_feasibility_pass_rate: rate(passes[3]),
            refutations,
            det_t_negative_fraction: rate(dets.iter().filter(|x| **x < 0.0).count()),
            det_t_floor: DET_T_FLOOR,
            det_t_above_floor: det_t.min >= DET_T_FLOOR - 1e-9,
            det_t,
        }
    });
    Ok(DimStats {
        dim: d,
        rank,
        samples: n,
        mean_abs_lambda1: 1.0 - gaps.iter().sum::<f64>() / n as f64,
        gap: Summary::of(&gaps),
        gap_histogram: Histogram {
            edges: (0..=HISTOGRAM_BINS).map(|k| k as f64 / HISTOGRAM_BINS as f64).collect(),
            counts,
        },
        qubit,
    })
}

pub fn cmd_sample(args: &SampleArgs, g: Globals) -> anyhow::Result<Outcome> {
    if args.n == 0 {
        anyhow::bail!("--n must be at least 1");
    }
    let mut dims = args.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    let mut stats = Vec::new();
    for &d in &dims {
        if d == 0 {
            anyhow::bail!("dimension must be positive");
        }
        let rank = args.rank.unwrap_or(d * d);
        stats.push(sample_dim(d, rank, args.n, args.z_samples, g.seed)?);
    }
    let decreasing = stats.windows(2).all(|w| w[1].mean_abs_lambda1 < w[0].mean_abs_lambda1);
    Ok(Outcome::ok(to_json(&SampleReport { seed: g.seed, dims: stats, mean_abs_lambda1_decreasing: decreasing })?))
}
