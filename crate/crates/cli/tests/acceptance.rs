//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qchan::channel::{
    default_cp_tolerance, is_completely_positive, sample_cptp, sample_unital_qubit, KrausSet, QubitSpectralClass, Spectrum, Superoperator,
};
use qchan::criteria::{det_range_check, fa_conditions, fa_singular, k_norm_bound, real_tetrahedron, theorem1, z_feasibility, DetSign, EtaTriple};
use qchan::gauge::{random_gateset, random_gauge, verify_orbit_invariance, GaugeTransform};
use qchan::linalg::{bottleneck_distance, c};
use qchan::metrics::{
    avg_gate_fidelity, diamond_bounds_from_r, diamond_lower_wallman, mc_avg_gate_fidelity, mc_unitarity, unitarity_exact,
    unitarity_lower_from_r, unitarity_lower_from_spectrum,
};
use qchan::synthesis::{det_saturating_channel, det_saturating_transfer, synthesize, synthesize_from_complex_pair, xi_from_real_spectrum};
use qchan_cli::{cmd_region, RegionArgs};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

const SOUNDNESS_TOL: f64 = 1e-9;

fn criterion_soundness() -> Verdict {
    let start = Instant::now();
    let mut refutations = 0;
    let mut not_cp = 0;
    let mut check = |phi: &Superoperator, seed: u64| {
        if !is_completely_positive(phi, SOUNDNESS_TOL).unwrap().completely_positive {
            not_cp += 1;
            return;
        }
        let sp = Spectrum::of(phi).unwrap();
        let tm = phi.to_transfer().unwrap();
        let ok = theorem1(&sp).unwrap().margin >= -SOUNDNESS_TOL
            && det_range_check(&sp).unwrap().margin >= -SOUNDNESS_TOL
            && k_norm_bound(&sp).unwrap().verdict(Some(tm.translation_norm_sqr())).margin >= -SOUNDNESS_TOL
            && z_feasibility(&sp, 32, seed).unwrap().feasible;
        if !ok {
            refutations += 1;
        }
    };
    for seed in 0..10_000 {
        check(&sample_cptp(2, 4, seed).unwrap().to_superoperator(), seed);
        check(&sample_unital_qubit(seed).to_superoperator(), seed);
    }
    let elapsed = start.elapsed();
    verdict(
        refutations == 0 && not_cp == 0 && elapsed <= Duration::from_secs(60),
        format!("20000 channels, {refutations} refutations, {not_cp} failed the Choi check, {:.1} s (limit 60 s)", elapsed.as_secs_f64()),
    )
}

fn branch_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for _ in 0..100_000 {
        let e: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        let eta = EtaTriple::new(e[0], e[1], e[2]);
        if fa_conditions(eta).satisfied != fa_singular(eta.singular(), DetSign::of(eta.det())).satisfied {
            mismatches += 1;
        }
    }
    verdict(mismatches == 0, format!("100000 random η, {mismatches} boolean mismatches"))
}

fn determinant_extremes() -> Verdict {
    let mut min_det = f64::INFINITY;
    for seed in 0..10_000u64 {
        let phi = if seed % 2 == 0 {
            sample_cptp(2, 1 + (seed as usize / 2) % 4, seed).unwrap().to_superoperator()
        } else {
            sample_unital_qubit(seed).to_superoperator()
        };
        assert!(is_completely_positive(&phi, SOUNDNESS_TOL).unwrap().completely_positive);
        min_det = min_det.min(phi.to_transfer().unwrap().det_bloch());
    }
    let floor = -1.0 / 27.0;
    let exact = det_saturating_transfer().det_bloch();
    let choi_min = det_saturating_channel().choi().eigenvalues()[0];
    verdict(
        min_det >= floor - 1e-9 && exact == floor && choi_min.abs() <= 1e-10,
        format!("min det T over 10000 CP samples {min_det:.6}; saturating det T = {exact} (−1/27 = {floor}); Choi min {choi_min:.1e}"),
    )
}

fn region_disc(x: f64, radius: f64, grid: usize) -> Result<String, String> {
    let csv = cmd_region(&RegionArgs { x, grid }).map_err(|e| e.to_string())?.output;
    let h = 2.0 / (grid - 1) as f64;
    let band = h * std::f64::consts::SQRT_2;
    let (mut inside_max, mut outside_min) = (0.0f64, f64::INFINITY);
    let mut wrong_disc = 0;
    let mut interior_disagreements = 0;
    let mut boundary_disagreements = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let z = c(f[0].parse().unwrap(), f[1].parse().unwrap());
        let r = z.norm();
        let disc = f[2] == "1";
        if disc {
            inside_max = inside_max.max(r);
        } else {
            outside_min = outside_min.min(r);
        }
        if disc != (r <= radius) && (r - radius).abs() > 1e-12 {
            wrong_disc += 1;
        }
        if !f[3].is_empty() && (f[3] == "1") != disc {
            if (r - radius).abs() <= band {
                boundary_disagreements += 1;
            } else {
                interior_disagreements += 1;
            }
        }
    }
    let radius_ok = inside_max <= radius + 1e-12 && inside_max >= radius - band && outside_min >= radius - 1e-12 && outside_min <= radius + band;
    if wrong_disc == 0 && interior_disagreements == 0 && radius_ok {
        Ok(format!(
            "x={x}: radius {radius} (cells inside ≤ {inside_max:.4}, outside ≥ {outside_min:.4}), {boundary_disagreements} boundary disagreements"
        ))
    } else {
        Err(format!("x={x}: {wrong_disc} misplaced disc cells, {interior_disagreements} interior disagreements, radius bracket [{inside_max}, {outside_min}]"))
    }
}

fn region_reproduction() -> Verdict {
    let start = Instant::now();
    let results = [region_disc(0.4, 0.7, 201), region_disc(-0.4, 0.3, 201)];
    let elapsed = start.elapsed();
    let pass = results.iter().all(Result::is_ok) && elapsed <= Duration::from_secs(30);
    let detail: Vec<String> = results.into_iter().map(|r| r.unwrap_or_else(|e| e)).collect();
    verdict(pass, format!("{}; {:.1} s (limit 30 s)", detail.join("; "), elapsed.as_secs_f64()))
}

fn synthesis_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_spec, mut worst_choi, mut failures) = (0.0f64, f64::INFINITY, 0);
    let mut pairs = 0;
    while pairs < 10_000 {
        let x: f64 = rng.random_range(-1.0..=1.0);
        let r = rng.random_range(0.0..=1.0) * (1.0 + x) / 2.0;
        let z = Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI));
        if z.im == 0.0 {
            continue;
        }
        pairs += 1;
        match synthesize_from_complex_pair(x, z) {
            Ok(phi) => {
                worst_choi = worst_choi.min(phi.choi().eigenvalues()[0]);
                worst_spec = worst_spec.max(bottleneck_distance(phi.spectrum().unwrap().values(), &[c(1.0, 0.0), c(x, 0.0), z, z.conj()]));
                if phi.trace_preservation_deviation() > 1e-12 {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let (mut xi_spec, mut xi_normal, mut xi_choi) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut triples = 0;
    while triples < 10_000 {
        let l: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        if !real_tetrahedron(l[0], l[1], l[2]).satisfied {
            continue;
        }
        triples += 1;
        match xi_from_real_spectrum(l[0], l[1], l[2]) {
            Ok(xi) => {
                let m = xi.matrix();
                xi_normal = xi_normal.max((m * m.adjoint() - m.adjoint() * m).norm());
                xi_choi = xi_choi.min(xi.choi().eigenvalues()[0]);
                let expected = [c(1.0, 0.0), c(l[0], 0.0), c(l[1], 0.0), c(l[2], 0.0)];
                xi_spec = xi_spec.max(bottleneck_distance(xi.spectrum().unwrap().values(), &expected));
            }
            Err(_) => failures += 1,
        }
    }
    let pass = failures == 0 && worst_choi >= -1e-10 && worst_spec <= 1e-9 && xi_choi >= -1e-10 && xi_spec <= 1e-9 && xi_normal <= 1e-12;
    verdict(
        pass,
        format!(
            "mixtures: Choi min {worst_choi:.1e}, spectral error {worst_spec:.1e}; Ξ: Choi min {xi_choi:.1e}, spectral error {xi_spec:.1e}, normality {xi_normal:.1e}; {failures} failures"
        ),
    )
}

fn gauge_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut failures, mut worst_ratio, mut worst_spec) = (0, 0.0f64, 0.0f64);
    for seed in 0..1000u64 {
        let gs = random_gateset(2, 2, seed).unwrap();
        let x = random_gauge(2, rng.random_range(0.0..=0.5), seed).unwrap();
        let rep = verify_orbit_invariance(&gs, &x, 3).unwrap();
        worst_ratio = worst_ratio.max(rep.max_prob_deviation / rep.condition_estimate);
        worst_spec = worst_spec.max(rep.max_spectral_deviation);
        if !rep.passed {
            failures += 1;
        }
    }
    let mut undetected = 0;
    for seed in 0..20u64 {
        let gs = random_gateset(2, 2, seed).unwrap();
        let x = GaugeTransform::broken(2, 0.3, 0.1, seed).unwrap();
        if verify_orbit_invariance(&gs, &x, 3).unwrap().passed {
            undetected += 1;
        }
    }
    verdict(
        failures == 0 && undetected == 0,
        format!(
            "1000 pairs: {failures} failures, worst prob deviation/condition {worst_ratio:.1e} (limit 1e-9), worst spectral {worst_spec:.1e} (limit 1e-8); broken gauge undetected in {undetected}/20"
        ),
    )
}

fn metric_formulas() -> Verdict {
    let bit_flip = KrausSet::bit_flip(0.25).unwrap();
    let f_bf = avg_gate_fidelity(&bit_flip.to_superoperator()).unwrap();
    let dep = KrausSet::depolarizing(0.5).unwrap().to_superoperator();
    let f_dep = avg_gate_fidelity(&dep).unwrap();
    let u_dep = unitarity_exact(&dep.to_transfer().unwrap());
    let saturation = (u_dep - unitarity_lower_from_r(1.0 - f_dep, 2).unwrap()).abs();
    let closed = (f_bf - 5.0 / 6.0).abs() <= 1e-15 && (f_dep - 0.75).abs() <= 1e-15 && (u_dep - 0.25).abs() <= 1e-15 && saturation <= 1e-12;

    // Bit flip plus a generic non-unital channel; 3σ plus round-off slack.
    let channels = [bit_flip, sample_cptp(2, 4, 7).unwrap()];
    let mut rates = Vec::new();
    for ks in &channels {
        let phi = ks.to_superoperator();
        let f = avg_gate_fidelity(&phi).unwrap();
        let u = unitarity_exact(&phi.to_transfer().unwrap());
        let (mut f_hits, mut u_hits) = (0, 0);
        for seed in 0..200u64 {
            let mf = mc_avg_gate_fidelity(ks, 100_000, seed).unwrap();
            let mu = mc_unitarity(ks, 100_000, seed + 1000).unwrap();
            f_hits += usize::from((mf.estimate - f).abs() <= 3.0 * mf.std_error + 1e-12);
            u_hits += usize::from((mu.estimate - u).abs() <= 3.0 * mu.std_error + 1e-12);
        }
        rates.push(f_hits as f64 / 200.0);
        rates.push(u_hits as f64 / 200.0);
    }
    let mc_ok = rates.iter().all(|r| *r >= 0.99);
    verdict(
        closed && mc_ok,
        format!(
            "F(bit flip) = {f_bf}, F(dep) = {f_dep}, u(dep) = {u_dep}, saturation gap {saturation:.1e}; 3σ hit rates (F, u) bit flip {:.3}/{:.3}, random {:.3}/{:.3}",
            rates[0], rates[1], rates[2], rates[3]
        ),
    )
}

fn bound_ordering() -> Verdict {
    let mut violations = 0;
    for seed in 0..10_000u64 {
        let d = 2 + (seed % 3) as usize;
        let rank = 1 + (seed as usize / 3) % (d * d);
        let phi = sample_cptp(d, rank, seed).unwrap().to_superoperator();
        let u = unitarity_exact(&phi.to_transfer().unwrap());
        let r = 1.0 - avg_gate_fidelity(&phi).unwrap();
        let u_r = unitarity_lower_from_r(r, d).unwrap();
        let u_sp = unitarity_lower_from_spectrum(&phi.spectrum().unwrap());
        let (lo, hi) = diamond_bounds_from_r(r, d).unwrap();
        let wallman = diamond_lower_wallman(u_r.max(u_sp), r, d).map(f64::is_finite).unwrap_or(false)
            && diamond_lower_wallman(u, r, d).map(f64::is_finite).unwrap_or(false);
        if u < u_r - 1e-10 || u < u_sp - 1e-10 || lo > hi + 1e-10 || !wallman {
            violations += 1;
        }
    }
    verdict(violations == 0, format!("10000 channels (d = 2, 3, 4), {violations} violations"))
}

fn information_loss() -> Verdict {
    for seed in 0..1000u64 {
        let phi = sample_cptp(2, 4, seed).unwrap().to_superoperator();
        let sp = phi.spectrum().unwrap();
        let Ok(class @ QubitSpectralClass::ConjugatePair { .. }) = sp.classify_qubit() else { continue };
        let twin = synthesize(&class).unwrap();
        let spectral = bottleneck_distance(sp.values(), twin.spectrum().unwrap().values());
        let distance = phi.distance(&twin);
        let both_cp = [&phi, &twin].iter().all(|m| is_completely_positive(m, default_cp_tolerance(2)).unwrap().completely_positive);
        if spectral <= 1e-9 && distance >= 1e-3 && both_cp {
            return verdict(
                true,
                format!("random channel (seed {seed}) and its mixture twin: spectral distance {spectral:.1e}, superoperator distance {distance:.3}"),
            );
        }
    }
    verdict(false, "no verified pair found".into())
}

fn main() {
    type Criterion = (&'static str, &'static str, fn() -> Verdict);
    let criteria: [Criterion; 9] = [
        ("AC1", "criterion soundness", criterion_soundness),
        ("AC2", "branch equivalence", branch_equivalence),
        ("AC3", "determinant extremes", determinant_extremes),
        ("AC4", "eigenvalue region", region_reproduction),
        ("AC5", "synthesis exactness", synthesis_exactness),
        ("AC6", "gauge invariance", gauge_invariance),
        ("AC7", "metric formulas", metric_formulas),
        ("AC8", "bound ordering", bound_ordering),
        ("AC9", "information loss", information_loss),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let v = run();
        failed += usize::from(!v.pass);
        println!("{id} {} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
