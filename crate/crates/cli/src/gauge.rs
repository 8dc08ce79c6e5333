use serde::Serialize;

use qchan::gauge::{random_gauge, verify_orbit_invariance, GateSet, GaugeTransform, OrbitReport};
use qchan::io::parse_channel;
use qchan::linalg::{c, CMatrix};

use crate::{read, to_json, GaugeArgs, Globals, Outcome, EXIT_OK, EXIT_REFUTED};

/// `X₀₁` of the deliberately broken gauge.
const BROKEN_ENTRY: f64 = 0.1;

#[derive(Debug, Serialize)]
struct GaugeReport {
    seed: u64,
    strength: f64,
    max_len: usize,
    broken_gauge: bool,
    gates: usize,
    #[serde(flatten)]
    orbit: OrbitReport,
}

/// `|0⟩⟨0|`, used as both the prepared state and the measured effect.
fn ground(d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(0, 0)] = c(1.0, 0.0);
    m
}

pub fn cmd_gauge(args: &GaugeArgs, g: Globals) -> anyhow::Result<Outcome> {
    let gates = args
        .gates
        .iter()
        .map(|p| Ok(parse_channel(&read(p)?)?.superoperator()))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let d = gates.first().map(|g| g.dim()).ok_or_else(|| anyhow::anyhow!("at least one gate file is required"))?;
    let gs = GateSet::new(gates, &ground(d), &ground(d))?;
    let x = if args.break_gauge {
        GaugeTransform::broken(d, args.strength, BROKEN_ENTRY, g.seed)?
    } else {
        random_gauge(d, args.strength, g.seed)?
    };
    let orbit = verify_orbit_invariance(&gs, &x, args.max_len)?;
    let passed = orbit.passed;
    let report = GaugeReport {
        seed: g.seed,
        strength: args.strength,
        max_len: args.max_len,
        broken_gauge: args.break_gauge,
        gates: gs.gates().len(),
        orbit,
    };
    Ok(Outcome {
        output: to_json(&report)?,
        message: (!passed).then(|| "gauge invariance violated".to_string()),
        code: if passed { EXIT_OK } else { EXIT_REFUTED },
    })
}
