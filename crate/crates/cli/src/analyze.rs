use serde::Serialize;

use qchan::channel::{default_cp_tolerance, is_completely_positive, QubitSpectralClass, Spectrum, TransferMatrix};
use qchan::criteria::{det_range_check, k_norm_bound, theorem1, z_feasibility, CriterionVerdict};
use qchan::io::{parse_input, Channel, Input};
use qchan::metrics::{Metric, MetricsReport};

use crate::{read, to_json, AnalyzeArgs, Globals, Outcome, EXIT_OK, EXIT_REFUTED};

/// Tolerance for counting unit-modulus eigenvalues.
const PERIPHERAL_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct InputDescriptor {
    pub path: String,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<&'static str>,
    pub dim: usize,
}

#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub values: Vec<[f64; 2]>,
    pub gap: f64,
    pub unit_flagged: bool,
    pub unit_multiplicity: usize,
    pub peripheral_count: usize,
    pub gauge_invariant: bool,
}

#[derive(Debug, Serialize)]
pub struct CriterionEntry {
    #[serde(flatten)]
    pub verdict: CriterionVerdict,
    /// False when the verdict used gauge-dependent data (the actual `‖k‖`).
    pub gauge_invariant: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleSummary {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub gauge_invariant: bool,
}

#[derive(Debug, Serialize)]
pub struct TransferSummary {
    pub det_t: Metric,
    pub k_norm_sqr: Metric,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputDescriptor,
    pub spectrum: SpectrumSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit_class: Option<QubitSpectralClass>,
    pub criteria: Vec<CriterionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp_oracle: Option<OracleSummary>,
    /// Some necessary criterion failed: no CP channel has this data.
    pub refuted: bool,
}

fn criteria(sp: &Spectrum, tm: Option<&TransferMatrix>, samples: usize, seed: u64) -> qchan::Result<Vec<CriterionEntry>> {
    let invariant = |verdict| CriterionEntry { verdict, gauge_invariant: true };
    let bound = k_norm_bound(sp)?;
    let k_sqr = tm.map(TransferMatrix::translation_norm_sqr);
    Ok(vec![
        invariant(theorem1(sp)?),
        invariant(det_range_check(sp)?),
        CriterionEntry { verdict: bound.verdict(k_sqr), gauge_invariant: k_sqr.is_none() },
        invariant(z_feasibility(sp, samples.max(1), seed)?.verdict()),
    ])
}

pub fn cmd_analyze(args: &AnalyzeArgs, g: Globals) -> anyhow::Result<Outcome> {
    let input = parse_input(&read(&args.input)?)?;
    let (sp, channel) = match input {
        Input::Spectrum(sp) => (sp, None),
        Input::Channel(ch) => {
            let tm = ch.transfer()?;
            (Spectrum::of(&ch.superoperator())?, Some((ch, tm)))
        }
    };
    let d = sp.dim();
    let tm = channel.as_ref().map(|(_, tm)| tm);

    let (qubit_class, criteria) = if d == 2 {
        (Some(sp.classify_qubit()?), criteria(&sp, tm, args.samples, g.seed)?)
    } else {
        (None, Vec::new())
    };
    let (metrics, metrics_error) = match MetricsReport::from_spectrum(&sp) {
        Ok(m) => (Some(match tm {
            Some(tm) => m.with_transfer(tm),
            None => m,
        }), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let cp_oracle = match &channel {
        Some((ch, _)) => {
            let rep = is_completely_positive(&ch.superoperator(), g.tol.unwrap_or_else(|| default_cp_tolerance(d)))?;
            Some(OracleSummary {
                completely_positive: rep.completely_positive,
                min_eigenvalue: rep.min_eigenvalue,
                tolerance: rep.tolerance,
                gauge_invariant: false,
            })
        }
        None => None,
    };
    let transfer = tm.map(|tm| TransferSummary {
        det_t: Metric { value: tm.det_bloch(), gauge_invariant: true },
        k_norm_sqr: Metric { value: tm.translation_norm_sqr(), gauge_invariant: false },
    });
    let refuted = criteria.iter().any(|c| !c.verdict.satisfied);
    let report = AnalysisReport {
        input: InputDescriptor {
            path: args.input.display().to_string(),
            kind: if channel.is_some() { "channel" } else { "spectrum" },
            format: channel.as_ref().map(|(ch, _): &(Channel, _)| ch.format()),
            dim: d,
        },
        spectrum: SpectrumSummary {
            values: sp.values().iter().map(|z| [z.re, z.im]).collect(),
            gap: sp.gap(),
            unit_flagged: sp.unit_flagged(),
            unit_multiplicity: sp.unit_multiplicity(PERIPHERAL_TOL),
            peripheral_count: sp.peripheral_count(PERIPHERAL_TOL),
            gauge_invariant: true,
        },
        qubit_class,
        criteria,
        metrics,
        metrics_error,
        transfer,
        cp_oracle,
        refuted,
    };
    let message = refuted.then(|| {
        let names: Vec<&str> = report.criteria.iter().filter(|c| !c.verdict.satisfied).map(|c| c.verdict.criterion.as_str()).collect();
        format!("not completely positive: {} violated", names.join(", "))
    });
    Ok(Outcome {
        output: to_json(&report)?,
        message,
        code: if refuted { EXIT_REFUTED } else { EXIT_OK },
    })
}
