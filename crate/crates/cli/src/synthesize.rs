use num_complex::Complex64;
use serde::Deserialize;

use qchan::io::ChannelDocument;
use qchan::synthesis::{synthesize_from_complex_pair, xi_from_real_spectrum};
use qchan::Error;

use crate::{read, to_json, Outcome, SynthesizeArgs, EXIT_REFUTED};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Request {
    Pair { x: f64, z: [f64; 2] },
    Real { real: [f64; 3] },
}

pub fn cmd_synthesize(args: &SynthesizeArgs) -> anyhow::Result<Outcome> {
    let request: Request = serde_json::from_str(&read(&args.input)?)
        .map_err(|e| anyhow::anyhow!("expected {{\"x\": .., \"z\": [re, im]}} or {{\"real\": [l1, l2, l3]}}: {e}"))?;
    let result = match request {
        // A real z belongs to the all-real case.
        Request::Pair { x, z: [re, 0.0] } => xi_from_real_spectrum(x, re, re),
        Request::Pair { x, z: [re, im] } => synthesize_from_complex_pair(x, Complex64::new(re, im)),
        Request::Real { real: [l1, l2, l3] } => xi_from_real_spectrum(l1, l2, l3),
    };
    match result {
        Ok(phi) => Ok(Outcome::ok(to_json(&ChannelDocument::from_superoperator(&phi))?)),
        Err(Error::NotRealizable(why)) => Ok(Outcome {
            output: String::new(),
            message: Some(format!("not realizable: {why}")),
            code: EXIT_REFUTED,
        }),
        Err(e) => Err(e.into()),
    }
}
