//! JSON documents for channels and spectra.
//!
//! Channels: `{"dim": d, "format": "kraus" | "superoperator" | "transfer", "data": …}`
//! with complex numbers as `[re, im]` and matrices as row-major lists of rows.
//! Kraus data is a list of `d x d` matrices, superoperator data one
//! `d² x d²` matrix, transfer data `{"k": [...], "T": [[...]]}` (real).
//! Spectra: `{"spectrum": [[re, im], ...]}` with `d²` entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{KrausSet, Spectrum, Superoperator, TransferMatrix};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, RMatrix};

pub type ComplexPair = [f64; 2];
pub type ComplexRows = Vec<Vec<ComplexPair>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferData {
    pub k: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", content = "data", rename_all = "lowercase")]
pub enum ChannelData {
    Kraus(Vec<ComplexRows>),
    Superoperator(ComplexRows),
    Transfer(TransferData),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub dim: usize,
    #[serde(flatten)]
    pub body: ChannelData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub spectrum: Vec<ComplexPair>,
}

/// A validated channel in the representation it was supplied in.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Kraus(KrausSet),
    Superoperator(Superoperator),
    Transfer(TransferMatrix),
}

impl Channel {
    pub fn dim(&self) -> usize {
        match self {
            Channel::Kraus(k) => k.dim(),
            Channel::Superoperator(s) => s.dim(),
            Channel::Transfer(t) => t.dim(),
        }
    }

    pub fn superoperator(&self) -> Superoperator {
        match self {
            Channel::Kraus(k) => k.to_superoperator(),
            Channel::Superoperator(s) => s.clone(),
            Channel::Transfer(t) => t.to_superoperator(),
        }
    }

    /// Block form; fails for superoperators that are not trace preserving
    /// or not Hermiticity preserving.
    pub fn transfer(&self) -> Result<TransferMatrix> {
        match self {
            Channel::Transfer(t) => Ok(t.clone()),
            other => other.superoperator().to_transfer(),
        }
    }

    pub fn format(&self) -> &'static str {
        match self {
            Channel::Kraus(_) => "kraus",
            Channel::Superoperator(_) => "superoperator",
            Channel::Transfer(_) => "transfer",
        }
    }
}

/// Anything `analyze` accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Channel(Channel),
    Spectrum(Spectrum),
}

fn complex_rows(m: &CMatrix) -> ComplexRows {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn real_rows(m: &RMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn to_cmatrix(rows: &[Vec<ComplexPair>], n: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("{what} must be {n}x{n}")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

fn to_rmatrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<RMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("{what} must be {n}x{n}")));
    }
    Ok(RMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl ChannelDocument {
    pub fn from_kraus(ks: &KrausSet) -> Self {
        Self { dim: ks.dim(), body: ChannelData::Kraus(ks.operators().iter().map(complex_rows).collect()) }
    }

    pub fn from_superoperator(phi: &Superoperator) -> Self {
        Self { dim: phi.dim(), body: ChannelData::Superoperator(complex_rows(phi.matrix())) }
    }

    pub fn from_transfer(tm: &TransferMatrix) -> Self {
        Self {
            dim: tm.dim(),
            body: ChannelData::Transfer(TransferData {
                k: tm.translation().iter().copied().collect(),
                t: real_rows(tm.bloch_map()),
            }),
        }
    }

    pub fn from_channel(ch: &Channel) -> Self {
        match ch {
            Channel::Kraus(k) => Self::from_kraus(k),
            Channel::Superoperator(s) => Self::from_superoperator(s),
            Channel::Transfer(t) => Self::from_transfer(t),
        }
    }

    /// Validates shapes and, for Kraus data, completeness.
    pub fn to_channel(&self) -> Result<Channel> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Dimension("dim must be positive".into()));
        }
        match &self.body {
            ChannelData::Kraus(ops) => {
                let ops = ops.iter().map(|m| to_cmatrix(m, d, "Kraus operator")).collect::<Result<Vec<_>>>()?;
                Ok(Channel::Kraus(KrausSet::new(ops)?))
            }
            ChannelData::Superoperator(rows) => Ok(Channel::Superoperator(Superoperator::new(d, to_cmatrix(rows, d * d, "superoperator")?)?)),
            ChannelData::Transfer(td) => {
                let n = d * d - 1;
                if td.k.len() != n {
                    return Err(Error::Dimension(format!("k must have {n} entries, got {}", td.k.len())));
                }
                let t = to_rmatrix(&td.t, n, "T")?;
                Ok(Channel::Transfer(TransferMatrix::new(d, nalgebra::DVector::from_vec(td.k.clone()), t)?))
            }
        }
    }
}

impl SpectrumDocument {
    pub fn from_spectrum(sp: &Spectrum) -> Self {
        Self { spectrum: sp.values().iter().map(|z| [z.re, z.im]).collect() }
    }

    /// `d` is inferred from the `d²` entries.
    pub fn to_spectrum(&self) -> Result<Spectrum> {
        let n = self.spectrum.len();
        let d = (n as f64).sqrt().round() as usize;
        if d == 0 || d * d != n {
            return Err(Error::MalformedSpectrum(format!("{n} eigenvalues is not a square number")));
        }
        Spectrum::from_values(d, self.spectrum.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    serde_json::from_str::<ChannelDocument>(text).map_err(parse_err)?.to_channel()
}

/// Channel document, or a spectrum document when a `"spectrum"` key is present.
pub fn parse_input(text: &str) -> Result<Input> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    if value.get("spectrum").is_some() {
        let doc: SpectrumDocument = serde_json::from_value(value).map_err(parse_err)?;
        Ok(Input::Spectrum(doc.to_spectrum()?))
    } else {
        let doc: ChannelDocument = serde_json::from_value(value).map_err(parse_err)?;
        Ok(Input::Channel(doc.to_channel()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_layout() {
        let doc = ChannelDocument::from_kraus(&KrausSet::identity(2));
        let v: serde_json::Value = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["format"], "kraus");
        assert_eq!(v["data"][0][0][0], serde_json::json!([1.0, 0.0]));

        let tm = KrausSet::amplitude_damping(0.5).unwrap().to_superoperator().to_transfer().unwrap();
        let v = serde_json::to_value(ChannelDocument::from_transfer(&tm)).unwrap();
        assert_eq!(v["format"], "transfer");
        assert!(v["data"]["T"].is_array() && v["data"]["k"].as_array().unwrap().len() == 3);
    }

    #[test]
    fn round_trips_through_text() {
        let ks = KrausSet::amplitude_damping(0.3).unwrap();
        let phi = ks.to_superoperator();
        let tm = phi.to_transfer().unwrap();
        for ch in [Channel::Kraus(ks), Channel::Superoperator(phi.clone()), Channel::Transfer(tm)] {
            let text = serde_json::to_string(&ChannelDocument::from_channel(&ch)).unwrap();
            let back = parse_channel(&text).unwrap();
            assert_eq!(back.format(), ch.format());
            assert!(back.superoperator().distance(&phi) < 1e-14);
        }
    }

    #[test]
    fn spectrum_input() {
        let text = r#"{"spectrum": [[1, 0], [0.5, 0], [0.5, 0], [0.5, 0]]}"#;
        match parse_input(text).unwrap() {
            Input::Spectrum(sp) => assert_eq!(sp.dim(), 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_input(r#"{"spectrum": [[1, 0], [0.5, 0]]}"#), Err(Error::MalformedSpectrum(_))));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_input("{"), Err(Error::Format(_))));
        assert!(matches!(parse_channel(r#"{"dim": 2, "format": "choi", "data": []}"#), Err(Error::Format(_))));
        let wrong = r#"{"dim": 2, "format": "transfer", "data": {"k": [0, 0], "T": [[1,0,0],[0,1,0],[0,0,1]]}}"#;
        assert!(matches!(parse_channel(wrong), Err(Error::Dimension(_))));
        let non_tp = r#"{"dim": 1, "format": "kraus", "data": [[[[0.5, 0]]]]}"#;
        assert!(matches!(parse_channel(non_tp), Err(Error::KrausNotTracePreserving(_))));
    }
}
