use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("Kraus operators are not trace preserving (max |Σ K†K - I| = {0:e})")]
    KrausNotTracePreserving(f64),

    #[error("superoperator is not trace preserving (first-row deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("image of a Hermitian basis element is not Hermitian (imaginary residue {0:e})")]
    NonHermitianImage(f64),

    #[error("Choi matrix is not Hermitian (deviation {0:e})")]
    NonHermitianChoi(f64),

    #[error("imaginary residue {0:e} exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("eigensolver did not converge after {iterations} iterations ({unresolved} eigenvalues unresolved)")]
    NoConvergence { iterations: usize, unresolved: usize },

    #[error("malformed spectrum: {0}")]
    MalformedSpectrum(String),

    #[error("unsupported dimension {0}: only qubit (d = 2) data is handled here")]
    UnsupportedDimension(usize),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("not realizable: {0}")]
    NotRealizable(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
