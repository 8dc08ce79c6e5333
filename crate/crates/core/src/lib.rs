//! Gauge-invariant analysis of quantum channels.
//!
//! A channel reconstructed by gate set tomography is only known up to a
//! similarity transform `M = X⁻¹ΦX`, so the only trustworthy information is
//! the spectrum of its superoperator. This crate builds superoperators from
//! Kraus operators, extracts spectra, tests necessary complete-positivity
//! criteria on qubit spectra, evaluates QCVV metrics and their
//! gauge-invariant bounds, synthesizes canonical channels realizing a given
//! spectrum and checks gauge-orbit invariants of simulated gate sets.
//!
//! ```
//! use qchan::channel::{KrausSet, Spectrum};
//! use qchan::criteria::theorem1;
//! use qchan::linalg::{c, CMatrix};
//!
//! // Bit flip with probability 1/4.
//! let k0 = CMatrix::identity(2, 2) * c(0.75f64.sqrt(), 0.0);
//! let k1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
//! let phi = KrausSet::new(vec![k0, k1]).unwrap().to_superoperator();
//! let sp = Spectrum::of(&phi).unwrap();
//! assert!(theorem1(&sp).unwrap().satisfied);
//! ```

pub mod channel;
pub mod criteria;
pub mod error;
pub mod gauge;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod synthesis;

pub use error::{Error, Result};
