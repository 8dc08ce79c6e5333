//! Channel representations and the spectral data extracted from them.

mod basis;
mod choi;
mod kraus;
mod majorization;
mod sampling;
mod spectrum;
mod superop;
mod transfer;

pub use basis::{basis_change, hermitian_basis, BasisId};
pub use choi::{choi_matrix, default_cp_tolerance, is_completely_positive, ChoiMatrix, CpReport};
pub use kraus::KrausSet;
pub use majorization::{check_majorization, MajorizationReport};
pub use sampling::{haar_pure_state, haar_rotation, sample_cptp, sample_unital_qubit, sample_fa_eta, unital_qubit_from_parts};
pub use spectrum::{QubitSpectralClass, Spectrum, CONJUGATE_PAIR_TOL, REAL_CLASS_TOL, UNIT_FLAG_DISTANCE};
pub use superop::Superoperator;
pub use transfer::TransferMatrix;

/// Deviation above which a transfer-matrix first row is rejected.
pub const TP_TOL: f64 = 1e-8;
