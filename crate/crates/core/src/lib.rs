//! Angular-momentum model of RF polarimetry with dressed Rydberg atoms.
//!
//! - [`angular`]: exact Wigner 3j/6j symbols and dipole matrix elements.
//! - [`sop`]: RF states of polarization, Stokes vectors, beam geometry.
//! - [`dressing`]: coupling matrices, eigenvalue spectra, envelopes.
//! - [`eitsim`]: Lindblad steady-state EIT spectra.
//! - [`inversion`]: peak extraction, envelope ratios, phase-angle inversion.
//! - [`io`]: file formats.
//!
//! Numerical code is generic over [`scalar::Real`]; the aliases below fix it to `f64`.
//!
//! ```
//! use rydpol_core::{eigen_spectrum, TransitionClass};
//!
//! let s = eigen_spectrum(TransitionClass::HALF_ZERO, 0.0, 1e-9).unwrap();
//! assert_eq!(s.distinct_count(), 2);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN.

pub mod angular;
pub mod dressing;
pub mod eitsim;
pub mod error;
pub mod inversion;
pub mod io;
pub mod scalar;
pub mod sop;

pub use angular::{FineLevel, HalfInt, SixJ, ThreeJ};
pub use dressing::{
    coupling_matrix, eigen_spectrum, envelopes_approx, envelopes_exact, spectrogram, EnvelopeKind, Manifold,
    TransitionClass,
};
pub use eitsim::{eit_spectrogram, eit_spectrum};
pub use error::{AngularError, DressingError, Error, InversionError, SimError, SopError};
pub use inversion::{
    extract_peaks, invert_five_half, invert_half, ratio_five_half, ratio_half, round_trip, AmbiguityClass,
    FiveHalfRatio, HalfZeroRatio,
};
pub use scalar::Real;
pub use sop::OpticsPreset;

pub type RfSop = sop::RfSop<f64>;
pub type StokesVector = sop::StokesVector<f64>;
pub type OpticalConfig = sop::OpticalConfig<f64>;
pub type CouplingMatrix = dressing::CouplingMatrix<f64>;
pub type EigenSpectrum = dressing::EigenSpectrum<f64>;
pub type EnvelopePair = dressing::EnvelopePair<f64>;
pub type LevelScheme = eitsim::LevelScheme<f64>;
pub type SimParams = eitsim::SimParams<f64>;
pub type EitSimulator = eitsim::EitSimulator<f64>;
pub type EitSpectrum = eitsim::EitSpectrum<f64>;
pub type EitSpectrogram = eitsim::EitSpectrogram<f64>;
pub type PeakSet = inversion::PeakSet<f64>;
pub type PhaseCandidates = inversion::PhaseCandidates<f64>;
pub type SampledSpectrum = inversion::SampledSpectrum<f64>;
pub type RoundTripReport = inversion::RoundTripReport<f64>;
