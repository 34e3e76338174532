//! Error types, one enum per module plus a crate-level umbrella.

use thiserror::Error;

use crate::angular::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngularError {
    #[error("angular momentum magnitude must be non-negative, got {0}")]
    NegativeMagnitude(HalfInt),
    #[error("projection {m} is not half-integer consistent with j = {j}")]
    ParityMismatch { j: HalfInt, m: HalfInt },
    #[error("projection {m} exceeds magnitude {j}")]
    ProjectionOutOfRange { j: HalfInt, m: HalfInt },
    #[error("spherical index q = {0} is not in {{-1, 0, 1}}")]
    InvalidSphericalIndex(i32),
    #[error("transition branch p = {0} is not in {{-1, 0, 1}}")]
    InvalidBranch(i32),
    #[error("J = {0} is not reachable with S = 1/2 (must be a half-odd integer >= 1/2)")]
    InvalidFineStructureJ(HalfInt),
    #[error("levels (L={l}, J={j}) and (L={l2}, J={j2}) are not a dipole-allowed L -> L+1 pair")]
    NotDipolePair { l: u32, j: HalfInt, l2: u32, j2: HalfInt },
    #[error("cannot parse half-integer from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SopError {
    #[error("{0} has zero norm")]
    ZeroNorm(&'static str),
    #[error("{what} is not normalized (norm = {norm})")]
    NotNormalized { what: &'static str, norm: f64 },
    #[error("{0} polarization is not transverse to its propagation direction")]
    NotTransverse(&'static str),
    #[error("probe and coupling beams do not counter-propagate")]
    NotCounterPropagating,
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DressingError {
    #[error(transparent)]
    Angular(#[from] AngularError),
    #[error("symmetric eigensolver did not converge for a {dim}x{dim} matrix")]
    EigenFailure { dim: usize },
    #[error("degeneracy tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("phase-angle grid is empty")]
    EmptyGrid,
    #[error("phase angle {0} is outside [0, 2pi] or not finite")]
    PhiOutOfRange(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    #[error("spectrum needs at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("detuning grid must be strictly increasing")]
    NonMonotonicGrid,
    #[error("detuning and amplitude lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("spectrum contains non-finite values")]
    NonFinite,
    #[error("found {found} usable peaks, need at least {need}")]
    FewerThanFourPeaks { found: usize, need: usize },
    #[error("inner peak pair does not straddle zero detuning")]
    NonStraddling,
    #[error("outer peak span below tolerance")]
    DegenerateOuter,
    #[error("inner peak span below tolerance")]
    DegenerateInner,
    #[error("ratio {value} outside [{lo}, {hi}] beyond tolerance")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("class J={j}, p={p} is not invertible; supported classes are (J=1/2, p=0) and (J=3/2, p=+-1)")]
    NotInvertible { j: HalfInt, p: i32 },
    #[error("candidate sets from the supplied configurations have no common phase angle")]
    Inconsistent,
    #[error(transparent)]
    Dressing(#[from] DressingError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Angular(#[from] AngularError),
    #[error(transparent)]
    Sop(#[from] SopError),
    #[error(transparent)]
    Dressing(#[from] DressingError),
    #[error("invalid simulation parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Lindblad generator has a degenerate stationary subspace (pivot ratio {pivot_ratio:e})")]
    NonUniqueSteadyState { pivot_ratio: f64 },
    #[error("steady-state residual {0:e} exceeds tolerance")]
    Residual(f64),
}

/// Umbrella error for callers that mix modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Angular(#[from] AngularError),
    #[error(transparent)]
    Sop(#[from] SopError),
    #[error(transparent)]
    Dressing(#[from] DressingError),
    #[error(transparent)]
    Inversion(#[from] InversionError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("format error: {0}")]
    Format(String),
}
