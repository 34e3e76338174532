use std::fmt;

use rydpol_core::error::{DressingError, InversionError, SimError};
use rydpol_core::Error as CoreError;

/// Failure of a run, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unreadable inputs (exit 2).
    Usage(String),
    /// Input files or parameters that fail validation; every problem is listed (exit 3).
    Validation(Vec<String>),
    /// The computation itself failed (exit 4).
    Numerical(String),
    /// Outputs could not be written (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(vec![msg.into()])
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::Validation(list) if list.len() == 1 => write!(f, "invalid input: {}", list[0]),
            CliError::Validation(list) => {
                write!(f, "{} problems with the input:", list.len())?;
                for m in list {
                    write!(f, "\n  - {m}")?;
                }
                Ok(())
            }
        }
    }
}

impl From<DressingError> for CliError {
    fn from(e: DressingError) -> Self {
        match e {
            DressingError::EigenFailure { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::NonUniqueSteadyState { .. } | SimError::Residual(_) => CliError::Numerical(e.to_string()),
            SimError::Dressing(d) => d.into(),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<InversionError> for CliError {
    fn from(e: InversionError) -> Self {
        use InversionError::*;
        match e {
            TooFewSamples { .. } | NonMonotonicGrid | LengthMismatch(..) | NonFinite | NotInvertible { .. } => {
                CliError::validation(e.to_string())
            }
            FewerThanFourPeaks { .. }
            | NonStraddling
            | DegenerateOuter
            | DegenerateInner
            | OutOfRange { .. }
            | Inconsistent => CliError::Numerical(e.to_string()),
            Dressing(d) => d.into(),
            Sim(s) => s.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Dressing(d) => d.into(),
            CoreError::Inversion(i) => i.into(),
            CoreError::Sim(s) => s.into(),
            other => CliError::validation(other.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
