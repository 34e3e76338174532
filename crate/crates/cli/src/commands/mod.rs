//! One module per subcommand. Each turns parsed flags into a self-contained
//! job (inputs read, overrides applied, everything validated) and runs it.

use std::path::Path;

use rydpol_core::TransitionClass;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::Outputs;

pub mod eit;
pub mod invert;
pub mod roundtrip;
pub mod spectrogram;
pub mod wigner;

/// Angle conventions of a run.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub degrees: bool,
}

impl Ctx {
    pub fn angle_out(&self, rad: f64) -> f64 {
        if self.degrees {
            rad.to_degrees()
        } else {
            rad
        }
    }

    pub fn angle_in(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    pub fn unit(&self) -> &'static str {
        if self.degrees {
            "deg"
        } else {
            "rad"
        }
    }
}

pub fn class_from_flags(j2: i32, p: i32) -> Result<TransitionClass> {
    TransitionClass::from_twice(j2, p).map_err(|e| CliError::Usage(format!("--J2 {j2} --p {p}: {e}")))
}

/// Unreadable files are usage errors; malformed contents are validation errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "snake_case")]
pub enum Job {
    Spectrogram(spectrogram::SpectrogramJob),
    Envelopes(spectrogram::EnvelopesJob),
    Eit(eit::EitJob),
    Invert(invert::InvertJob),
    Roundtrip(roundtrip::RoundtripJob),
    Wigner(wigner::WignerJob),
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Spectrogram(_) => "spectrogram",
            Job::Envelopes(_) => "envelopes",
            Job::Eit(_) => "eit",
            Job::Invert(_) => "invert",
            Job::Roundtrip(_) => "roundtrip",
            Job::Wigner(_) => "wigner",
        }
    }

    pub fn run(&self, ctx: &Ctx) -> Result<Outputs> {
        match self {
            Job::Spectrogram(j) => spectrogram::run(j, ctx),
            Job::Envelopes(j) => spectrogram::run_envelopes(j, ctx),
            Job::Eit(j) => eit::run(j, ctx),
            Job::Invert(j) => invert::run(j, ctx),
            Job::Roundtrip(j) => roundtrip::run(j, ctx),
            Job::Wigner(j) => wigner::run(j, ctx),
        }
    }
}
