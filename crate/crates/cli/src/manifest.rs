//! Run manifests: the resolved job plus a description of its grids and files.

use std::f64::consts::TAU;
use std::path::Path;

use rydpol_core::io::{GridSpec, ParamsSpec};
use rydpol_core::TransitionClass;
use serde::{Deserialize, Serialize};

use crate::commands::{read_json, Ctx, Job};
use crate::error::{CliError, Result};
use crate::output::Outputs;

pub const TOOL: &str = "rydpol";

/// Phase angles of a run, in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiGrid {
    Uniform { min: f64, max: f64, points: usize },
    Values(Vec<f64>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Grids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning_mhz: Option<GridSpec>,
}

/// Everything needed to re-run a command. Replays use only `degrees` and
/// `job`; the other fields describe the run for readers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub degrees: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<TransitionClass>,
    pub grids: Grids,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSpec>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub job: Job,
}

impl Manifest {
    pub fn new(job: Job, ctx: &Ctx, inputs: Vec<String>, outputs: &Outputs) -> Self {
        let uniform = |points| Some(PhiGrid::Uniform { min: 0.0, max: TAU, points });
        let (class, grids, params, seed) = match &job {
            Job::Spectrogram(j) => (Some(j.class), Grids { phi: uniform(j.phi_steps), detuning_mhz: None }, None, None),
            Job::Envelopes(j) => (Some(j.class), Grids { phi: uniform(j.phi_steps), detuning_mhz: None }, None, None),
            Job::Eit(j) => {
                let s = &j.scenario;
                let cls = TransitionClass::from_twice(s.scheme.j2, s.scheme.p).ok();
                (
                    cls,
                    Grids { phi: uniform(s.phi_steps), detuning_mhz: Some(s.detuning) },
                    Some(s.params.filled()),
                    None,
                )
            }
            Job::Invert(j) => (j.class(), Grids::default(), Some(j.params.filled()), None),
            Job::Roundtrip(j) => (
                Some(j.class),
                Grids { phi: Some(PhiGrid::Values(j.phi.clone())), detuning_mhz: Some(j.detuning) },
                Some(j.params.filled()),
                j.noise.map(|n| n.seed),
            ),
            Job::Wigner(_) => (None, Grids::default(), None, None),
        };
        Manifest {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            degrees: ctx.degrees,
            class,
            grids,
            params,
            inputs,
            outputs: outputs.names(),
            seed,
            job,
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.manifest.json", self.job.name())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let m: Manifest = read_json(path)?;
        if m.tool != TOOL {
            return Err(CliError::validation(format!("{}: not a {TOOL} manifest", path.display())));
        }
        Ok(m)
    }
}
