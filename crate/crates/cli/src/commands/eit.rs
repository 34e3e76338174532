use rydpol_core::dressing::TransitionClass;
use rydpol_core::eitsim::{mirror_asymmetry, EitSimulator};
use rydpol_core::io::{
    GridSpec, OpticsSpec, ScenarioFile, SchemeSpec, SpectrumFile, ThirdLevelSpec, DEFAULT_PHI_STEPS,
};
use serde::{Deserialize, Serialize};

use super::{class_from_flags, read_json, Ctx};
use crate::args::{DetuningArgs, EitArgs};
use crate::error::{CliError, Result};
use crate::output::{Cell, Outputs, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EitJob {
    pub scenario: ScenarioFile,
    /// Angles (radians) at which single spectra are also written.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectra_at: Vec<f64>,
}

pub fn apply_detuning(grid: &mut GridSpec, d: &DetuningArgs) {
    if let Some(v) = d.detuning_min {
        grid.min_mhz = v;
    }
    if let Some(v) = d.detuning_max {
        grid.max_mhz = v;
    }
    if let Some(v) = d.detuning_points {
        grid.points = v;
    }
}

pub fn resolve(a: &EitArgs, ctx: &Ctx) -> Result<(EitJob, Vec<String>)> {
    let mut inputs = Vec::new();
    let mut scenario = match (&a.scenario, a.j2, a.p) {
        (Some(path), _, _) => {
            inputs.push(path.display().to_string());
            read_json::<ScenarioFile>(path)?
        }
        (None, Some(j2), Some(p)) => {
            class_from_flags(j2, p)?;
            ScenarioFile {
                scheme: SchemeSpec { j2, p, intermediate_j2: 3, third_level: None },
                params: Default::default(),
                optics: OpticsSpec::default(),
                phi_steps: DEFAULT_PHI_STEPS,
                detuning: GridSpec::default(),
            }
        }
        _ => return Err(CliError::Usage("eit needs either --scenario or both --J2 and --p".into())),
    };
    if let Some(o) = a.optics {
        scenario.optics = OpticsSpec::Preset(o.into());
    }
    if let Some(delta_mhz) = a.third_level {
        scenario.scheme.third_level = Some(ThirdLevelSpec { delta_mhz });
    }
    if let Some(n) = a.phi_steps {
        scenario.phi_steps = n;
    }
    scenario.params = scenario.params.overridden_by(&a.physics.spec());
    apply_detuning(&mut scenario.detuning, &a.detuning);
    scenario.validate().map_err(CliError::Validation)?;

    let spectra_at: Vec<f64> = a.spectrum_at.iter().map(|&x| ctx.angle_in(x)).collect();
    if let Some(bad) = a.spectrum_at.iter().find(|x| !x.is_finite()) {
        return Err(CliError::Usage(format!("--spectrum-at value {bad} is not finite")));
    }
    Ok((EitJob { scenario, spectra_at }, inputs))
}

#[derive(Serialize)]
struct EitFile<'a> {
    class: TransitionClass,
    angle_unit: &'static str,
    optics: &'a OpticsSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    third_level_mhz: Option<f64>,
    phi: Vec<f64>,
    delta_c_mhz: &'a [f64],
    /// `response[k][n]` at `phi[k]`, `delta_c_mhz[n]`.
    response: &'a [Vec<f64>],
}

pub fn run(job: &EitJob, ctx: &Ctx) -> Result<Outputs> {
    let sc = job.scenario.validate().map_err(CliError::Validation)?;
    let sim = EitSimulator::new(&sc.scheme, &sc.params)?;
    let sg = sim.spectrogram(&sc.phi_grid)?;
    let cls = sc.scheme.cls;

    let mut out = Outputs::default();
    out.warnings.extend(sc.params.warnings());
    let mut t = Table::new(&["phi", "delta_c_mhz", "response"])?;
    for (k, row) in sg.response.iter().enumerate() {
        for (d, r) in sg.detuning_grid.iter().zip(row) {
            t.row(&[Cell::Num(ctx.angle_out(sg.phi_grid[k])), Cell::Num(*d), Cell::Num(*r)])?;
        }
    }
    out.csv("eit.csv", t)?;
    out.json(
        "eit.json",
        &EitFile {
            class: cls,
            angle_unit: ctx.unit(),
            optics: &job.scenario.optics,
            third_level_mhz: job.scenario.scheme.third_level.map(|t| t.delta_mhz),
            phi: sg.phi_grid.iter().map(|&p| ctx.angle_out(p)).collect(),
            delta_c_mhz: &sg.detuning_grid,
            response: &sg.response,
        },
    )?;

    let preset = job.scenario.optics.preset();
    if preset.is_none() && !job.spectra_at.is_empty() {
        out.warnings.push(
            "explicit optics have no preset name; spectrum files omit \"optics\" and invert will assume standard"
                .into(),
        );
    }
    for (k, &phi) in job.spectra_at.iter().enumerate() {
        let s = sim.spectrum(phi)?;
        let file = SpectrumFile { detuning_mhz: s.detuning, amplitude: s.response, class: cls, optics: preset };
        out.json(&format!("spectrum_{k}.json"), &file)?;
    }

    let mut line = format!(
        "{cls}: {} phase angles x {} detunings, peak response {:.4e}",
        sg.phi_grid.len(),
        sg.detuning_grid.len(),
        sg.peak_response()
    );
    if let Ok(a) = mirror_asymmetry(&sg) {
        line.push_str(&format!(", mirror asymmetry {a:.3e}"));
    }
    out.summary.push(line);
    Ok(out)
}
