use rydpol_core::dressing::TransitionClass;
use rydpol_core::inversion::{
    invert_spectra, Calibration, FiveHalfKernel, Measured, PeakLayout, PeakOptions, RoundTripOptions, SpectraInversion,
};
use rydpol_core::io::{
    InversionReport, ParamsSpec, RatioConvention, RatioReport, ScenarioFile, SpectrumDiagnostics, SpectrumFile,
};
use rydpol_core::sop::OpticalConfig;
use serde::{Deserialize, Serialize};

use super::{read_json, Ctx};
use crate::args::{InvertArgs, KernelArg};
use crate::error::{CliError, Result};
use crate::output::Outputs;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedThreshold {
    pub threshold: f64,
    pub dead_band: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvertJob {
    /// Paths as given; the contents are embedded below.
    pub inputs: Vec<String>,
    pub spectra: Vec<SpectrumFile>,
    pub params: ParamsSpec,
    pub kernel: KernelArg,
    pub range_tol: f64,
    pub dead_band_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central_threshold: Option<FixedThreshold>,
    /// Prominence floor as a fraction of the first spectrum's maximum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_prominence: Option<f64>,
}

impl InvertJob {
    pub fn class(&self) -> Option<TransitionClass> {
        self.spectra.first().map(|s| s.class)
    }
}

pub fn kernel(k: KernelArg) -> FiveHalfKernel {
    match k {
        KernelArg::ClosedForm => FiveHalfKernel::ClosedForm,
        KernelArg::Exact => FiveHalfKernel::ExactEnvelopes,
    }
}

pub fn resolve(a: &InvertArgs) -> Result<InvertJob> {
    if !(a.range_tol >= 0.0 && a.range_tol.is_finite()) {
        return Err(CliError::Usage(format!("--range-tol must be non-negative, got {}", a.range_tol)));
    }
    if !(a.dead_band_fraction >= 0.0 && a.dead_band_fraction.is_finite()) {
        return Err(CliError::Usage(format!(
            "--dead-band-fraction must be non-negative, got {}",
            a.dead_band_fraction
        )));
    }
    let central_threshold = match (a.central_threshold, a.dead_band) {
        (Some(threshold), Some(dead_band)) => {
            if !threshold.is_finite() || !(dead_band >= 0.0 && dead_band.is_finite()) {
                return Err(CliError::Usage("--central-threshold must be finite and --dead-band non-negative".into()));
            }
            Some(FixedThreshold { threshold, dead_band })
        }
        _ => None,
    };
    if let Some(f) = a.min_prominence.filter(|f| !(*f >= 0.0 && *f < 1.0)) {
        return Err(CliError::Usage(format!("--min-prominence must lie in [0, 1), got {f}")));
    }
    let base = match &a.scenario {
        Some(path) => read_json::<ScenarioFile>(path)?.params,
        None => ParamsSpec::default(),
    };
    let params = base.overridden_by(&a.physics.spec());

    let spectra: Vec<SpectrumFile> = a.spectra.iter().map(|p| read_json(p)).collect::<Result<_>>()?;
    let mut problems = Vec::new();
    let class = spectra[0].class;
    if let Err(e) = PeakLayout::for_class(class) {
        problems.push(e.to_string());
    }
    for (path, s) in a.spectra.iter().zip(&spectra) {
        if s.class != class {
            problems.push(format!(
                "{}: class {} differs from {} in the first spectrum",
                path.display(),
                s.class,
                class
            ));
        }
        if let Err(e) = s.sampled() {
            problems.push(format!("{}: {e}", path.display()));
        }
    }
    let sim = params.to_params(vec![0.0], OpticalConfig::standard());
    problems.extend(sim.problems().into_iter().map(|m| format!("params: {m}")));
    if !problems.is_empty() {
        return Err(CliError::Validation(problems));
    }
    Ok(InvertJob {
        inputs: a.spectra.iter().map(|p| p.display().to_string()).collect(),
        spectra,
        params,
        kernel: a.kernel,
        range_tol: a.range_tol,
        dead_band_fraction: a.dead_band_fraction,
        central_threshold,
        min_prominence: a.min_prominence,
    })
}

pub fn report(class: TransitionClass, inv: &SpectraInversion<f64>, ctx: &Ctx) -> Result<InversionReport> {
    let layout = PeakLayout::for_class(class)?;
    let convention = match layout {
        PeakLayout::HalfZero => RatioConvention::InnerOverOuter,
        PeakLayout::FiveHalf => RatioConvention::OuterOverInner,
    };
    let value = inv.outcomes[0].ratio.ok_or_else(|| CliError::Numerical("first spectrum yielded no ratio".into()))?;
    let diagnostics = inv
        .outcomes
        .iter()
        .map(|o| SpectrumDiagnostics {
            optics: o.preset,
            peaks: o.peaks.clone(),
            ratio: o.ratio,
            central_share: o.central_share,
            calibration: o.calibration,
        })
        .collect();
    let mut r = InversionReport::new(class, RatioReport { convention, value }, &inv.combined, diagnostics, ctx.degrees);
    if inv.combined.ambiguous_prominence {
        r.warnings.push("central-peak share fell inside the dead band; the unpruned set is reported".into());
    }
    for (k, o) in inv.outcomes.iter().enumerate().skip(1) {
        if o.ratio.is_none() {
            r.warnings.push(format!("spectrum {k}: no ratio could be read; used for pruning only"));
        }
    }
    Ok(r)
}

pub fn run(job: &InvertJob, ctx: &Ctx) -> Result<Outputs> {
    let class = job.class().ok_or_else(|| CliError::Usage("no spectra given".into()))?;
    let mut opts = RoundTripOptions::eit(job.params.to_params(vec![0.0], OpticalConfig::standard()));
    opts.range_tol = job.range_tol;
    opts.dead_band_fraction = job.dead_band_fraction;
    opts.kernel = kernel(job.kernel);
    let measured = job
        .spectra
        .iter()
        .map(|s| Ok(Measured { preset: s.preset(), spectrum: s.sampled()? }))
        .collect::<Result<Vec<_>>>()?;
    if let Some(f) = job.min_prominence {
        let first = &measured[0].spectrum;
        let mut p = PeakOptions::for_spectrum(first);
        p.min_prominence = f * first.max_amplitude();
        opts.peaks = Some(p);
    }
    let fixed = job.central_threshold.map(|f| Calibration::fixed(f.threshold, f.dead_band));
    let inv = invert_spectra(class, &measured, &opts, fixed)?;
    let rep = report(class, &inv, ctx)?;

    let mut out = Outputs::default();
    out.json("report.json", &rep)?;
    out.warnings.extend(rep.warnings.iter().cloned());
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ");
    out.summary.push(format!("{class}: R = {:.9} ({:?})", rep.ratio.value, rep.ambiguity_class));
    out.summary.push(format!("candidates [{}] {}", list(&rep.candidates), ctx.unit()));
    out.summary.push(format!("pruned     [{}] {}", list(&rep.pruned), ctx.unit()));
    Ok(out)
}
