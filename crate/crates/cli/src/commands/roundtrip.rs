use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rydpol_core::dressing::TransitionClass;
use rydpol_core::eitsim::{uniform_grid, EitSimulator, LevelScheme};
use rydpol_core::inversion::{
    invert_spectra, round_trip, AmbiguityClass, ConfigOutcome, Measured, PeakLayout, PeakOptions, PhaseCandidates,
    RoundTripOptions, SampledSpectrum,
};
use rydpol_core::io::{fmt_sig, GridSpec, ParamsSpec};
use rydpol_core::sop::{OpticalConfig, OpticsPreset};
use rydpol_core::InversionError;
use serde::{Deserialize, Serialize};

use super::eit::apply_detuning;
use super::invert::kernel;
use super::{class_from_flags, Ctx};
use crate::args::{ForwardArg, KernelArg, RoundtripArgs};
use crate::error::{CliError, Result};
use crate::output::{Cell, Outputs, Table};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    /// Standard deviation as a fraction of each spectrum's maximum.
    pub sigma: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundtripJob {
    pub class: TransitionClass,
    /// True phase angles, radians.
    pub phi: Vec<f64>,
    pub forward: ForwardArg,
    pub optics: Vec<OpticsPreset>,
    pub kernel: KernelArg,
    pub params: ParamsSpec,
    pub detuning: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<Noise>,
}

pub fn resolve(a: &RoundtripArgs, ctx: &Ctx) -> Result<RoundtripJob> {
    let class = class_from_flags(a.class.j2, a.class.p)?;
    let phi: Vec<f64> = if a.phi.is_empty() {
        if a.phi_steps == 0 {
            return Err(CliError::Usage("--phi-steps must be at least 1".into()));
        }
        (0..a.phi_steps).map(|k| TAU * k as f64 / a.phi_steps as f64).collect()
    } else {
        a.phi.iter().map(|&x| ctx.angle_in(x)).collect()
    };
    if let Some(bad) = phi.iter().find(|p| !(p.is_finite() && (0.0..=TAU + 1e-12).contains(*p))) {
        return Err(CliError::Usage(format!("phase angle {} is outside [0, 2pi]", ctx.angle_out(*bad))));
    }
    let noise = match (a.noise, a.seed) {
        (Some(sigma), Some(seed)) => {
            if a.forward == ForwardArg::Eigen {
                return Err(CliError::Usage("--noise applies to --forward eit only".into()));
            }
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(CliError::Usage(format!("--noise must be non-negative, got {sigma}")));
            }
            Some(Noise { sigma, seed })
        }
        _ => None,
    };
    let mut detuning = GridSpec::default();
    apply_detuning(&mut detuning, &a.detuning);

    let mut problems = Vec::new();
    if let Err(e) = PeakLayout::for_class(class) {
        problems.push(e.to_string());
    }
    if detuning.points < 8 || !(detuning.min_mhz < detuning.max_mhz) {
        problems.push(format!(
            "detuning grid [{}, {}] with {} points is not a usable grid",
            detuning.min_mhz, detuning.max_mhz, detuning.points
        ));
    }
    let params = a.physics.spec();
    let sim = params.to_params(vec![0.0], OpticalConfig::standard());
    problems.extend(sim.problems().into_iter().map(|m| format!("params: {m}")));
    if !problems.is_empty() {
        return Err(CliError::Validation(problems));
    }
    Ok(RoundtripJob {
        class,
        phi,
        forward: a.forward,
        optics: a.optics.iter().map(|&o| o.into()).collect(),
        kernel: a.kernel,
        params,
        detuning,
        noise,
    })
}

#[derive(Serialize)]
struct ConfigRow {
    optics: OpticsPreset,
    ratio: Option<f64>,
    central_share: f64,
    threshold: Option<f64>,
    pruned: Vec<f64>,
}

#[derive(Serialize)]
struct Row {
    phi_true: f64,
    ratio: Option<f64>,
    principal: Option<f64>,
    candidates: Vec<f64>,
    pruned: Vec<f64>,
    ambiguity_class: Option<AmbiguityClass>,
    error: Option<f64>,
    contains_truth: bool,
    failure: Option<String>,
    configs: Vec<ConfigRow>,
}

#[derive(Serialize)]
struct RoundtripFile<'a> {
    class: TransitionClass,
    forward: ForwardArg,
    optics: &'a [OpticsPreset],
    angle_unit: &'static str,
    angle_tol: f64,
    rows: Vec<Row>,
}

fn row(
    ctx: &Ctx,
    phi: f64,
    tol: f64,
    result: std::result::Result<(Vec<ConfigOutcome<f64>>, PhaseCandidates<f64>), InversionError>,
) -> Row {
    let conv = |v: &[f64]| v.iter().map(|&x| ctx.angle_out(x)).collect::<Vec<_>>();
    match result {
        Ok((outcomes, combined)) => {
            let error = combined.distance_to(phi);
            Row {
                phi_true: ctx.angle_out(phi),
                ratio: outcomes.first().and_then(|o| o.ratio),
                principal: Some(ctx.angle_out(combined.principal)),
                candidates: conv(&combined.candidates),
                pruned: conv(&combined.pruned),
                ambiguity_class: Some(combined.ambiguity_class),
                error: Some(ctx.angle_out(error)),
                contains_truth: error <= tol,
                failure: None,
                configs: outcomes
                    .iter()
                    .map(|o| ConfigRow {
                        optics: o.preset,
                        ratio: o.ratio,
                        central_share: o.central_share,
                        threshold: o.calibration.map(|c| c.threshold),
                        pruned: conv(&o.candidates.pruned),
                    })
                    .collect(),
            }
        }
        Err(e) => Row {
            phi_true: ctx.angle_out(phi),
            ratio: None,
            principal: None,
            candidates: Vec::new(),
            pruned: Vec::new(),
            ambiguity_class: None,
            error: None,
            contains_truth: false,
            failure: Some(e.to_string()),
            configs: Vec::new(),
        },
    }
}

/// Prominence floor for noisy spectra, in noise standard deviations.
const NOISE_FLOOR: f64 = 8.0;

fn with_noise(spec: SampledSpectrum<f64>, noise: Option<Noise>, rng: &mut ChaCha8Rng) -> Result<SampledSpectrum<f64>> {
    let Some(n) = noise.filter(|n| n.sigma > 0.0) else {
        return Ok(spec);
    };
    let dist = Normal::new(0.0, n.sigma * spec.max_amplitude())
        .map_err(|e| CliError::Numerical(format!("noise distribution: {e}")))?;
    let amp = spec.amplitude().iter().map(|&a| a + dist.sample(rng)).collect();
    Ok(SampledSpectrum::new(spec.detuning().to_vec(), amp)?)
}

pub fn run(job: &RoundtripJob, ctx: &Ctx) -> Result<Outputs> {
    let grid = uniform_grid(job.detuning.min_mhz, job.detuning.max_mhz, job.detuning.points);
    let params = job.params.to_params(grid, OpticalConfig::standard());
    let mut opts = match job.forward {
        ForwardArg::Eigen => RoundTripOptions { params: params.clone(), ..RoundTripOptions::eigen() },
        ForwardArg::Eit => RoundTripOptions::eit(params.clone()),
    };
    opts.kernel = kernel(job.kernel);

    let mut rows = Vec::with_capacity(job.phi.len());
    match job.forward {
        ForwardArg::Eigen => {
            for &phi in &job.phi {
                let r = round_trip(job.class, phi, &job.optics, &opts).map(|r| (r.outcomes, r.combined));
                rows.push(row(ctx, phi, opts.angle_tol, r));
            }
        }
        ForwardArg::Eit => {
            let scheme = LevelScheme::new(job.class);
            let sims = job
                .optics
                .iter()
                .map(|&p| {
                    EitSimulator::new(
                        &scheme,
                        &rydpol_core::eitsim::SimParams { optics: OpticalConfig::preset(p), ..params.clone() },
                    )
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(job.noise.map_or(0, |n| n.seed));
            for &phi in &job.phi {
                let mut measured = Vec::with_capacity(sims.len());
                let mut floor = 0.0f64;
                for (sim, &preset) in sims.iter().zip(&job.optics) {
                    let s = sim.spectrum(phi)?;
                    let clean = SampledSpectrum::new(s.detuning, s.response)?;
                    floor = floor.max(NOISE_FLOOR * job.noise.map_or(0.0, |n| n.sigma) * clean.max_amplitude());
                    let spectrum = with_noise(clean, job.noise, &mut rng)?;
                    measured.push(Measured { preset, spectrum });
                }
                let mut opts = opts.clone();
                if floor > 0.0 {
                    let mut p = PeakOptions::for_spectrum(&measured[0].spectrum);
                    p.min_prominence = floor;
                    opts.peaks = Some(p);
                }
                let r = invert_spectra(job.class, &measured, &opts, None).map(|r| (r.outcomes, r.combined));
                rows.push(row(ctx, phi, opts.angle_tol, r));
            }
        }
    }

    let mut t = Table::new(&[
        "phi_true",
        "ratio",
        "principal",
        "ambiguity_class",
        "pruned",
        "error",
        "contains_truth",
        "failure",
    ])?;
    for r in &rows {
        let pruned = r.pruned.iter().map(|&x| rydpol_core::io::fmt_sig(x)).collect::<Vec<_>>().join(";");
        let class = r.ambiguity_class.map(|c| format!("{c:?}").to_lowercase()).unwrap_or_default();
        let opt = |x: Option<f64>| x.map(rydpol_core::io::fmt_sig).unwrap_or_default();
        t.row(&[
            Cell::Num(r.phi_true),
            Cell::Text(&opt(r.ratio)),
            Cell::Text(&opt(r.principal)),
            Cell::Text(&class),
            Cell::Text(&pruned),
            Cell::Text(&opt(r.error)),
            Cell::Text(if r.contains_truth { "true" } else { "false" }),
            Cell::Text(r.failure.as_deref().unwrap_or("")),
        ])?;
    }
    let mut out = Outputs::default();
    out.csv("roundtrip.csv", t)?;

    let recovered = rows.iter().filter(|r| r.contains_truth).count();
    let failed = rows.iter().filter(|r| r.failure.is_some()).count();
    let worst = rows.iter().filter_map(|r| r.error).fold(0.0, f64::max);
    out.summary.push(format!(
        "{}: {recovered}/{} recovered within {} {}, {failed} failed, largest error {worst:.6} {}",
        job.class,
        rows.len(),
        fmt_sig(ctx.angle_out(opts.angle_tol)),
        ctx.unit(),
        ctx.unit()
    ));
    out.json(
        "roundtrip.json",
        &RoundtripFile {
            class: job.class,
            forward: job.forward,
            optics: &job.optics,
            angle_unit: ctx.unit(),
            angle_tol: ctx.angle_out(opts.angle_tol),
            rows,
        },
    )?;
    Ok(out)
}
