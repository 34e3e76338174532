use serde::{Deserialize, Serialize};

use super::calibrate::{calibrate, Calibration, CentralModel, EitCentralModel, LineStrengthModel};
use super::peaks::{central_share, extract_peaks, PeakLayout, PeakOptions, PeakSet, SampledSpectrum};
use super::{
    invert_five_half_with, invert_half, prune, ratio_five_half, ratio_half, FiveHalfKernel, FiveHalfRatio,
    HalfZeroRatio, PhaseCandidates,
};
use crate::dressing::{eigen_spectrum, TransitionClass, DEFAULT_DEGENERACY_TOL};
use crate::eitsim::{line_strengths, EitSimulator, LevelScheme, SimParams};
use crate::error::InversionError;
use crate::scalar::Real;
use crate::sop::{OpticalConfig, OpticsPreset, RfSop};

/// Where the synthetic spectrum comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardModel {
    /// Exact eigenvalues, with line-strength central shares.
    Eigen,
    /// Simulated EIT spectra and extracted peaks.
    Eit,
}

#[derive(Clone, Debug)]
pub struct RoundTripOptions<T: Real> {
    pub forward: ForwardModel,
    /// Base parameters; the optics are replaced per configuration.
    pub params: SimParams<T>,
    /// Slack on the ratio range (absolute for `1/2^0`, relative for `3/2^+-`).
    pub range_tol: T,
    pub dead_band_fraction: T,
    /// Truth counts as recovered within this many radians.
    pub angle_tol: T,
    /// Peak options for the EIT route; `None` derives them per spectrum.
    pub peaks: Option<PeakOptions<T>>,
    pub kernel: FiveHalfKernel,
}

impl<T: Real> RoundTripOptions<T> {
    pub fn eigen() -> Self {
        RoundTripOptions {
            forward: ForwardModel::Eigen,
            params: SimParams::default(),
            range_tol: T::lit(1e-9),
            dead_band_fraction: T::lit(0.1),
            angle_tol: T::lit(2f64.to_radians()),
            peaks: None,
            kernel: FiveHalfKernel::ClosedForm,
        }
    }

    pub fn eit(params: SimParams<T>) -> Self {
        RoundTripOptions {
            forward: ForwardModel::Eit,
            params,
            range_tol: T::lit(0.05),
            dead_band_fraction: T::lit(0.1),
            angle_tol: T::lit(5f64.to_radians()),
            peaks: None,
            kernel: FiveHalfKernel::ClosedForm,
        }
    }
}

/// Result for one optical configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigOutcome<T> {
    pub preset: OpticsPreset,
    /// Ratio read from this configuration's spectrum, when extraction succeeded.
    pub ratio: Option<T>,
    pub central_share: T,
    pub calibration: Option<Calibration<T>>,
    pub peaks: Option<PeakSet<T>>,
    pub candidates: PhaseCandidates<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripReport<T> {
    pub class: TransitionClass,
    pub phi_true: T,
    pub forward: ForwardModel,
    pub outcomes: Vec<ConfigOutcome<T>>,
    /// Intersection over all configurations.
    pub combined: PhaseCandidates<T>,
    /// Distance from the truth to the nearest surviving candidate.
    pub error: T,
    pub contains_truth: bool,
}

/// Spectrum seen under one configuration.
struct Measurement<T> {
    peaks: Result<PeakSet<T>, InversionError>,
    central_share: T,
}

fn measure_spectrum<T: Real>(
    spec: &SampledSpectrum<T>,
    layout: PeakLayout,
    peaks: Option<PeakOptions<T>>,
) -> Measurement<T> {
    let popts = peaks.unwrap_or_else(|| PeakOptions::for_spectrum(spec));
    Measurement { peaks: extract_peaks(spec, layout, &popts), central_share: central_share(spec, &popts) }
}

fn measure<T: Real>(
    cls: TransitionClass,
    phi: T,
    layout: PeakLayout,
    opts: &RoundTripOptions<T>,
    line_model: &LineStrengthModel<T>,
    sim: Option<&EitSimulator<T>>,
) -> Result<Measurement<T>, InversionError> {
    match sim {
        None => {
            let spec = eigen_spectrum(cls, phi, T::lit(DEFAULT_DEGENERACY_TOL))?;
            let lines = line_strengths(&line_model.scheme, &line_model.params, &RfSop::from_phi(phi))?;
            let peaks = PeakSet::from_eigen_lines(cls, &spec, &lines, line_model.params.omega_rf);
            Ok(Measurement { central_share: peaks.central_share(), peaks: Ok(peaks) })
        }
        Some(sim) => {
            let s = sim.spectrum(phi)?;
            let spec = SampledSpectrum::new(s.detuning, s.response)?;
            Ok(measure_spectrum(&spec, layout, opts.peaks))
        }
    }
}

/// How a configuration's central-peak share is turned into evidence.
enum Threshold<'a, T: Real> {
    Model(&'a dyn CentralModel<T>),
    Fixed(Calibration<T>),
    /// Only valid where the layout has no pruning rule.
    Ignored,
}

/// One step of the multi-configuration inversion: the first call (with
/// `current = None`) inverts the ratio, every call prunes.
fn step<T: Real>(
    layout: PeakLayout,
    preset: OpticsPreset,
    m: Measurement<T>,
    current: Option<PhaseCandidates<T>>,
    threshold: Threshold<'_, T>,
    opts: &RoundTripOptions<T>,
) -> Result<ConfigOutcome<T>, InversionError> {
    let ratio = match (&m.peaks, layout) {
        (Ok(p), PeakLayout::HalfZero) => ratio_half(p).map(|r| r.0),
        (Ok(p), PeakLayout::FiveHalf) => ratio_five_half(p).map(|r| r.0),
        (Err(e), _) => Err(e.clone()),
    };
    let base = match current {
        Some(prev) => prev,
        None => {
            let r = ratio.clone()?;
            match layout {
                PeakLayout::HalfZero => invert_half(HalfZeroRatio(r), opts.range_tol)?,
                PeakLayout::FiveHalf => {
                    invert_five_half_with(FiveHalfRatio(r), None, preset, opts.range_tol, opts.kernel)?
                }
            }
        }
    };
    let (calibration, candidates) = match layout {
        PeakLayout::HalfZero => (None, base),
        PeakLayout::FiveHalf => {
            let cal = match threshold {
                Threshold::Model(model) => calibrate(model, preset, &base.pruned, opts.dead_band_fraction)?,
                Threshold::Fixed(c) => Some(c),
                Threshold::Ignored => None,
            };
            let pruned = match cal.filter(Calibration::is_separating) {
                Some(c) => prune(&base, c.evidence(m.central_share), preset),
                None => base,
            };
            (cal, pruned)
        }
    };
    Ok(ConfigOutcome {
        preset,
        ratio: ratio.ok(),
        central_share: m.central_share,
        calibration,
        peaks: m.peaks.ok(),
        candidates,
    })
}

/// Forward-simulates `cls` at `phi_true` under each configuration and
/// inverts. The first configuration supplies the ratio and candidate set;
/// every configuration then prunes the surviving candidates with its own
/// central-peak share, calibrated over those candidates. For `1/2^0` there
/// is no pruning rule and later configurations only report their ratio.
pub fn round_trip<T: Real>(
    cls: TransitionClass,
    phi_true: T,
    configs: &[OpticsPreset],
    opts: &RoundTripOptions<T>,
) -> Result<RoundTripReport<T>, InversionError> {
    let layout = PeakLayout::for_class(cls)?;
    if configs.is_empty() {
        return Err(InversionError::Inconsistent);
    }
    let scheme = LevelScheme::new(cls);
    let mut outcomes: Vec<ConfigOutcome<T>> = Vec::new();
    let mut current: Option<PhaseCandidates<T>> = None;
    for &preset in configs {
        let params = SimParams { optics: OpticalConfig::preset(preset), ..opts.params.clone() };
        let line_model = LineStrengthModel::new(scheme.clone(), params.clone());
        let sim = match opts.forward {
            ForwardModel::Eigen => None,
            ForwardModel::Eit => Some(EitSimulator::new(&scheme, &params)?),
        };
        let m = measure(cls, phi_true, layout, opts, &line_model, sim.as_ref())?;
        let outcome = match &sim {
            None => step(layout, preset, m, current.take(), Threshold::Model(&line_model), opts)?,
            Some(sim) => {
                let model = EitCentralModel { simulator: sim, peaks: opts.peaks };
                step(layout, preset, m, current.take(), Threshold::Model(&model), opts)?
            }
        };
        current = Some(outcome.candidates.clone());
        outcomes.push(outcome);
    }
    let combined = current.expect("at least one configuration");
    let error = combined.distance_to(phi_true);
    Ok(RoundTripReport {
        class: cls,
        phi_true,
        forward: opts.forward,
        outcomes,
        contains_truth: error <= opts.angle_tol,
        combined,
        error,
    })
}

/// A measured spectrum and the optics it was recorded with.
#[derive(Clone, Debug)]
pub struct Measured<T> {
    pub preset: OpticsPreset,
    pub spectrum: SampledSpectrum<T>,
}

/// Inversion of measured spectra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectraInversion<T> {
    pub class: TransitionClass,
    pub outcomes: Vec<ConfigOutcome<T>>,
    pub combined: PhaseCandidates<T>,
}

/// Inverts measured spectra with the same rules as [`round_trip`].
///
/// The central-peak threshold of each spectrum is calibrated against an EIT
/// simulation with `opts.params`, that spectrum's optics, and its detuning
/// grid, unless `fixed` supplies one.
pub fn invert_spectra<T: Real>(
    cls: TransitionClass,
    spectra: &[Measured<T>],
    opts: &RoundTripOptions<T>,
    fixed: Option<Calibration<T>>,
) -> Result<SpectraInversion<T>, InversionError> {
    let layout = PeakLayout::for_class(cls)?;
    if spectra.is_empty() {
        return Err(InversionError::Inconsistent);
    }
    let scheme = LevelScheme::new(cls);
    let mut outcomes = Vec::new();
    let mut current: Option<PhaseCandidates<T>> = None;
    for m in spectra {
        let measurement = measure_spectrum(&m.spectrum, layout, opts.peaks);
        let outcome = match (fixed, layout) {
            (Some(c), _) => step(layout, m.preset, measurement, current.take(), Threshold::Fixed(c), opts)?,
            (None, PeakLayout::HalfZero) => {
                step(layout, m.preset, measurement, current.take(), Threshold::Ignored, opts)?
            }
            (None, PeakLayout::FiveHalf) => {
                let params = SimParams {
                    optics: OpticalConfig::preset(m.preset),
                    detuning_grid: m.spectrum.detuning().to_vec(),
                    ..opts.params.clone()
                };
                let sim = EitSimulator::new(&scheme, &params)?;
                let model = EitCentralModel { simulator: &sim, peaks: opts.peaks };
                step(layout, m.preset, measurement, current.take(), Threshold::Model(&model), opts)?
            }
        };
        current = Some(outcome.candidates.clone());
        outcomes.push(outcome);
    }
    Ok(SpectraInversion { class: cls, outcomes, combined: current.expect("at least one spectrum") })
}
