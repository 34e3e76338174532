use serde::Serialize;

use super::peaks::{central_share, PeakOptions, SampledSpectrum};
use super::{in_high_interval, in_low_interval, CentralEvidence};
use crate::eitsim::{central_line_share, line_strengths, EitSimulator, LevelScheme, SimParams};
use crate::error::InversionError;
use crate::scalar::Real;
use crate::sop::{OpticsPreset, RfSop};

/// Predicts the central-peak share a spectrum would show at `phi`.
pub trait CentralModel<T> {
    fn central_share(&self, phi: T) -> Result<T, InversionError>;
}

/// Central share of the weak-probe line strengths of the dressed states.
#[derive(Clone, Debug)]
pub struct LineStrengthModel<T: Real> {
    pub scheme: LevelScheme<T>,
    pub params: SimParams<T>,
    /// Lines within this fraction of the largest |energy| count as central.
    pub rel_tol: T,
}

impl<T: Real> LineStrengthModel<T> {
    pub fn new(scheme: LevelScheme<T>, params: SimParams<T>) -> Self {
        LineStrengthModel { scheme, params, rel_tol: T::lit(1e-6) }
    }
}

impl<T: Real> CentralModel<T> for LineStrengthModel<T> {
    fn central_share(&self, phi: T) -> Result<T, InversionError> {
        let lines = line_strengths(&self.scheme, &self.params, &RfSop::from_phi(phi))?;
        Ok(central_line_share(&lines, self.rel_tol))
    }
}

/// Central share measured on simulated EIT spectra.
pub struct EitCentralModel<'a, T: Real> {
    pub simulator: &'a EitSimulator<T>,
    /// Peak options; `None` derives them from each spectrum.
    pub peaks: Option<PeakOptions<T>>,
}

impl<T: Real> CentralModel<T> for EitCentralModel<'_, T> {
    fn central_share(&self, phi: T) -> Result<T, InversionError> {
        let s = self.simulator.spectrum(phi)?;
        let spec = SampledSpectrum::new(s.detuning, s.response)?;
        let opts = self.peaks.unwrap_or_else(|| PeakOptions::for_spectrum(&spec));
        Ok(central_share(&spec, &opts))
    }
}

/// Threshold between the mean predicted shares of the candidates kept for a
/// strong central peak and those kept for a weak one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration<T> {
    pub high_mean: T,
    pub low_mean: T,
    pub threshold: T,
    pub dead_band: T,
}

impl<T: Real> Calibration<T> {
    /// A user-supplied threshold and dead band, without model group means.
    pub fn fixed(threshold: T, dead_band: T) -> Self {
        Calibration { high_mean: T::one(), low_mean: T::zero(), threshold, dead_band }
    }

    pub fn evidence(&self, prominence: T) -> CentralEvidence<T> {
        CentralEvidence { prominence, threshold: self.threshold, dead_band: self.dead_band }
    }

    /// False when the model predicts the weak group to be at least as strong,
    /// in which case the pruning rule does not apply.
    pub fn is_separating(&self) -> bool {
        self.high_mean > self.low_mean
    }
}

/// Calibrates a threshold over `angles`. Returns `None` when the angles do
/// not fall on both sides of the preset's interval boundary, so pruning
/// would not change anything.
///
/// The dead band is `dead_band_fraction` times the gap between the group means.
pub fn calibrate<T: Real, M: CentralModel<T> + ?Sized>(
    model: &M,
    preset: OpticsPreset,
    angles: &[T],
    dead_band_fraction: T,
) -> Result<Option<Calibration<T>>, InversionError> {
    let high: Vec<T> =
        angles.iter().copied().filter(|&a| in_high_interval(a, preset) && !in_low_interval(a, preset)).collect();
    let low: Vec<T> =
        angles.iter().copied().filter(|&a| in_low_interval(a, preset) && !in_high_interval(a, preset)).collect();
    if high.is_empty() || low.is_empty() {
        return Ok(None);
    }
    let mean = |xs: &[T]| -> Result<T, InversionError> {
        let mut s = T::zero();
        for &x in xs {
            s += model.central_share(x)?;
        }
        Ok(s / T::from_usize(xs.len()).expect("count"))
    };
    let high_mean = mean(&high)?;
    let low_mean = mean(&low)?;
    Ok(Some(Calibration {
        high_mean,
        low_mean,
        threshold: (high_mean + low_mean) / T::lit(2.0),
        dead_band: dead_band_fraction * (high_mean - low_mean).abs(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dressing::TransitionClass;
    use std::f64::consts::PI;

    struct Table;
    impl CentralModel<f64> for Table {
        fn central_share(&self, phi: f64) -> Result<f64, InversionError> {
            Ok((1.0 - phi.cos()) / 2.0)
        }
    }

    #[test]
    fn threshold_splits_groups() {
        let angles = [0.5, PI - 0.5, PI + 0.5, 2.0 * PI - 0.5];
        let c = calibrate(&Table, OpticsPreset::Standard, &angles, 0.1).unwrap().unwrap();
        assert!(c.is_separating());
        assert!((c.threshold - 0.5).abs() < 1e-12);
        assert!((c.dead_band - 0.1 * 0.5f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn one_sided_angles_need_no_calibration() {
        let angles = [PI / 2.0, 1.5 * PI];
        assert_eq!(calibrate(&Table, OpticsPreset::Standard, &angles, 0.1).unwrap(), None);
    }

    #[test]
    fn line_strength_model_follows_standard_shape() {
        let m = LineStrengthModel::new(LevelScheme::new(TransitionClass::THREE_HALF_PLUS), SimParams::default());
        assert!(m.central_share(0.0).unwrap() < 1e-12);
        assert!((m.central_share(PI).unwrap() - 0.625).abs() < 1e-9);
        let c =
            calibrate(&m, OpticsPreset::Standard, &[1.0, PI - 1.0, PI + 1.0, 2.0 * PI - 1.0], 0.1).unwrap().unwrap();
        assert!(c.is_separating());
    }
}
