//! File formats: SOP, spectrum, scenario, and report JSON, plus the number
//! formatting shared by every CSV writer.

use nalgebra::Vector3;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::angular::HalfInt;
use crate::dressing::TransitionClass;
use crate::eitsim::{uniform_grid, LevelScheme, SimParams};
use crate::error::SopError;
use crate::inversion::{AmbiguityClass, Calibration, PeakSet, PhaseCandidates, SampledSpectrum};
use crate::sop::{Beam, OpticalConfig, OpticsPreset, RfSop, StokesVector};

/// Significant digits written to CSV.
pub const SIG_DIGITS: usize = 9;

/// Formats `x` with nine significant digits, switching to exponent form
/// outside `[1e-4, 1e9)`. Trailing zeros are trimmed; `-0` prints as `0`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// SOP as `{"phi": f}` or `{"amp_plus": [re, im], "amp_minus": [re, im]}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SopSpec {
    Phi { phi: f64 },
    Amplitudes { amp_plus: [f64; 2], amp_minus: [f64; 2] },
}

impl SopSpec {
    pub fn to_sop(&self) -> Result<RfSop<f64>, SopError> {
        match *self {
            SopSpec::Phi { phi } if phi.is_finite() => Ok(RfSop::from_phi(phi)),
            SopSpec::Phi { .. } => Err(SopError::NonFinite("phi")),
            SopSpec::Amplitudes { amp_plus, amp_minus } => {
                RfSop::from_amplitudes(Complex::new(amp_plus[0], amp_plus[1]), Complex::new(amp_minus[0], amp_minus[1]))
            }
        }
    }

    pub fn from_sop(sop: &RfSop<f64>) -> Self {
        match sop.phi() {
            Some(phi) => SopSpec::Phi { phi },
            None => SopSpec::Amplitudes {
                amp_plus: [sop.amp_plus().re, sop.amp_plus().im],
                amp_minus: [sop.amp_minus().re, sop.amp_minus().im],
            },
        }
    }
}

/// Measured or simulated spectrum handed to the inverter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub detuning_mhz: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub class: TransitionClass,
    /// Optical geometry the spectrum was taken with; defaults to standard.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optics: Option<OpticsPreset>,
}

impl SpectrumFile {
    pub fn sampled(&self) -> Result<SampledSpectrum<f64>, crate::error::InversionError> {
        SampledSpectrum::new(self.detuning_mhz.clone(), self.amplitude.clone())
    }

    pub fn preset(&self) -> OpticsPreset {
        self.optics.unwrap_or(OpticsPreset::Standard)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThirdLevelSpec {
    pub delta_mhz: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    #[serde(rename = "J2")]
    pub j2: i32,
    pub p: i32,
    #[serde(rename = "intermediate_J2", default = "default_intermediate")]
    pub intermediate_j2: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub third_level: Option<ThirdLevelSpec>,
}

fn default_intermediate() -> i32 {
    3
}

/// Every field optional; missing ones take the simulator defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_probe_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_coupling_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_rf_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_i_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_r_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_probe_mhz: Option<f64>,
}

impl ParamsSpec {
    /// Simulator parameters, with defaults for the missing fields.
    pub fn to_params(&self, detuning_grid: Vec<f64>, optics: OpticalConfig<f64>) -> SimParams<f64> {
        let d = SimParams::<f64>::default();
        SimParams {
            omega_probe: self.omega_probe_mhz.unwrap_or(d.omega_probe),
            omega_coupling: self.omega_coupling_mhz.unwrap_or(d.omega_coupling),
            omega_rf: self.omega_rf_mhz.unwrap_or(d.omega_rf),
            gamma_i: self.gamma_i_mhz.unwrap_or(d.gamma_i),
            gamma_r: self.gamma_r_mhz.unwrap_or(d.gamma_r),
            delta_probe: self.delta_probe_mhz.unwrap_or(d.delta_probe),
            detuning_grid,
            optics,
        }
    }

    /// Every field set, defaults written out.
    pub fn filled(&self) -> ParamsSpec {
        let p = self.to_params(Vec::new(), OpticalConfig::standard());
        ParamsSpec {
            omega_probe_mhz: Some(p.omega_probe),
            omega_coupling_mhz: Some(p.omega_coupling),
            omega_rf_mhz: Some(p.omega_rf),
            gamma_i_mhz: Some(p.gamma_i),
            gamma_r_mhz: Some(p.gamma_r),
            delta_probe_mhz: Some(p.delta_probe),
        }
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overridden_by(&self, other: &ParamsSpec) -> ParamsSpec {
        ParamsSpec {
            omega_probe_mhz: other.omega_probe_mhz.or(self.omega_probe_mhz),
            omega_coupling_mhz: other.omega_coupling_mhz.or(self.omega_coupling_mhz),
            omega_rf_mhz: other.omega_rf_mhz.or(self.omega_rf_mhz),
            gamma_i_mhz: other.gamma_i_mhz.or(self.gamma_i_mhz),
            gamma_r_mhz: other.gamma_r_mhz.or(self.gamma_r_mhz),
            delta_probe_mhz: other.delta_probe_mhz.or(self.delta_probe_mhz),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min_mhz: f64,
    pub max_mhz: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { min_mhz: -100.0, max_mhz: 100.0, points: 401 }
    }
}

/// Jones vector as three `[re, im]` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSpec {
    pub direction: [f64; 3],
    pub polarization: [[f64; 2]; 3],
}

impl BeamSpec {
    pub fn to_beam(&self) -> Beam<f64> {
        Beam {
            direction: Vector3::from(self.direction),
            polarization: Vector3::from_fn(|k, _| Complex::new(self.polarization[k][0], self.polarization[k][1])),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OpticsSpec {
    Preset(OpticsPreset),
    Explicit { probe: BeamSpec, coupling: BeamSpec },
}

impl Default for OpticsSpec {
    fn default() -> Self {
        OpticsSpec::Preset(OpticsPreset::Standard)
    }
}

impl OpticsSpec {
    pub fn to_config(&self) -> OpticalConfig<f64> {
        match self {
            OpticsSpec::Preset(p) => OpticalConfig::preset(*p),
            OpticsSpec::Explicit { probe, coupling } => {
                OpticalConfig { probe: probe.to_beam(), coupling: coupling.to_beam() }
            }
        }
    }

    pub fn preset(&self) -> Option<OpticsPreset> {
        match self {
            OpticsSpec::Preset(p) => Some(*p),
            OpticsSpec::Explicit { .. } => None,
        }
    }
}

pub const DEFAULT_PHI_STEPS: usize = 73;

/// EIT scenario: level scheme, parameters, optics, and grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub optics: OpticsSpec,
    #[serde(default = "default_phi_steps")]
    pub phi_steps: usize,
    #[serde(default)]
    pub detuning: GridSpec,
}

fn default_phi_steps() -> usize {
    DEFAULT_PHI_STEPS
}

/// A validated scenario, ready to simulate.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub scheme: LevelScheme<f64>,
    pub params: SimParams<f64>,
    /// `phi_steps` points over `[0, 2pi]` inclusive.
    pub phi_grid: Vec<f64>,
}

impl ScenarioFile {
    /// Builds the scenario, or lists every problem found.
    pub fn validate(&self) -> Result<Scenario, Vec<String>> {
        let mut problems = Vec::new();
        let s = &self.scheme;
        let cls = match TransitionClass::from_twice(s.j2, s.p) {
            Ok(c) => Some(c),
            Err(e) => {
                problems.push(format!("scheme: {e}"));
                None
            }
        };
        if s.intermediate_j2 != 1 && s.intermediate_j2 != 3 {
            problems.push(format!("scheme.intermediate_J2 must be 1 or 3, got {}", s.intermediate_j2));
        }
        let mut scheme = None;
        if let Some(cls) = cls {
            let mut sc = LevelScheme::new(cls);
            sc.intermediate_j = HalfInt::from_twice(s.intermediate_j2);
            if let Some(t) = s.third_level {
                if !t.delta_mhz.is_finite() || t.delta_mhz <= 0.0 {
                    problems.push(format!("scheme.third_level.delta_mhz must be positive, got {}", t.delta_mhz));
                }
                match sc.clone().with_partner_level(t.delta_mhz) {
                    Ok(with) => sc = with,
                    Err(e) => problems.push(format!("scheme.third_level: {e}")),
                }
            }
            if problems.is_empty() {
                if let Err(e) = sc.validate() {
                    problems.push(format!("scheme: {e}"));
                }
            }
            scheme = Some(sc);
        }

        let g = self.detuning;
        if g.points < 2 {
            problems.push(format!("detuning.points must be at least 2, got {}", g.points));
        }
        if !(g.min_mhz.is_finite() && g.max_mhz.is_finite() && g.min_mhz < g.max_mhz) {
            problems.push(format!("detuning range must satisfy min_mhz < max_mhz, got [{}, {}]", g.min_mhz, g.max_mhz));
        }
        if self.phi_steps < 2 {
            problems.push(format!("phi_steps must be at least 2, got {}", self.phi_steps));
        }

        let grid = if g.points >= 2 { uniform_grid(g.min_mhz, g.max_mhz, g.points) } else { vec![0.0] };
        let params = self.params.to_params(grid, self.optics.to_config());
        problems.extend(
            params.problems().into_iter().filter(|m| !m.starts_with("detuning grid")).map(|m| format!("params: {m}")),
        );

        match scheme {
            Some(scheme) if problems.is_empty() => {
                Ok(Scenario { scheme, params, phi_grid: uniform_grid(0.0, std::f64::consts::TAU, self.phi_steps) })
            }
            _ => Err(problems),
        }
    }
}

/// Which ratio a report carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioConvention {
    InnerOverOuter,
    OuterOverInner,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub convention: RatioConvention,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CandidateStokes {
    pub phi: f64,
    #[serde(flatten)]
    pub stokes: StokesVector<f64>,
}

/// Per-spectrum diagnostics in an inversion report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumDiagnostics {
    pub optics: OpticsPreset,
    pub peaks: Option<PeakSet<f64>>,
    pub ratio: Option<f64>,
    pub central_share: f64,
    pub calibration: Option<Calibration<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InversionReport {
    pub class: TransitionClass,
    /// `"rad"` or `"deg"`, applying to every angle in the report.
    pub angle_unit: &'static str,
    #[serde(rename = "R")]
    pub ratio: RatioReport,
    pub principal: f64,
    pub candidates: Vec<f64>,
    pub pruned: Vec<f64>,
    pub ambiguity_class: AmbiguityClass,
    pub ambiguous_prominence: bool,
    pub stokes: Vec<CandidateStokes>,
    pub diagnostics: Vec<SpectrumDiagnostics>,
    pub warnings: Vec<String>,
}

impl InversionReport {
    pub fn new(
        class: TransitionClass,
        ratio: RatioReport,
        result: &PhaseCandidates<f64>,
        diagnostics: Vec<SpectrumDiagnostics>,
        degrees: bool,
    ) -> Self {
        let conv = |x: f64| if degrees { x.to_degrees() } else { x };
        InversionReport {
            class,
            angle_unit: if degrees { "deg" } else { "rad" },
            ratio,
            principal: conv(result.principal),
            candidates: result.candidates.iter().map(|&x| conv(x)).collect(),
            pruned: result.pruned.iter().map(|&x| conv(x)).collect(),
            ambiguity_class: result.ambiguity_class,
            ambiguous_prominence: result.ambiguous_prominence,
            stokes: result
                .pruned
                .iter()
                .map(|&phi| CandidateStokes { phi: conv(phi), stokes: RfSop::from_phi(phi).stokes() })
                .collect(),
            diagnostics,
            warnings: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt_sig(-123456.789012), "-123456.789");
        assert_eq!(fmt_sig(0.000123456789123), "0.000123456789");
        assert_eq!(fmt_sig(1.23456789123e-7), "1.23456789e-7");
        assert_eq!(fmt_sig(9.9999999999), "10");
        assert_eq!(fmt_sig(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
    }

    #[test]
    fn sop_spec_round_trip() {
        let s: SopSpec = serde_json::from_str(r#"{"phi": 0.5}"#).unwrap();
        assert_eq!(s.to_sop().unwrap().phi(), Some(0.5));
        let s: SopSpec = serde_json::from_str(r#"{"amp_plus": [0.6, 0], "amp_minus": [0, 0.8]}"#).unwrap();
        let sop = s.to_sop().unwrap();
        assert!((sop.amp_minus().im - 0.8).abs() < 1e-15);
        assert!(serde_json::from_str::<SopSpec>(r#"{"theta": 1}"#).is_err());
        let zero: SopSpec = serde_json::from_str(r#"{"amp_plus": [0, 0], "amp_minus": [0, 0]}"#).unwrap();
        assert!(zero.to_sop().is_err());
    }

    #[test]
    fn spectrum_file_parses_class() {
        let f: SpectrumFile =
            serde_json::from_str(r#"{"detuning_mhz": [1, 2], "amplitude": [0, 1], "class": {"J2": 3, "p": 1}}"#)
                .unwrap();
        assert_eq!(f.class, TransitionClass::THREE_HALF_PLUS);
        assert_eq!(f.preset(), OpticsPreset::Standard);
    }

    #[test]
    fn minimal_scenario_uses_defaults() {
        let f: ScenarioFile = serde_json::from_str(r#"{"scheme": {"J2": 1, "p": 0}}"#).unwrap();
        let s = f.validate().unwrap();
        assert_eq!(s.params.detuning_grid.len(), 401);
        assert_eq!(s.phi_grid.len(), DEFAULT_PHI_STEPS);
        assert_eq!(s.params.omega_rf, 40.0);
    }

    #[test]
    fn scenario_reports_every_problem() {
        let f: ScenarioFile = serde_json::from_str(
            r#"{"scheme": {"J2": 2, "p": 0, "intermediate_J2": 5},
                "params": {"omega_rf_mhz": -1, "gamma_i_mhz": 0},
                "phi_steps": 1,
                "detuning": {"min_mhz": 5, "max_mhz": -5, "points": 1}}"#,
        )
        .unwrap();
        let problems = f.validate().unwrap_err();
        assert!(problems.len() >= 6, "{problems:#?}");
        assert!(problems.iter().any(|p| p.contains("omega_rf")));
        assert!(problems.iter().any(|p| p.contains("phi_steps")));
        assert!(problems.iter().any(|p| p.contains("intermediate_J2")));
    }

    #[test]
    fn explicit_optics_accepted() {
        let f: ScenarioFile = serde_json::from_str(
            r#"{"scheme": {"J2": 3, "p": 1, "third_level": {"delta_mhz": 200}},
                "optics": {"probe": {"direction": [0, 1, 0], "polarization": [[1, 0], [0, 0], [0, 0]]},
                           "coupling": {"direction": [0, -1, 0], "polarization": [[1, 0], [0, 0], [0, 0]]}}}"#,
        )
        .unwrap();
        let s = f.validate().unwrap();
        assert_eq!(s.params.optics, OpticalConfig::standard());
        assert_eq!(s.scheme.third.unwrap().delta, 200.0);
        let named: ScenarioFile =
            serde_json::from_str(r#"{"scheme": {"J2": 3, "p": 1}, "optics": "rotated_circular"}"#).unwrap();
        assert_eq!(named.optics.preset(), Some(OpticsPreset::RotatedCircular));
    }
}
