//! Steady-state ladder EIT through an RF-dressed Rydberg manifold.
//!
//! Ladder: ground `g` (`5S_1/2`, one magnetic sublevel per solve) -> probe ->
//! intermediate `i` (`5P_J_i`) -> coupling -> the laser-accessible Rydberg
//! manifold, which the RF field dresses with its dipole partner. The probe
//! response is summed incoherently over both ground sublevels.
//!
//! Units: detunings, Rabi frequencies, and rates share one unit (MHz).
//! Rotating frame: `H_gg = 0`, `H_ii = -delta_p`, Rydberg
//! `H_rr = -(delta_p + delta_c)`, third level `+ delta_3` on top.

mod hamiltonian;
mod lindblad;
mod sweep;

use crate::angular::{FineLevel, HalfInt};
use crate::dressing::{Manifold, TransitionClass};
use crate::error::SimError;
use crate::scalar::Real;
use crate::sop::{OpticalConfig, OpticsPreset};

pub use hamiltonian::{build_hamiltonian, HamiltonianBuilder, SchemeState, StateKind};
pub use lindblad::{lindblad_apply, steady_state, Jump, SteadyState, SteadyStateOptions};
pub use sweep::{
    central_line_share, eit_spectrogram, eit_spectrum, line_strengths, mirror_asymmetry, rms_distance,
    third_level_sweep, EitSimulator, EitSpectrogram, EitSpectrum, LineStrength,
};

/// Off-resonant Rydberg level sharing the orbital momentum of the laser
/// target, RF-coupled to `r1` and shifted by `delta` above the dressed pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThirdLevel<T> {
    pub j: HalfInt,
    pub delta: T,
}

/// Atomic level structure for one simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelScheme<T> {
    pub cls: TransitionClass,
    pub intermediate_j: HalfInt,
    pub third: Option<ThirdLevel<T>>,
    /// Rydberg manifold addressed by the coupling laser; `None` picks the
    /// one with even orbital momentum (the only one reachable from `P`).
    pub laser_target: Option<Manifold>,
}

impl<T: Real> LevelScheme<T> {
    pub fn new(cls: TransitionClass) -> Self {
        LevelScheme { cls, intermediate_j: HalfInt::THREE_HALVES, third: None, laser_target: None }
    }

    /// Adds the fine-structure partner of the laser target as a third level.
    pub fn with_partner_level(mut self, delta: T) -> Result<Self, SimError> {
        let target = self.target_level()?;
        let partner = target.partner().ok_or_else(|| {
            SimError::InvalidParameter(format!(
                "laser-target level L={} J={} has no fine-structure partner",
                target.l, target.j
            ))
        })?;
        self.third = Some(ThirdLevel { j: partner.j, delta });
        self.third_level()?;
        Ok(self)
    }

    pub fn ground_level(&self) -> FineLevel {
        FineLevel { l: 0, j: HalfInt::HALF }
    }

    pub fn intermediate_level(&self) -> Result<FineLevel, SimError> {
        Ok(FineLevel::new(1, self.intermediate_j)?)
    }

    pub fn target_manifold(&self) -> Result<Manifold, SimError> {
        if let Some(m) = self.laser_target {
            return Ok(m);
        }
        let (r1, r2) = self.cls.levels();
        match (r1.l, r2.l) {
            (l, _) if l == 0 || l == 2 => Ok(Manifold::R1),
            (_, l) if l == 0 || l == 2 => Ok(Manifold::R2),
            _ => Err(SimError::InvalidParameter(format!(
                "neither Rydberg level of class {} is reachable from a P intermediate level",
                self.cls
            ))),
        }
    }

    pub fn target_level(&self) -> Result<FineLevel, SimError> {
        let (r1, r2) = self.cls.levels();
        Ok(match self.target_manifold()? {
            Manifold::R1 => r1,
            Manifold::R2 => r2,
        })
    }

    pub fn third_level(&self) -> Result<Option<FineLevel>, SimError> {
        match &self.third {
            None => Ok(None),
            Some(t) => {
                let l = self.target_level()?.l;
                let level = FineLevel::new(l, t.j)?;
                let (r1, _) = self.cls.levels();
                if level.l.abs_diff(r1.l) != 1 {
                    return Err(SimError::InvalidParameter(format!(
                        "third level L={} J={} is not dipole-coupled to r1",
                        level.l, level.j
                    )));
                }
                Ok(Some(level))
            }
        }
    }

    /// Number of states in one solve (a single ground sublevel).
    pub fn dim(&self) -> usize {
        1 + self.intermediate_j.multiplicity() + self.cls.dim() + self.third.map_or(0, |t| t.j.multiplicity())
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.intermediate_level()?;
        let target = self.target_level()?;
        if target.l != 0 && target.l != 2 {
            return Err(SimError::InvalidParameter(format!(
                "laser target L={} cannot be reached from a P level",
                target.l
            )));
        }
        self.third_level()?;
        if let Some(t) = &self.third {
            if !t.delta.is_finite() || !(t.delta > T::zero()) {
                return Err(SimError::InvalidParameter(format!(
                    "third-level detuning must be positive, got {}",
                    t.delta
                )));
            }
        }
        Ok(())
    }
}

/// Rates and fields, all in MHz.
#[derive(Clone, Debug, PartialEq)]
pub struct SimParams<T: Real> {
    pub omega_probe: T,
    pub omega_coupling: T,
    pub omega_rf: T,
    pub gamma_i: T,
    pub gamma_r: T,
    pub delta_probe: T,
    pub detuning_grid: Vec<T>,
    pub optics: OpticalConfig<T>,
}

impl<T: Real> Default for SimParams<T> {
    fn default() -> Self {
        SimParams {
            omega_probe: T::lit(0.5),
            omega_coupling: T::lit(4.0),
            omega_rf: T::lit(40.0),
            gamma_i: T::lit(6.07),
            gamma_r: T::lit(0.1),
            delta_probe: T::zero(),
            detuning_grid: uniform_grid(T::lit(-100.0), T::lit(100.0), 401),
            optics: OpticalConfig::preset(OpticsPreset::Standard),
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::from_usize(n - 1).expect("grid size");
            (0..n).map(|k| lo + step * T::from_usize(k).expect("grid index")).collect()
        }
    }
}

impl<T: Real> SimParams<T> {
    /// Every problem with the parameters, not just the first.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let named = [
            ("omega_probe", self.omega_probe),
            ("omega_coupling", self.omega_coupling),
            ("omega_rf", self.omega_rf),
            ("gamma_i", self.gamma_i),
            ("gamma_r", self.gamma_r),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < T::zero() {
                out.push(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !self.delta_probe.is_finite() {
            out.push("delta_probe must be finite".into());
        }
        if !(self.gamma_i > T::zero()) {
            out.push("gamma_i must be positive for a unique steady state".into());
        }
        if self.detuning_grid.is_empty() {
            out.push("detuning grid is empty".into());
        } else if self.detuning_grid.iter().any(|d| !d.is_finite()) {
            out.push("detuning grid has non-finite values".into());
        } else if self.detuning_grid.windows(2).any(|w| !(w[1] > w[0])) {
            out.push("detuning grid must be strictly increasing".into());
        }
        if let Err(e) = self.optics.validate() {
            out.push(format!("optics: {e}"));
        }
        out
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidParameter(p.join("; ")))
        }
    }

    /// Non-fatal advisories.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.omega_probe > self.gamma_i * T::lit(0.2) {
            out.push(format!(
                "omega_probe = {} is not small against gamma_i = {}; the response is outside the weak-probe regime",
                self.omega_probe, self.gamma_i
            ));
        }
        out
    }
}
