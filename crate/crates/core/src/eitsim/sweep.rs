use nalgebra::DMatrix;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use super::hamiltonian::{HamiltonianBuilder, StateKind};
use super::lindblad::{steady_state, SteadyState, SteadyStateOptions};
use super::{LevelScheme, SimParams, ThirdLevel};
use crate::angular::HalfInt;
use crate::error::SimError;
use crate::scalar::{angle_distance, Real};
use crate::sop::RfSop;

type C<T> = Complex<T>;

/// Probe transparency versus coupling detuning at one SOP.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EitSpectrum<T> {
    pub phi: Option<T>,
    pub detuning: Vec<T>,
    pub response: Vec<T>,
}

/// Responses on a `phi x delta_c` grid; `response[k]` is the row for `phi_grid[k]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EitSpectrogram<T> {
    pub phi_grid: Vec<T>,
    pub detuning_grid: Vec<T>,
    pub response: Vec<Vec<T>>,
}

impl<T: Real> EitSpectrogram<T> {
    pub fn peak_response(&self) -> T {
        self.response.iter().flatten().copied().fold(T::zero(), |a, b| a.max(b))
    }

    pub fn row(&self, k: usize) -> EitSpectrum<T> {
        EitSpectrum {
            phi: Some(self.phi_grid[k]),
            detuning: self.detuning_grid.clone(),
            response: self.response[k].clone(),
        }
    }
}

fn absorption_of<T: Real>(rho: &DMatrix<C<T>>, weights: &[C<T>]) -> T {
    let mut acc = C::new(T::zero(), T::zero());
    for (a, w) in weights.iter().enumerate().skip(1) {
        acc += w.conj() * rho[(a, 0)];
    }
    -acc.im
}

/// Precomputed simulator for one scheme and parameter set.
///
/// The response is `sum_{m_g} (A_0 - A(delta_c))`, where `A` is the probe
/// absorption and `A_0` its value with the coupling laser off, clamped at
/// zero. It is linear in the probe Rabi frequency in the weak-probe limit.
#[derive(Clone, Debug)]
pub struct EitSimulator<T: Real> {
    builders: Vec<HamiltonianBuilder<T>>,
    baseline: Vec<T>,
    detuning: Vec<T>,
    opts: SteadyStateOptions<T>,
}

impl<T: Real> EitSimulator<T> {
    pub fn new(scheme: &LevelScheme<T>, params: &SimParams<T>) -> Result<Self, SimError> {
        Self::with_options(scheme, params, SteadyStateOptions::default())
    }

    pub fn with_options(
        scheme: &LevelScheme<T>,
        params: &SimParams<T>,
        opts: SteadyStateOptions<T>,
    ) -> Result<Self, SimError> {
        let mut builders = Vec::new();
        let mut baseline = Vec::new();
        for m_g in [HalfInt::from_twice(-1), HalfInt::HALF] {
            let b = HamiltonianBuilder::new(scheme, params, m_g)?;
            let (h0, jumps0, w0) = b.probe_only();
            let s0 = steady_state(&h0, &jumps0, &opts)?;
            baseline.push(absorption_of(&s0.rho, &w0));
            builders.push(b);
        }
        Ok(EitSimulator { builders, baseline, detuning: params.detuning_grid.clone(), opts })
    }

    pub fn detuning_grid(&self) -> &[T] {
        &self.detuning
    }

    pub fn builders(&self) -> &[HamiltonianBuilder<T>] {
        &self.builders
    }

    /// Full steady states (one per ground sublevel) at one point.
    pub fn steady_states(&self, sop: &RfSop<T>, delta_c: T) -> Result<Vec<SteadyState<T>>, SimError> {
        self.builders.iter().map(|b| steady_state(&b.hamiltonian(sop, delta_c), b.jumps(), &self.opts)).collect()
    }

    pub fn response_at(&self, sop: &RfSop<T>, delta_c: T) -> Result<T, SimError> {
        let mut total = T::zero();
        for (b, a0) in self.builders.iter().zip(&self.baseline) {
            let s = steady_state(&b.hamiltonian(sop, delta_c), b.jumps(), &self.opts)?;
            total += *a0 - b.absorption(&s.rho);
        }
        Ok(total.max(T::zero()))
    }

    pub fn spectrum_sop(&self, sop: &RfSop<T>) -> Result<EitSpectrum<T>, SimError> {
        let response = self.detuning.par_iter().map(|&d| self.response_at(sop, d)).collect::<Result<Vec<_>, _>>()?;
        Ok(EitSpectrum { phi: sop.phi(), detuning: self.detuning.clone(), response })
    }

    pub fn spectrum(&self, phi: T) -> Result<EitSpectrum<T>, SimError> {
        self.spectrum_sop(&RfSop::from_phi(phi))
    }

    pub fn spectrogram(&self, phi_grid: &[T]) -> Result<EitSpectrogram<T>, SimError> {
        if phi_grid.is_empty() {
            return Err(SimError::InvalidParameter("phase-angle grid is empty".into()));
        }
        if let Some(bad) = phi_grid.iter().find(|p| !p.is_finite()) {
            return Err(SimError::InvalidParameter(format!("phase angle {bad} is not finite")));
        }
        let sops: Vec<RfSop<T>> = phi_grid.iter().map(|&p| RfSop::from_phi(p)).collect();
        let nd = self.detuning.len();
        let flat = (0..phi_grid.len() * nd)
            .into_par_iter()
            .map(|k| self.response_at(&sops[k / nd], self.detuning[k % nd]))
            .collect::<Result<Vec<_>, _>>()?;
        let response = flat.chunks(nd).map(|c| c.to_vec()).collect();
        Ok(EitSpectrogram { phi_grid: phi_grid.to_vec(), detuning_grid: self.detuning.clone(), response })
    }
}

/// Probe response versus coupling detuning at phase angle `phi`.
pub fn eit_spectrum<T: Real>(
    scheme: &LevelScheme<T>,
    params: &SimParams<T>,
    phi: T,
) -> Result<EitSpectrum<T>, SimError> {
    EitSimulator::new(scheme, params)?.spectrum(phi)
}

pub fn eit_spectrogram<T: Real>(
    scheme: &LevelScheme<T>,
    params: &SimParams<T>,
    phi_grid: &[T],
) -> Result<EitSpectrogram<T>, SimError> {
    EitSimulator::new(scheme, params)?.spectrogram(phi_grid)
}

/// One spectrogram per third-level detuning.
pub fn third_level_sweep<T: Real>(
    scheme: &LevelScheme<T>,
    params: &SimParams<T>,
    phi_grid: &[T],
    deltas: &[T],
) -> Result<Vec<EitSpectrogram<T>>, SimError> {
    let third = scheme.third.ok_or_else(|| SimError::InvalidParameter("scheme has no third level".into()))?;
    deltas
        .iter()
        .map(|&delta| {
            let mut s = scheme.clone();
            s.third = Some(ThirdLevel { j: third.j, delta });
            eit_spectrogram(&s, params, phi_grid)
        })
        .collect()
}

fn same_shape<T>(a: &EitSpectrogram<T>, b: &EitSpectrogram<T>) -> bool {
    a.response.len() == b.response.len() && a.response.iter().zip(&b.response).all(|(x, y)| x.len() == y.len())
}

/// Root-mean-square difference over all grid points.
pub fn rms_distance<T: Real>(a: &EitSpectrogram<T>, b: &EitSpectrogram<T>) -> Result<T, SimError> {
    if !same_shape(a, b) {
        return Err(SimError::DimensionMismatch("spectrograms have different grids".into()));
    }
    let mut sum = T::zero();
    let mut n = 0usize;
    for (x, y) in a.response.iter().flatten().zip(b.response.iter().flatten()) {
        sum += (*x - *y) * (*x - *y);
        n += 1;
    }
    Ok((sum / T::from_usize(n.max(1)).expect("count")).sqrt())
}

/// RMS difference between a spectrogram and its `phi -> 2pi - phi`
/// reflection, relative to the peak response. The grid must be closed under
/// the reflection.
pub fn mirror_asymmetry<T: Real>(sg: &EitSpectrogram<T>) -> Result<T, SimError> {
    let tol = T::lit(1e-9);
    let mut sum = T::zero();
    let mut n = 0usize;
    for (k, &phi) in sg.phi_grid.iter().enumerate() {
        let mirror = T::two_pi() - phi;
        let j = sg
            .phi_grid
            .iter()
            .position(|&p| angle_distance(p, mirror) < tol)
            .ok_or_else(|| SimError::InvalidParameter(format!("grid lacks the mirror image of phi = {phi}")))?;
        for (x, y) in sg.response[k].iter().zip(&sg.response[j]) {
            sum += (*x - *y) * (*x - *y);
            n += 1;
        }
    }
    let peak = sg.peak_response();
    if !(peak > T::zero()) {
        return Ok(T::zero());
    }
    Ok((sum / T::from_usize(n.max(1)).expect("count")).sqrt() / peak)
}

/// A dressed Rydberg state (energy in the same units as `omega_rf`) and its
/// weak-probe optical line strength.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineStrength<T> {
    pub energy: T,
    pub strength: T,
}

/// Perturbative line strengths of the dressed Rydberg states: squared
/// coupling-laser matrix element from the probe-bright intermediate state,
/// summed over both ground sublevels. The third level, if any, is ignored.
pub fn line_strengths<T: Real>(
    scheme: &LevelScheme<T>,
    params: &SimParams<T>,
    sop: &RfSop<T>,
) -> Result<Vec<LineStrength<T>>, SimError> {
    let mut two_level = scheme.clone();
    two_level.third = None;
    let mut out: Option<Vec<LineStrength<T>>> = None;
    for m_g in [HalfInt::from_twice(-1), HalfInt::HALF] {
        let b = HamiltonianBuilder::new(&two_level, params, m_g)?;
        let idx: Vec<usize> = (0..b.dim()).filter(|&a| matches!(b.states()[a].kind, StateKind::Rydberg(_))).collect();
        let inter: Vec<usize> = (0..b.dim()).filter(|&a| b.states()[a].kind == StateKind::Intermediate).collect();
        let h = b.hamiltonian_with(sop, T::zero(), T::zero());
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| h[(idx[r], idx[c])]);
        let eig = block.symmetric_eigen();

        let w = b.probe_weights();
        let norm = inter.iter().map(|&a| w[a].norm_sqr()).fold(T::zero(), |x, y| x + y).sqrt();
        let entry = out.get_or_insert_with(|| {
            eig.eigenvalues.iter().map(|&e| LineStrength { energy: e, strength: T::zero() }).collect()
        });
        if !(norm > T::zero()) {
            continue;
        }
        let cp = b.coupling_pattern();
        let driven: Vec<C<T>> = idx
            .iter()
            .map(|&r| inter.iter().fold(C::new(T::zero(), T::zero()), |acc, &i| acc + cp[(r, i)] * w[i] / norm))
            .collect();
        for (k, e) in entry.iter_mut().enumerate() {
            let u = eig.eigenvectors.column(k);
            let amp = u.iter().zip(&driven).fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
            e.strength += amp.norm_sqr();
        }
    }
    let mut v = out.unwrap_or_default();
    v.sort_by(|a, b| a.energy.partial_cmp(&b.energy).expect("finite energies"));
    Ok(v)
}

/// Fraction of total line strength carried by states with
/// `|energy| <= rel_tol * max |energy|`.
pub fn central_line_share<T: Real>(lines: &[LineStrength<T>], rel_tol: T) -> T {
    let scale = lines.iter().map(|l| l.energy.abs()).fold(T::zero(), |a, b| a.max(b));
    let total = lines.iter().map(|l| l.strength).fold(T::zero(), |a, b| a + b);
    if !(total > T::zero()) {
        return T::zero();
    }
    let central =
        lines.iter().filter(|l| l.energy.abs() <= rel_tol * scale).map(|l| l.strength).fold(T::zero(), |a, b| a + b);
    central / total
}
