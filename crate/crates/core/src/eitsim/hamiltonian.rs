use nalgebra::DMatrix;
use num_complex::Complex;

use super::lindblad::Jump;
use super::{LevelScheme, SimParams};
use crate::angular::{dipole_element, FineLevel, HalfInt};
use crate::dressing::Manifold;
use crate::error::SimError;
use crate::scalar::Real;
use crate::sop::{spherical_components, RfSop, SphericalComponents};

type C<T> = Complex<T>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    Ground,
    Intermediate,
    Rydberg(Manifold),
    Third,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeState {
    pub kind: StateKind,
    pub m: HalfInt,
}

/// Field-independent pieces of the Hamiltonian for one ground sublevel.
#[derive(Clone, Debug)]
pub struct HamiltonianBuilder<T: Real> {
    states: Vec<SchemeState>,
    /// `sum_q e_q <i_m| r_q |g>` for each state (zero off the intermediate level).
    probe_weights: Vec<C<T>>,
    /// `sum_q e_q <t| r_q |i_m>` (rows: laser-coupled Rydberg states).
    coupling: DMatrix<C<T>>,
    /// `<r| r_q |r1 m>` for `q = +1, -1` (rows: `r2` and third-level states).
    rf_plus: DMatrix<T>,
    rf_minus: DMatrix<T>,
    jumps: Vec<Jump<T>>,
    omega_probe: T,
    omega_coupling: T,
    omega_rf: T,
    delta_probe: T,
    delta_third: T,
}

fn components<T: Real>(pol: &nalgebra::Vector3<C<T>>) -> Result<SphericalComponents<T>, SimError> {
    Ok(spherical_components(pol, &nalgebra::Vector3::z())?)
}

/// Hamiltonian, jumps, and probe weights of the probe-only subsystem.
pub type ProbeOnly<T> = (DMatrix<C<T>>, Vec<Jump<T>>, Vec<C<T>>);

impl<T: Real> HamiltonianBuilder<T> {
    pub fn new(scheme: &LevelScheme<T>, params: &SimParams<T>, m_g: HalfInt) -> Result<Self, SimError> {
        scheme.validate()?;
        params.validate()?;
        let ground = scheme.ground_level();
        if !ground.j.same_parity(m_g) || m_g.abs() > ground.j {
            return Err(SimError::InvalidParameter(format!("ground projection {m_g} is not valid for J = 1/2")));
        }
        let inter = scheme.intermediate_level()?;
        let (r1, r2) = scheme.cls.levels();
        let target = scheme.target_manifold()?;
        let third = scheme.third_level()?;

        let mut states = vec![SchemeState { kind: StateKind::Ground, m: m_g }];
        let mut levels: Vec<Option<FineLevel>> = vec![Some(ground)];
        for m in inter.j.projections().rev() {
            states.push(SchemeState { kind: StateKind::Intermediate, m });
            levels.push(Some(inter));
        }
        for b in scheme.cls.basis() {
            states.push(SchemeState { kind: StateKind::Rydberg(b.manifold), m: b.m });
            levels.push(Some(if b.manifold == Manifold::R1 { r1 } else { r2 }));
        }
        if let Some(l3) = third {
            for m in l3.j.projections().rev() {
                states.push(SchemeState { kind: StateKind::Third, m });
                levels.push(Some(l3));
            }
        }
        let n = states.len();
        let level = |k: usize| levels[k].expect("every state has a level");

        let cp = components(&params.optics.probe.polarization)?;
        let cc = components(&params.optics.coupling.polarization)?;
        let zero = C::new(T::zero(), T::zero());

        let project = |comps: &SphericalComponents<T>, a: usize, b: usize| -> Result<C<T>, SimError> {
            let mut v = zero;
            for q in -1..=1 {
                let c = comps.get(q);
                if c != zero {
                    let d: T = dipole_element(level(a), states[a].m, level(b), states[b].m, q)?;
                    v += c * d;
                }
            }
            Ok(v)
        };

        let mut probe_weights = vec![zero; n];
        let mut coupling = DMatrix::from_element(n, n, zero);
        let mut rf_plus = DMatrix::zeros(n, n);
        let mut rf_minus = DMatrix::zeros(n, n);
        for a in 0..n {
            match states[a].kind {
                StateKind::Intermediate => probe_weights[a] = project(&cp, a, 0)?,
                StateKind::Rydberg(m) if m == target => {
                    for b in (0..n).filter(|&b| states[b].kind == StateKind::Intermediate) {
                        coupling[(a, b)] = project(&cc, a, b)?;
                    }
                }
                StateKind::Third => {
                    for b in (0..n).filter(|&b| states[b].kind == StateKind::Intermediate) {
                        coupling[(a, b)] = project(&cc, a, b)?;
                    }
                }
                _ => {}
            }
            let rf_row = matches!(states[a].kind, StateKind::Rydberg(Manifold::R2) | StateKind::Third);
            if rf_row {
                for b in (0..n).filter(|&b| states[b].kind == StateKind::Rydberg(Manifold::R1)) {
                    rf_plus[(a, b)] = dipole_element(level(a), states[a].m, level(b), states[b].m, 1)?;
                    rf_minus[(a, b)] = dipole_element(level(a), states[a].m, level(b), states[b].m, -1)?;
                }
            }
        }

        let mut jumps = Vec::new();
        for (a, s) in states.iter().enumerate() {
            let rate = match s.kind {
                StateKind::Ground => continue,
                StateKind::Intermediate => params.gamma_i,
                _ => params.gamma_r,
            };
            if rate > T::zero() {
                jumps.push(Jump { from: a, to: 0, rate });
            }
        }

        Ok(HamiltonianBuilder {
            states,
            probe_weights,
            coupling,
            rf_plus,
            rf_minus,
            jumps,
            omega_probe: params.omega_probe,
            omega_coupling: params.omega_coupling,
            omega_rf: params.omega_rf,
            delta_probe: params.delta_probe,
            delta_third: scheme.third.map_or(T::zero(), |t| t.delta),
        })
    }

    pub fn states(&self) -> &[SchemeState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn jumps(&self) -> &[Jump<T>] {
        &self.jumps
    }

    pub fn probe_weights(&self) -> &[C<T>] {
        &self.probe_weights
    }

    pub fn coupling_pattern(&self) -> &DMatrix<C<T>> {
        &self.coupling
    }

    /// Rotating-frame Hamiltonian at coupling detuning `delta_c`.
    pub fn hamiltonian(&self, sop: &RfSop<T>, delta_c: T) -> DMatrix<C<T>> {
        self.hamiltonian_with(sop, delta_c, self.omega_coupling)
    }

    pub fn hamiltonian_with(&self, sop: &RfSop<T>, delta_c: T, omega_coupling: T) -> DMatrix<C<T>> {
        let n = self.dim();
        let zero = C::new(T::zero(), T::zero());
        let mut h = DMatrix::from_element(n, n, zero);
        let half = T::lit(0.5);
        let rydberg = -(self.delta_probe + delta_c);
        for (a, s) in self.states.iter().enumerate() {
            let d = match s.kind {
                StateKind::Ground => T::zero(),
                StateKind::Intermediate => -self.delta_probe,
                StateKind::Rydberg(_) => rydberg,
                StateKind::Third => rydberg + self.delta_third,
            };
            h[(a, a)] = C::new(d, T::zero());
        }
        let rf_scale = self.omega_rf * T::lit(2.0).sqrt();
        let (ap, am) = (sop.amp_plus() * rf_scale, sop.amp_minus() * rf_scale);
        for a in 0..n {
            for b in 0..a {
                let mut v = zero;
                if b == 0 {
                    v += self.probe_weights[a] * (self.omega_probe * half);
                }
                v += self.coupling[(a, b)] * (omega_coupling * half);
                v += ap * self.rf_plus[(a, b)] + am * self.rf_minus[(a, b)];
                if v != zero {
                    h[(a, b)] = v;
                    h[(b, a)] = v.conj();
                }
            }
        }
        h
    }

    /// Probe absorption `-Im sum_m conj(w_m) rho_{i_m, g}`.
    pub fn absorption(&self, rho: &DMatrix<C<T>>) -> T {
        let mut acc = C::new(T::zero(), T::zero());
        for (a, w) in self.probe_weights.iter().enumerate() {
            if self.states[a].kind == StateKind::Intermediate {
                acc += w.conj() * rho[(a, 0)];
            }
        }
        -acc.im
    }

    /// Hamiltonian and jumps restricted to ground plus intermediate states
    /// (the exact problem when the coupling laser is off), with the probe weights.
    pub fn probe_only(&self) -> ProbeOnly<T> {
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&a| matches!(self.states[a].kind, StateKind::Ground | StateKind::Intermediate))
            .collect();
        let n = keep.len();
        let half = T::lit(0.5);
        let mut h = DMatrix::from_element(n, n, C::new(T::zero(), T::zero()));
        for (x, &a) in keep.iter().enumerate().skip(1) {
            h[(x, x)] = C::new(-self.delta_probe, T::zero());
            let v = self.probe_weights[a] * (self.omega_probe * half);
            h[(x, 0)] = v;
            h[(0, x)] = v.conj();
        }
        let jumps = self
            .jumps
            .iter()
            .filter_map(|j| keep.iter().position(|&a| a == j.from).map(|x| Jump { from: x, to: 0, rate: j.rate }))
            .collect();
        let weights = keep.iter().map(|&a| self.probe_weights[a]).collect();
        (h, jumps, weights)
    }
}

/// Hamiltonian for ground sublevel `m_g` at phase angle `phi` and coupling
/// detuning `delta_c`.
pub fn build_hamiltonian<T: Real>(
    scheme: &LevelScheme<T>,
    params: &SimParams<T>,
    phi: T,
    delta_c: T,
    m_g: HalfInt,
) -> Result<DMatrix<C<T>>, SimError> {
    let b = HamiltonianBuilder::new(scheme, params, m_g)?;
    Ok(b.hamiltonian(&RfSop::from_phi(phi), delta_c))
}
