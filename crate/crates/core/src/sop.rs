//! RF state of polarization, Stokes vectors, spherical-basis decomposition,
//! and the optical-beam geometry used by the EIT simulator.
//!
//! Conventions:
//! * Spherical unit vectors `e_{+1} = -(x + i y)/sqrt2`, `e_0 = z`,
//!   `e_{-1} = (x - i y)/sqrt2`, with `z` the RF propagation axis and the
//!   atomic quantization axis.
//! * The RF field on the meridian is `u1 + exp(i phi) u2` with
//!   `u1,2 = (x -+ y)/sqrt2`, so `phi = 0` is linear along `x`.
//! * Stokes: `x` is *vertical* and `y` *horizontal*; `s1 = +1` is linear
//!   horizontal and `s3 = +1` is the pure `e_{+1}` helicity, labelled
//!   left-circular. This reproduces the cardinal sequence
//!   LVP (phi=0) -> LCP (pi/2) -> LHP (pi) -> RCP (3pi/2).

use nalgebra::Vector3;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::SopError;
use crate::scalar::{wrap_angle, Real};

type C<T> = Complex<T>;

fn c<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

/// Polarization state of the RF field as spherical-basis amplitudes.
///
/// `amp_plus` and `amp_minus` are the coefficients of `e_{+1}` and `e_{-1}`,
/// normalized so that `|amp_plus|^2 + |amp_minus|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RfSop<T: Real> {
    phi: Option<T>,
    amp_plus: C<T>,
    amp_minus: C<T>,
}

impl<T: Real> RfSop<T> {
    /// Meridian state for phase angle `phi` (reduced into `[0, 2pi)`).
    ///
    /// The amplitudes are `-(cos(phi/2) + sin(phi/2))/sqrt2` and
    /// `(cos(phi/2) - sin(phi/2))/sqrt2`.
    pub fn from_phi(phi: T) -> Self {
        let phi = wrap_angle(phi);
        let half = phi / T::lit(2.0);
        let (s, co) = (half.sin(), half.cos());
        let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        RfSop { phi: Some(phi), amp_plus: c(-(co + s) * r), amp_minus: c((co - s) * r) }
    }

    /// Arbitrary (possibly off-meridian) state; the pair is normalized.
    pub fn from_amplitudes(amp_plus: C<T>, amp_minus: C<T>) -> Result<Self, SopError> {
        let n2 = amp_plus.norm_sqr() + amp_minus.norm_sqr();
        if !n2.is_finite() {
            return Err(SopError::NonFinite("spherical amplitudes"));
        }
        if n2 <= T::epsilon() {
            return Err(SopError::ZeroNorm("spherical amplitude pair"));
        }
        let n = n2.sqrt();
        Ok(RfSop { phi: None, amp_plus: amp_plus / n, amp_minus: amp_minus / n })
    }

    /// The phase angle this state was built from, if any.
    pub fn phi(&self) -> Option<T> {
        self.phi
    }

    pub fn amp_plus(&self) -> C<T> {
        self.amp_plus
    }

    pub fn amp_minus(&self) -> C<T> {
        self.amp_minus
    }

    /// Coefficient of `e_q`; zero for `q = 0` (transverse field).
    pub fn amplitude(&self, q: i32) -> C<T> {
        match q {
            1 => self.amp_plus,
            -1 => self.amp_minus,
            _ => C::new(T::zero(), T::zero()),
        }
    }

    /// Lab-frame Jones vector `(E_x, E_y, E_z)`.
    pub fn cartesian(&self) -> Vector3<C<T>> {
        let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        let i = C::new(T::zero(), T::one());
        let ex = (self.amp_minus - self.amp_plus) * r;
        let ey = -(self.amp_plus + self.amp_minus) * i * r;
        Vector3::new(ex, ey, c(T::zero()))
    }

    pub fn stokes(&self) -> StokesVector<T> {
        let e = self.cartesian();
        let (ev, eh) = (e[0], e[1]);
        let cross = eh.conj() * ev;
        StokesVector { s1: eh.norm_sqr() - ev.norm_sqr(), s2: T::lit(2.0) * cross.re, s3: -T::lit(2.0) * cross.im }
    }

    /// The opposite-helicity partner (`phi -> 2pi - phi` on the meridian).
    pub fn helicity_mirror(&self) -> Self {
        match self.phi {
            Some(phi) => RfSop::from_phi(T::two_pi() - phi),
            None => RfSop { phi: None, amp_plus: self.amp_minus, amp_minus: self.amp_plus },
        }
    }
}

/// Meridian state for `phi`.
pub fn sop_from_phi<T: Real>(phi: T) -> RfSop<T> {
    RfSop::from_phi(phi)
}

/// Normalized Stokes vector `(s1, s2, s3)` with `s0 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesVector<T> {
    pub s1: T,
    pub s2: T,
    pub s3: T,
}

impl<T: Real> StokesVector<T> {
    pub fn degree_of_polarization(&self) -> T {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }
}

/// Stokes vector on the meridian traced by `phi`: `(-cos phi, 0, sin phi)`.
pub fn stokes_from_phi<T: Real>(phi: T) -> StokesVector<T> {
    StokesVector { s1: -phi.cos(), s2: T::zero(), s3: phi.sin() }
}

/// Components of a polarization vector on `e_{-1}, e_0, e_{+1}` relative to a
/// quantization axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalComponents<T: Real> {
    pub minus: C<T>,
    pub zero: C<T>,
    pub plus: C<T>,
}

impl<T: Real> SphericalComponents<T> {
    pub fn get(&self, q: i32) -> C<T> {
        match q {
            -1 => self.minus,
            0 => self.zero,
            1 => self.plus,
            _ => C::new(T::zero(), T::zero()),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.minus.norm_sqr() + self.zero.norm_sqr() + self.plus.norm_sqr()
    }
}

/// Right-handed frame `(x', y', z')` with `z'` along `axis`. `x'` is the lab
/// `x` projected off the axis, or the lab `y` when the axis is along `x`.
pub fn quantization_frame<T: Real>(axis: &Vector3<T>) -> Result<[Vector3<T>; 3], SopError> {
    let n = axis.norm();
    if !n.is_finite() {
        return Err(SopError::NonFinite("quantization axis"));
    }
    if n <= T::epsilon() {
        return Err(SopError::ZeroNorm("quantization axis"));
    }
    let z = axis / n;
    let project = |v: Vector3<T>| v - z * z.dot(&v);
    let mut x = project(Vector3::x());
    if x.norm() < T::lit(1e-9) {
        x = project(Vector3::y());
    }
    let x = x.normalize();
    let y = z.cross(&x);
    Ok([x, y, z])
}

/// Decomposes `pol` onto the spherical basis defined by `axis`:
/// `c_q = e_q^* . pol`.
pub fn spherical_components<T: Real>(
    pol: &Vector3<C<T>>,
    axis: &Vector3<T>,
) -> Result<SphericalComponents<T>, SopError> {
    let norm = pol.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
    if !norm.is_finite() {
        return Err(SopError::NonFinite("polarization"));
    }
    if norm <= T::epsilon() {
        return Err(SopError::ZeroNorm("polarization"));
    }
    let [x, y, z] = quantization_frame(axis)?;
    let along = |u: &Vector3<T>| pol[0] * u[0] + pol[1] * u[1] + pol[2] * u[2];
    let (px, py, pz) = (along(&x), along(&y), along(&z));
    let i = C::new(T::zero(), T::one());
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    Ok(SphericalComponents { minus: (px + i * py) * r, zero: pz, plus: -(px - i * py) * r })
}

/// Rebuilds a lab-frame vector from spherical components about `axis`.
pub fn from_spherical<T: Real>(comps: &SphericalComponents<T>, axis: &Vector3<T>) -> Result<Vector3<C<T>>, SopError> {
    let [x, y, z] = quantization_frame(axis)?;
    let i = C::new(T::zero(), T::one());
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    // e_{+1} = -(x + i y)/sqrt2, e_{-1} = (x - i y)/sqrt2
    let px = (comps.minus - comps.plus) * r;
    let py = -(comps.plus + comps.minus) * i * r;
    let pz = comps.zero;
    Ok(Vector3::from_fn(|k, _| px * x[k] + py * y[k] + pz * z[k]))
}

/// One laser beam: propagation direction and Jones vector (lab frame).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Beam<T: Real> {
    pub direction: Vector3<T>,
    pub polarization: Vector3<C<T>>,
}

/// Named optical geometries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpticsPreset {
    /// Both beams linear along `x`, counter-propagating along `y`.
    Standard,
    /// Beams counter-propagating along `(y - z)/sqrt2`, circularly polarized.
    RotatedCircular,
}

impl std::str::FromStr for OpticsPreset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "standard" => Ok(OpticsPreset::Standard),
            "rotated_circular" => Ok(OpticsPreset::RotatedCircular),
            other => Err(format!("unknown optics preset {other:?} (expected standard or rotated-circular)")),
        }
    }
}

/// Probe and coupling beam geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpticalConfig<T: Real> {
    pub probe: Beam<T>,
    pub coupling: Beam<T>,
}

impl<T: Real> OpticalConfig<T> {
    pub fn preset(preset: OpticsPreset) -> Self {
        match preset {
            OpticsPreset::Standard => Self::standard(),
            OpticsPreset::RotatedCircular => Self::rotated_circular(),
        }
    }

    pub fn standard() -> Self {
        let x = Vector3::new(c(T::one()), c(T::zero()), c(T::zero()));
        OpticalConfig {
            probe: Beam { direction: Vector3::y(), polarization: x },
            coupling: Beam { direction: -Vector3::<T>::y(), polarization: x },
        }
    }

    /// Both beams share the lab-frame Jones vector `(x + i k_p x x)/sqrt2`,
    /// with `k_p = (y - z)/sqrt2` the probe direction.
    pub fn rotated_circular() -> Self {
        let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        let k = Vector3::new(T::zero(), r, -r);
        let x = Vector3::<T>::x();
        let e2 = k.cross(&x);
        let i = C::new(T::zero(), T::one());
        let pol = Vector3::from_fn(|n, _| (c(x[n]) + i * e2[n]) * r);
        OpticalConfig {
            probe: Beam { direction: k, polarization: pol },
            coupling: Beam { direction: -k, polarization: pol },
        }
    }

    /// Checks unit norms, transversality, and counter-propagation.
    pub fn validate(&self) -> Result<(), SopError> {
        let tol = T::lit(1e-6);
        for (name, beam) in [("probe", &self.probe), ("coupling", &self.coupling)] {
            let dn = beam.direction.norm();
            if !dn.is_finite() {
                return Err(SopError::NonFinite(name));
            }
            if (dn - T::one()).abs() > tol {
                return Err(SopError::NotNormalized { what: name, norm: dn.as_f64() });
            }
            let pn = beam.polarization.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
            if (pn - T::one()).abs() > tol {
                return Err(SopError::NotNormalized { what: name, norm: pn.as_f64() });
            }
            let dot = beam.polarization[0] * beam.direction[0]
                + beam.polarization[1] * beam.direction[1]
                + beam.polarization[2] * beam.direction[2];
            if dot.norm_sqr().sqrt() > tol {
                return Err(SopError::NotTransverse(name));
            }
        }
        if (self.probe.direction.dot(&self.coupling.direction) + T::one()).abs() > tol {
            return Err(SopError::NotCounterPropagating);
        }
        Ok(())
    }
}
