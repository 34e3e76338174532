//! Envelope ratios, phase-angle inversion, and ambiguity pruning.
//!
//! Two ratio conventions coexist and are kept as distinct types:
//! [`HalfZeroRatio`] is inner span over outer span (range `[0, 1]`), and
//! [`FiveHalfRatio`] is outer span over inner span (range `[sqrt(3/2), sqrt(10)]`).

mod calibrate;
mod peaks;
mod roundtrip;

use serde::{Deserialize, Serialize};

use crate::dressing::envelopes_exact;
use crate::error::InversionError;
use crate::scalar::{angle_distance, wrap_angle, Real};
use crate::sop::OpticsPreset;

pub use calibrate::{calibrate, Calibration, CentralModel, EitCentralModel, LineStrengthModel};
pub use peaks::{
    central_share, extract_peaks, find_peaks, Peak, PeakLayout, PeakOptions, PeakSet, SampledSpectrum, MIN_SAMPLES,
};
pub use roundtrip::{
    invert_spectra, round_trip, ConfigOutcome, ForwardModel, Measured, RoundTripOptions, RoundTripReport,
    SpectraInversion,
};

/// Candidates closer than this (radians, on the circle) are the same angle.
pub const DEDUP_TOL: f64 = 1e-9;

/// Ratio `(inner span) / (outer span)` of a `1/2^0` spectrum.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfZeroRatio<T>(pub T);

/// Ratio `(outer span) / (inner span)` of a `3/2^+-` spectrum.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiveHalfRatio<T>(pub T);

impl<T: Real> FiveHalfRatio<T> {
    pub fn lower_bound() -> T {
        T::lit(1.5).sqrt()
    }

    pub fn upper_bound() -> T {
        T::lit(10.0).sqrt()
    }
}

fn spans<T: Real>(p: &PeakSet<T>) -> (T, T) {
    (p.lambda_o_plus - p.lambda_o_minus, p.lambda_i_plus - p.lambda_i_minus)
}

pub fn ratio_half<T: Real>(peaks: &PeakSet<T>) -> Result<HalfZeroRatio<T>, InversionError> {
    let (outer, inner) = spans(peaks);
    if !(outer > T::zero()) || !outer.is_finite() {
        return Err(InversionError::DegenerateOuter);
    }
    Ok(HalfZeroRatio(inner / outer))
}

pub fn ratio_five_half<T: Real>(peaks: &PeakSet<T>) -> Result<FiveHalfRatio<T>, InversionError> {
    let (outer, inner) = spans(peaks);
    if !(outer > T::zero()) {
        return Err(InversionError::DegenerateOuter);
    }
    if !(inner > outer * T::lit(1e-12)) {
        return Err(InversionError::DegenerateInner);
    }
    Ok(FiveHalfRatio(outer / inner))
}

/// `phi~ = 2 (pi/4 - atan R)`, decreasing from `pi/2` at `R = 0` to `0` at `R = 1`.
pub fn phase_half<T: Real>(r: HalfZeroRatio<T>) -> T {
    T::lit(2.0) * (T::frac_pi_4() - r.0.atan())
}

/// `phi_p(R)`, increasing from `0` at `sqrt(3/2)` to `pi/2` at `sqrt(10)`.
pub fn phase_five_half<T: Real>(r: FiveHalfRatio<T>) -> T {
    let r = r.0;
    let two = T::lit(2.0);
    let radicand = T::lit(4.0) * r * r - two * r * T::lit(6.0).sqrt() + T::lit(8.0) - two * T::lit(15.0).sqrt();
    let num = radicand.max(T::zero()).sqrt() - T::lit(5.0).sqrt() + T::lit(3.0).sqrt();
    let arg = num / (two.sqrt() * r);
    arg.max(-T::one()).min(T::one()).asin()
}

/// Numerical inverse of the exact envelope ratio on `[0, pi/2]` by bisection.
pub fn phase_five_half_exact<T: Real>(r: FiveHalfRatio<T>) -> T {
    let (mut lo, mut hi) = (T::zero(), T::frac_pi_2());
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if envelopes_exact(mid).outer_over_inner() < r.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// How a `3/2^+-` ratio is turned into the principal angle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiveHalfKernel {
    /// Closed form built on the approximate envelopes.
    #[default]
    ClosedForm,
    /// Bisection on the exact envelopes.
    ExactEnvelopes,
}

impl FiveHalfKernel {
    pub fn principal<T: Real>(self, r: FiveHalfRatio<T>) -> T {
        match self {
            FiveHalfKernel::ClosedForm => phase_five_half(r),
            FiveHalfKernel::ExactEnvelopes => phase_five_half_exact(r),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbiguityClass {
    Fourfold,
    Twofold,
    Unique,
}

impl AmbiguityClass {
    pub fn of_count(n: usize) -> Self {
        match n {
            0 | 1 => AmbiguityClass::Unique,
            2 | 3 => AmbiguityClass::Twofold,
            _ => AmbiguityClass::Fourfold,
        }
    }
}

/// Phase angles compatible with a measured ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCandidates<T> {
    /// Principal solution in `[0, pi/2]`.
    pub principal: T,
    /// `{p, pi - p, pi + p, 2pi - p}` wrapped to `[0, 2pi)`, deduplicated, ascending.
    pub candidates: Vec<T>,
    /// Subset surviving central-peak pruning.
    pub pruned: Vec<T>,
    pub ambiguity_class: AmbiguityClass,
    /// Set when the central-peak evidence fell inside the dead band; `pruned`
    /// then equals `candidates`.
    pub ambiguous_prominence: bool,
}

impl<T: Real> PhaseCandidates<T> {
    fn unpruned(principal: T) -> Self {
        let candidates = candidate_set(principal);
        PhaseCandidates {
            principal,
            ambiguity_class: AmbiguityClass::of_count(candidates.len()),
            pruned: candidates.clone(),
            candidates,
            ambiguous_prominence: false,
        }
    }

    /// Smallest circular distance from `phi` to a pruned candidate.
    pub fn distance_to(&self, phi: T) -> T {
        self.pruned.iter().map(|&c| angle_distance(c, phi)).fold(T::lit(f64::INFINITY), |a, b| a.min(b))
    }

    pub fn contains(&self, phi: T, tol: T) -> bool {
        self.distance_to(phi) <= tol
    }
}

/// The four mirror images of `principal`, deduplicated.
pub fn candidate_set<T: Real>(principal: T) -> Vec<T> {
    let pi = T::pi();
    let mut out: Vec<T> = Vec::with_capacity(4);
    for c in [principal, pi - principal, pi + principal, T::two_pi() - principal] {
        let c = wrap_angle(c);
        if out.iter().all(|&o| angle_distance(o, c) > T::lit(DEDUP_TOL)) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    out
}

fn check_range<T: Real>(r: T, lo: T, hi: T, tol: T) -> Result<T, InversionError> {
    if !r.is_finite() || r < lo - tol || r > hi + tol {
        return Err(InversionError::OutOfRange { value: r.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() });
    }
    Ok(r.max(lo).min(hi))
}

/// Inverts a `1/2^0` ratio; `tol` is the absolute slack allowed outside `[0, 1]`.
pub fn invert_half<T: Real>(r: HalfZeroRatio<T>, tol: T) -> Result<PhaseCandidates<T>, InversionError> {
    let r = check_range(r.0, T::zero(), T::one(), tol)?;
    Ok(PhaseCandidates::unpruned(phase_half(HalfZeroRatio(r))))
}

/// Measured central-peak strength and the threshold separating the two
/// candidate pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralEvidence<T> {
    pub prominence: T,
    pub threshold: T,
    pub dead_band: T,
}

/// Boundary slack when testing interval membership.
const INTERVAL_TOL: f64 = 1e-9;

/// True when `phi` lies in the interval kept for a strong central peak:
/// `[pi/2, 3pi/2]` for standard optics, `[0, pi]` for rotated circular optics.
pub fn in_high_interval<T: Real>(phi: T, preset: OpticsPreset) -> bool {
    let tol = T::lit(INTERVAL_TOL);
    let phi = wrap_angle(phi);
    let pi = T::pi();
    match preset {
        OpticsPreset::Standard => phi >= pi / T::lit(2.0) - tol && phi <= T::lit(1.5) * pi + tol,
        OpticsPreset::RotatedCircular => phi <= pi + tol || phi >= T::two_pi() - tol,
    }
}

/// True when `phi` lies in the (closed) complement kept for a weak central peak.
pub fn in_low_interval<T: Real>(phi: T, preset: OpticsPreset) -> bool {
    let tol = T::lit(INTERVAL_TOL);
    let phi = wrap_angle(phi);
    let pi = T::pi();
    match preset {
        OpticsPreset::Standard => phi <= pi / T::lit(2.0) + tol || phi >= T::lit(1.5) * pi - tol,
        OpticsPreset::RotatedCircular => phi >= pi - tol || phi <= tol,
    }
}

/// Inverts a `3/2^+-` ratio with the closed-form kernel and prunes the
/// candidates with central-peak evidence, if given. `tol` is the relative
/// slack allowed outside the ratio bounds.
pub fn invert_five_half<T: Real>(
    r: FiveHalfRatio<T>,
    evidence: Option<CentralEvidence<T>>,
    preset: OpticsPreset,
    tol: T,
) -> Result<PhaseCandidates<T>, InversionError> {
    invert_five_half_with(r, evidence, preset, tol, FiveHalfKernel::ClosedForm)
}

pub fn invert_five_half_with<T: Real>(
    r: FiveHalfRatio<T>,
    evidence: Option<CentralEvidence<T>>,
    preset: OpticsPreset,
    tol: T,
    kernel: FiveHalfKernel,
) -> Result<PhaseCandidates<T>, InversionError> {
    let lo = FiveHalfRatio::<T>::lower_bound();
    let hi = FiveHalfRatio::<T>::upper_bound();
    let r = check_range(r.0, lo, hi, tol * hi)?;
    let out = PhaseCandidates::unpruned(kernel.principal(FiveHalfRatio(r)));
    Ok(match evidence {
        Some(ev) => prune(&out, ev, preset),
        None => out,
    })
}

/// Prunes `set.pruned` with central-peak evidence: a strong peak keeps the
/// high interval of `preset`, a weak one its complement, and evidence inside
/// the dead band keeps everything and raises the flag.
pub fn prune<T: Real>(set: &PhaseCandidates<T>, ev: CentralEvidence<T>, preset: OpticsPreset) -> PhaseCandidates<T> {
    let mut out = set.clone();
    if (ev.prominence - ev.threshold).abs() < ev.dead_band {
        out.ambiguous_prominence = true;
    } else {
        let high = ev.prominence > ev.threshold;
        out.pruned.retain(|&c| if high { in_high_interval(c, preset) } else { in_low_interval(c, preset) });
        out.ambiguity_class = AmbiguityClass::of_count(out.pruned.len());
    }
    out
}

/// Intersection of the pruned sets; angles match within `tol` radians and
/// the first set's values are kept.
pub fn combine<T: Real>(sets: &[PhaseCandidates<T>], tol: T) -> Result<PhaseCandidates<T>, InversionError> {
    let (first, rest) = sets.split_first().ok_or(InversionError::Inconsistent)?;
    let pruned: Vec<T> = first.pruned.iter().copied().filter(|&c| rest.iter().all(|s| s.contains(c, tol))).collect();
    if pruned.is_empty() {
        return Err(InversionError::Inconsistent);
    }
    Ok(PhaseCandidates {
        principal: first.principal,
        candidates: first.candidates.clone(),
        ambiguity_class: AmbiguityClass::of_count(pruned.len()),
        pruned,
        ambiguous_prominence: sets.iter().any(|s| s.ambiguous_prominence),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dressing::{envelopes_approx, envelopes_exact};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn half_endpoints() {
        let c = invert_half(HalfZeroRatio(1.0), 0.0).unwrap();
        assert!(close(&c.candidates, &[0.0, PI]));
        assert_eq!(c.ambiguity_class, AmbiguityClass::Twofold);
        let c = invert_half(HalfZeroRatio(0.0), 0.0).unwrap();
        assert!(close(&c.candidates, &[FRAC_PI_2, 1.5 * PI]));
    }

    #[test]
    fn half_quarter_turn() {
        let r = (PI / 8.0).tan();
        let c = invert_half(HalfZeroRatio(r), 0.0).unwrap();
        assert!((c.principal - FRAC_PI_4).abs() < 1e-15);
        assert!(close(&c.candidates, &[FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4, 7.0 * FRAC_PI_4]));
        assert_eq!(c.ambiguity_class, AmbiguityClass::Fourfold);
    }

    #[test]
    fn half_range_checked() {
        assert!(invert_half(HalfZeroRatio(1.0 + 1e-7), 1e-6).is_ok());
        assert!(matches!(invert_half(HalfZeroRatio(1.1), 1e-6), Err(InversionError::OutOfRange { .. })));
        assert!(invert_half(HalfZeroRatio(-0.1), 1e-6).is_err());
        assert!(invert_half(HalfZeroRatio(f64::NAN), 1e-6).is_err());
    }

    #[test]
    fn five_half_endpoints() {
        let lo = FiveHalfRatio::<f64>::lower_bound();
        let hi = FiveHalfRatio::<f64>::upper_bound();
        assert!(phase_five_half(FiveHalfRatio(lo)).abs() < 1e-7);
        assert!((phase_five_half(FiveHalfRatio(hi)) - FRAC_PI_2).abs() < 1e-7);
        let e = envelopes_exact(FRAC_PI_4);
        let r = e.outer_over_inner();
        assert!(r > lo && r < hi);
    }

    #[test]
    fn five_half_pruning_examples() {
        let hi = FiveHalfRatio(10f64.sqrt());
        let strong = Some(CentralEvidence { prominence: 0.6, threshold: 0.3, dead_band: 0.01 });
        let c = invert_five_half(hi, strong, OpticsPreset::Standard, 1e-9).unwrap();
        assert!(close(&c.pruned, &[FRAC_PI_2, 1.5 * PI]));
        assert_eq!(c.ambiguity_class, AmbiguityClass::Twofold);
        let c = invert_five_half(hi, strong, OpticsPreset::RotatedCircular, 1e-9).unwrap();
        assert!(close(&c.pruned, &[FRAC_PI_2]));
        assert_eq!(c.ambiguity_class, AmbiguityClass::Unique);

        let weak = Some(CentralEvidence { prominence: 0.0, threshold: 0.3, dead_band: 0.01 });
        let c = invert_five_half(FiveHalfRatio(1.5f64.sqrt()), weak, OpticsPreset::Standard, 1e-9).unwrap();
        assert_eq!(c.pruned.len(), 1);
        assert!(c.pruned[0].abs() < 1e-7 || (c.pruned[0] - 2.0 * PI).abs() < 1e-7);
        assert_eq!(c.ambiguity_class, AmbiguityClass::Unique);
    }

    #[test]
    fn exact_kernel_inverts_exact_envelopes() {
        for k in 0..=90 {
            let phi = (k as f64).to_radians();
            let r = FiveHalfRatio(envelopes_exact(phi).outer_over_inner());
            // the ratio is stationary at the endpoints
            let tol = if k == 0 || k == 90 { 1e-7 } else { 1e-9 };
            assert!((phase_five_half_exact(r) - phi).abs() < tol, "{k}");
        }
    }

    #[test]
    fn dead_band_flags_without_pruning() {
        let r = FiveHalfRatio(envelopes_exact(1.0f64).outer_over_inner());
        let ev = Some(CentralEvidence { prominence: 0.31, threshold: 0.3, dead_band: 0.05 });
        let c = invert_five_half(r, ev, OpticsPreset::Standard, 1e-9).unwrap();
        assert!(c.ambiguous_prominence);
        assert_eq!(c.pruned, c.candidates);
        assert_eq!(c.ambiguity_class, AmbiguityClass::Fourfold);
    }

    #[test]
    fn combine_intersects() {
        let r = FiveHalfRatio(envelopes_approx(2.0 * PI / 3.0).outer_over_inner());
        let std = invert_five_half(
            r,
            Some(CentralEvidence { prominence: 1.0, threshold: 0.5, dead_band: 0.0 }),
            OpticsPreset::Standard,
            1e-9,
        )
        .unwrap();
        let rot = invert_five_half(
            r,
            Some(CentralEvidence { prominence: 1.0, threshold: 0.5, dead_band: 0.0 }),
            OpticsPreset::RotatedCircular,
            1e-9,
        )
        .unwrap();
        let both = combine(&[std, rot.clone()], 1e-6).unwrap();
        assert_eq!(both.ambiguity_class, AmbiguityClass::Unique);
        assert!((both.pruned[0] - 2.0 * PI / 3.0).abs() < 1e-9);

        let mut away = rot;
        away.pruned = vec![0.1];
        assert_eq!(combine(&[both, away], 1e-6), Err(InversionError::Inconsistent));
        assert_eq!(combine::<f64>(&[], 1e-6), Err(InversionError::Inconsistent));
    }

    #[test]
    fn degenerate_spans() {
        let mut p = PeakSet {
            positions: vec![],
            prominences: vec![],
            lambda_o_plus: 1.0,
            lambda_o_minus: -1.0,
            lambda_i_plus: 0.0,
            lambda_i_minus: 0.0,
            central_prominence: 0.0,
        };
        assert_eq!(ratio_half(&p).unwrap().0, 0.0);
        assert_eq!(ratio_five_half(&p), Err(InversionError::DegenerateInner));
        p.lambda_o_plus = -1.0;
        assert_eq!(ratio_half(&p), Err(InversionError::DegenerateOuter));
    }
}
