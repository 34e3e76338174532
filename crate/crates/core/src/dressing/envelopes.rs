use serde::{Deserialize, Serialize};

use super::spectrum::EigenSpectrum;
use super::TransitionClass;
use crate::scalar::Real;

/// Outer and inner eigenvalue envelopes at one phase angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePair<T> {
    pub outer_plus: T,
    pub outer_minus: T,
    pub inner_plus: T,
    pub inner_minus: T,
}

impl<T: Real> EnvelopePair<T> {
    fn symmetric(outer: T, inner: T) -> Self {
        EnvelopePair { outer_plus: outer, outer_minus: -outer, inner_plus: inner, inner_minus: -inner }
    }

    /// Outer span over inner span.
    pub fn outer_over_inner(&self) -> T {
        (self.outer_plus - self.outer_minus) / (self.inner_plus - self.inner_minus)
    }

    /// Inner span over outer span.
    pub fn inner_over_outer(&self) -> T {
        (self.inner_plus - self.inner_minus) / (self.outer_plus - self.outer_minus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Exact,
    Approx,
}

impl std::str::FromStr for EnvelopeKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(EnvelopeKind::Exact),
            "approx" => Ok(EnvelopeKind::Approx),
            other => Err(format!("unknown envelope kind {other:?} (expected exact or approx)")),
        }
    }
}

impl std::fmt::Display for EnvelopeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EnvelopeKind::Exact => "exact",
            EnvelopeKind::Approx => "approx",
        })
    }
}

impl EnvelopeKind {
    pub fn eval<T: Real>(self, phi: T) -> EnvelopePair<T> {
        match self {
            EnvelopeKind::Exact => envelopes_exact(phi),
            EnvelopeKind::Approx => envelopes_approx(phi),
        }
    }
}

/// Exact envelopes of the `3/2 <-> 5/2` manifold.
pub fn envelopes_exact<T: Real>(phi: T) -> EnvelopePair<T> {
    let s = phi.sin().abs();
    let l = T::lit;
    let fifth = l(0.2);
    let outer = fifth * (l(10.0) + l(3.0) * s + (l(33.0) * s * s + l(12.0) * s + l(4.0)).sqrt()).sqrt();
    // The radicand stays >= 2 on the domain; the clamp only guards NaN.
    let inner_sq = l(10.0) - l(3.0) * s - (l(33.0) * s * s - l(12.0) * s + l(4.0)).sqrt();
    let inner = fifth * inner_sq.max(T::zero()).sqrt();
    EnvelopePair::symmetric(outer, inner)
}

/// Approximate envelopes of the `3/2 <-> 5/2` manifold.
pub fn envelopes_approx<T: Real>(phi: T) -> EnvelopePair<T> {
    let s = phi.sin().abs();
    let l = T::lit;
    let (r2, r3, r5) = (l(2.0).sqrt(), l(3.0).sqrt(), l(5.0).sqrt());
    let outer = l(2.0) * r3 / l(5.0) + l(2.0) * (r5 - r3) / l(5.0) * s;
    let inner = r2 / l(5.0) * (l(2.0) - s * s);
    EnvelopePair::symmetric(outer, inner)
}

/// Envelopes read off a numeric spectrum: the eigenvalues pinned at zero by
/// the rank deficit are dropped, and the outer and inner values are the
/// largest and smallest of the upper half of what remains.
pub fn numeric_envelopes<T: Real>(cls: TransitionClass, spectrum: &EigenSpectrum<T>) -> EnvelopePair<T> {
    let mut by_size: Vec<T> = spectrum.eigenvalues.clone();
    by_size.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).expect("finite eigenvalues"));
    let mut rest: Vec<T> = by_size.split_off(cls.structural_zeros());
    rest.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let n = rest.len();
    let lower = &rest[..n / 2];
    let upper = &rest[n / 2..];
    EnvelopePair {
        outer_plus: upper[upper.len() - 1],
        inner_plus: upper[0],
        outer_minus: lower[0],
        inner_minus: lower[lower.len() - 1],
    }
}
