use serde::{Deserialize, Serialize};

use crate::dressing::{numeric_envelopes, EigenSpectrum, TransitionClass};
use crate::eitsim::LineStrength;
use crate::error::InversionError;
use crate::scalar::Real;

/// Amplitude sampled on a strictly increasing detuning grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSpectrum<T> {
    detuning: Vec<T>,
    amplitude: Vec<T>,
}

pub const MIN_SAMPLES: usize = 8;

impl<T: Real> SampledSpectrum<T> {
    pub fn new(detuning: Vec<T>, amplitude: Vec<T>) -> Result<Self, InversionError> {
        if detuning.len() != amplitude.len() {
            return Err(InversionError::LengthMismatch(detuning.len(), amplitude.len()));
        }
        if detuning.len() < MIN_SAMPLES {
            return Err(InversionError::TooFewSamples { need: MIN_SAMPLES, got: detuning.len() });
        }
        if detuning.iter().chain(&amplitude).any(|v| !v.is_finite()) {
            return Err(InversionError::NonFinite);
        }
        if detuning.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(InversionError::NonMonotonicGrid);
        }
        Ok(SampledSpectrum { detuning, amplitude })
    }

    pub fn detuning(&self) -> &[T] {
        &self.detuning
    }

    pub fn amplitude(&self) -> &[T] {
        &self.amplitude
    }

    pub fn max_amplitude(&self) -> T {
        self.amplitude.iter().copied().fold(T::zero(), |a, b| a.max(b))
    }
}

/// A local maximum with sub-sample position and topographic prominence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak<T> {
    pub position: T,
    pub height: T,
    pub prominence: T,
}

/// Vertex of the parabola through three points.
fn parabola_vertex<T: Real>(x: [T; 3], y: [T; 3]) -> (T, T) {
    let (x0, x1, x2) = (x[0], x[1], x[2]);
    let (y0, y1, y2) = (y[0], y[1], y[2]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a < T::zero()) {
        return (x1, y1);
    }
    let b = d01 - a * (x0 + x1);
    let xv = -b / (T::lit(2.0) * a);
    let xv = xv.max(x0).min(x2);
    let yv = y1 + (xv - x1) * (d01 + a * (xv - x0));
    (xv, yv.max(y1))
}

/// Local maxima with prominence at least `min_prominence`; maxima closer
/// than `merge_tol` are merged at their prominence-weighted centroid.
pub fn find_peaks<T: Real>(spec: &SampledSpectrum<T>, min_prominence: T, merge_tol: T) -> Vec<Peak<T>> {
    let (x, a) = (&spec.detuning, &spec.amplitude);
    let n = a.len();
    let mut raw: Vec<Peak<T>> = Vec::new();
    let mut k = 1;
    while k + 1 < n {
        if a[k] > a[k - 1] {
            // walk across a plateau
            let mut e = k;
            while e + 1 < n && a[e + 1] == a[k] {
                e += 1;
            }
            if e + 1 < n && a[e + 1] < a[k] {
                let mid = (k + e) / 2;
                let mut lo = a[k];
                let mut left = a[k];
                for j in (0..k).rev() {
                    if a[j] > a[k] {
                        break;
                    }
                    lo = lo.min(a[j]);
                    left = lo;
                }
                let mut right = a[k];
                lo = a[k];
                for &v in &a[e + 1..] {
                    if v > a[k] {
                        break;
                    }
                    lo = lo.min(v);
                    right = lo;
                }
                let prominence = a[k] - left.max(right);
                let (position, height) = if e == k {
                    parabola_vertex([x[k - 1], x[k], x[k + 1]], [a[k - 1], a[k], a[k + 1]])
                } else {
                    ((x[k] + x[e]) / T::lit(2.0), a[mid])
                };
                if prominence >= min_prominence && prominence > T::zero() {
                    raw.push(Peak { position, height, prominence });
                }
            }
            k = e + 1;
        } else {
            k += 1;
        }
    }
    merge_peaks(raw, merge_tol)
}

fn merge_peaks<T: Real>(peaks: Vec<Peak<T>>, merge_tol: T) -> Vec<Peak<T>> {
    let mut out: Vec<(Peak<T>, T)> = Vec::new();
    for p in peaks {
        match out.last_mut() {
            Some((last, wsum)) if p.position - last.position < merge_tol => {
                let w = *wsum + p.prominence;
                last.position = (last.position * *wsum + p.position * p.prominence) / w;
                last.height = last.height.max(p.height);
                last.prominence = last.prominence.max(p.prominence);
                *wsum = w;
            }
            _ => out.push((p, p.prominence)),
        }
    }
    out.into_iter().map(|(p, _)| p).collect()
}

/// How peaks map onto the outer and inner envelope pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakLayout {
    /// Four bands; two coincide at zero for circular SOPs, and the pairs
    /// merge for linear ones.
    HalfZero,
    /// A central line plus at least two lines on each side.
    FiveHalf,
}

impl PeakLayout {
    pub fn for_class(cls: TransitionClass) -> Result<Self, InversionError> {
        if cls == TransitionClass::HALF_ZERO {
            Ok(PeakLayout::HalfZero)
        } else if cls.is_invertible() {
            Ok(PeakLayout::FiveHalf)
        } else {
            Err(InversionError::NotInvertible { j: cls.j(), p: cls.p() })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakOptions<T> {
    pub min_prominence: T,
    pub merge_tol: T,
    /// Peaks closer than this to zero detuning count as central.
    pub center_tol: T,
}

impl<T: Real> PeakOptions<T> {
    /// Defaults for noise-free spectra: prominence floor at 1e-4 of the
    /// maximum, merge and centre tolerances at one grid step and a half.
    pub fn for_spectrum(spec: &SampledSpectrum<T>) -> Self {
        let x = spec.detuning();
        let step = (x[x.len() - 1] - x[0]) / T::from_usize(x.len() - 1).expect("grid size");
        PeakOptions {
            min_prominence: spec.max_amplitude() * T::lit(1e-4),
            merge_tol: step * T::lit(1.5),
            center_tol: step * T::lit(1.5),
        }
    }
}

/// Envelope positions read off a spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakSet<T> {
    pub positions: Vec<T>,
    pub prominences: Vec<T>,
    pub lambda_o_plus: T,
    pub lambda_o_minus: T,
    pub lambda_i_plus: T,
    pub lambda_i_minus: T,
    pub central_prominence: T,
}

impl<T: Real> PeakSet<T> {
    /// Central prominence over the summed prominence of all peaks.
    pub fn central_share(&self) -> T {
        let total = self.prominences.iter().copied().fold(T::zero(), |a, b| a + b);
        if total > T::zero() {
            self.central_prominence / total
        } else {
            T::zero()
        }
    }

    /// Exact envelopes of an eigenvalue spectrum, with each distinct
    /// eigenvalue weighted by the line strengths at that energy. `scale`
    /// converts eigenvalues to line energies.
    pub fn from_eigen_lines(
        cls: TransitionClass,
        spec: &EigenSpectrum<T>,
        lines: &[LineStrength<T>],
        scale: T,
    ) -> Self {
        let env = numeric_envelopes(cls, spec);
        let span = spec.eigenvalues.iter().map(|e| e.abs()).fold(T::zero(), |a, b| a.max(b));
        let tol = T::lit(1e-6) * span.max(T::lit(f64::MIN_POSITIVE));
        let positions: Vec<T> = spec.distinct.iter().map(|d| d.value).collect();
        let prominences: Vec<T> = positions
            .iter()
            .map(|&v| {
                lines
                    .iter()
                    .filter(|l| (l.energy / scale - v).abs() <= tol)
                    .map(|l| l.strength)
                    .fold(T::zero(), |a, b| a + b)
            })
            .collect();
        let central_prominence = positions
            .iter()
            .zip(&prominences)
            .filter(|(v, _)| v.abs() <= tol)
            .map(|(_, &p)| p)
            .fold(T::zero(), |a, b| a + b);
        PeakSet {
            positions,
            prominences,
            lambda_o_plus: env.outer_plus,
            lambda_o_minus: env.outer_minus,
            lambda_i_plus: env.inner_plus,
            lambda_i_minus: env.inner_minus,
            central_prominence,
        }
    }
}

/// Share of the summed prominence carried by a peak within `center_tol` of zero.
pub fn central_share<T: Real>(spec: &SampledSpectrum<T>, opts: &PeakOptions<T>) -> T {
    let peaks = find_peaks(spec, opts.min_prominence, opts.merge_tol);
    let total = peaks.iter().map(|p| p.prominence).fold(T::zero(), |a, b| a + b);
    let central = peaks
        .iter()
        .filter(|p| p.position.abs() <= opts.center_tol)
        .map(|p| p.prominence)
        .fold(T::zero(), |a, b| a.max(b));
    if total > T::zero() {
        central / total
    } else {
        T::zero()
    }
}

/// Finds peaks and assigns them to the outer and inner envelope pairs.
pub fn extract_peaks<T: Real>(
    spec: &SampledSpectrum<T>,
    layout: PeakLayout,
    opts: &PeakOptions<T>,
) -> Result<PeakSet<T>, InversionError> {
    let peaks = find_peaks(spec, opts.min_prominence, opts.merge_tol);
    let positions: Vec<T> = peaks.iter().map(|p| p.position).collect();
    let prominences: Vec<T> = peaks.iter().map(|p| p.prominence).collect();
    let central = peaks
        .iter()
        .filter(|p| p.position.abs() <= opts.center_tol)
        .map(|p| p.prominence)
        .fold(T::zero(), |a, b| a.max(b));
    let has_central = peaks.iter().any(|p| p.position.abs() <= opts.center_tol);
    let neg: Vec<T> = positions.iter().copied().filter(|&p| p < -opts.center_tol).collect();
    let pos: Vec<T> = positions.iter().copied().filter(|&p| p > opts.center_tol).collect();

    let found = peaks.len();
    let (o_minus, i_minus, i_plus, o_plus) = match layout {
        PeakLayout::HalfZero => match (neg.len(), pos.len(), has_central) {
            (1, 1, false) => (neg[0], neg[0], pos[0], pos[0]),
            (1, 1, true) => (neg[0], T::zero(), T::zero(), pos[0]),
            (a, b, _) if a >= 2 && b >= 2 => (neg[0], neg[a - 1], pos[0], pos[b - 1]),
            (a, b, _) if a + b + usize::from(has_central) < 4 && (a == 0 || b == 0 || a + b < 2) => {
                return Err(InversionError::FewerThanFourPeaks { found, need: 4 })
            }
            _ => return Err(InversionError::NonStraddling),
        },
        PeakLayout::FiveHalf => {
            if neg.len() < 2 || pos.len() < 2 {
                if neg.is_empty() != pos.is_empty() {
                    return Err(InversionError::NonStraddling);
                }
                return Err(InversionError::FewerThanFourPeaks { found, need: 4 });
            }
            (neg[0], neg[neg.len() - 1], pos[0], pos[pos.len() - 1])
        }
    };
    Ok(PeakSet {
        positions,
        prominences,
        lambda_o_plus: o_plus,
        lambda_o_minus: o_minus,
        lambda_i_plus: i_plus,
        lambda_i_minus: i_minus,
        central_prominence: central,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentzians(centers: &[f64], width: f64, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&x| centers.iter().map(|c| 1.0 / (1.0 + ((x - c) / width).powi(2))).sum()).collect()
    }

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn four_lorentzians_recovered() {
        let g = grid(-1.5, 1.5, 601);
        let truth = [-0.9, -0.3, 0.3, 0.9];
        let spec = SampledSpectrum::new(g.clone(), lorentzians(&truth, 0.03, &g)).unwrap();
        let ps = extract_peaks(&spec, PeakLayout::HalfZero, &PeakOptions::for_spectrum(&spec)).unwrap();
        for (got, want) in [ps.lambda_o_minus, ps.lambda_i_minus, ps.lambda_i_plus, ps.lambda_o_plus].iter().zip(truth)
        {
            assert!(((got - want) / want).abs() < 0.005, "{got} vs {want}");
        }
        assert_eq!(ps.central_prominence, 0.0);
    }

    #[test]
    fn two_peaks_collapse_pairs() {
        let g = grid(-1.5, 1.5, 301);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let spec = SampledSpectrum::new(g.clone(), lorentzians(&[-r, r], 0.03, &g)).unwrap();
        let ps = extract_peaks(&spec, PeakLayout::HalfZero, &PeakOptions::for_spectrum(&spec)).unwrap();
        assert_eq!(ps.lambda_i_plus, ps.lambda_o_plus);
        assert_eq!(ps.lambda_i_minus, ps.lambda_o_minus);
    }

    #[test]
    fn central_peak_maps_to_zero_inner_pair() {
        let g = grid(-1.5, 1.5, 301);
        let spec = SampledSpectrum::new(g.clone(), lorentzians(&[-1.0, 0.0, 1.0], 0.03, &g)).unwrap();
        let ps = extract_peaks(&spec, PeakLayout::HalfZero, &PeakOptions::for_spectrum(&spec)).unwrap();
        assert_eq!((ps.lambda_i_minus, ps.lambda_i_plus), (0.0, 0.0));
        assert!(ps.central_prominence > 0.5);
    }

    #[test]
    fn flat_spectrum_has_no_peaks() {
        let g = grid(-1.0, 1.0, 50);
        let spec = SampledSpectrum::new(g, vec![1.0; 50]).unwrap();
        let err = extract_peaks(
            &spec,
            PeakLayout::FiveHalf,
            &PeakOptions { min_prominence: 0.0, merge_tol: 0.01, center_tol: 0.01 },
        );
        assert_eq!(err, Err(InversionError::FewerThanFourPeaks { found: 0, need: 4 }));
    }

    #[test]
    fn one_sided_spectrum_does_not_straddle() {
        let g = grid(-1.5, 1.5, 301);
        let spec = SampledSpectrum::new(g.clone(), lorentzians(&[0.3, 0.9], 0.03, &g)).unwrap();
        let err = extract_peaks(&spec, PeakLayout::FiveHalf, &PeakOptions::for_spectrum(&spec));
        assert_eq!(err, Err(InversionError::NonStraddling));
    }

    #[test]
    fn close_maxima_merge() {
        let g = grid(-1.0, 1.0, 401);
        let spec = SampledSpectrum::new(g.clone(), lorentzians(&[-0.5, 0.095, 0.105, 0.5], 0.004, &g)).unwrap();
        let peaks = find_peaks(&spec, 0.1, 0.02);
        assert_eq!(peaks.len(), 3);
        assert!(peaks[1].position > 0.095 && peaks[1].position < 0.105);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(SampledSpectrum::new(vec![0.0; 3], vec![0.0; 3]), Err(InversionError::TooFewSamples { .. })));
        assert!(matches!(SampledSpectrum::new(vec![0.0; 9], vec![0.0; 8]), Err(InversionError::LengthMismatch(9, 8))));
        let g: Vec<f64> = (0..9).map(|k| k as f64).rev().collect();
        assert_eq!(SampledSpectrum::new(g, vec![0.0; 9]), Err(InversionError::NonMonotonicGrid));
        let mut a = vec![0.0; 9];
        a[3] = f64::NAN;
        assert_eq!(SampledSpectrum::new((0..9).map(|k| k as f64).collect(), a), Err(InversionError::NonFinite));
    }

    #[test]
    fn parabola_refines_between_samples() {
        let g = grid(-1.0, 1.0, 21);
        let a: Vec<f64> = g.iter().map(|x| 1.0 - (x - 0.037f64).powi(2)).collect();
        let spec = SampledSpectrum::new(g, a).unwrap();
        let p = find_peaks(&spec, 0.0, 0.0);
        assert_eq!(p.len(), 1);
        assert!((p[0].position - 0.037).abs() < 1e-12);
    }
}
