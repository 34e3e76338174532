use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::matrix::CouplingTemplate;
use super::{check_phi, TransitionClass};
use crate::error::DressingError;
use crate::scalar::Real;

/// Absolute tolerance for grouping eigenvalues as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// A cluster of eigenvalues closer than the degeneracy tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistinctEigenvalue<T> {
    pub value: T,
    pub multiplicity: usize,
}

/// Sorted eigenvalues at one phase angle, with their degeneracy structure.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSpectrum<T: Real> {
    pub phi: T,
    pub eigenvalues: Vec<T>,
    pub distinct: Vec<DistinctEigenvalue<T>>,
}

impl<T: Real> EigenSpectrum<T> {
    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    /// Largest deviation between the spectrum and its negation.
    pub fn asymmetry(&self) -> T {
        let n = self.eigenvalues.len();
        (0..n).map(|k| (self.eigenvalues[k] + self.eigenvalues[n - 1 - k]).abs()).fold(T::zero(), |a, b| a.max(b))
    }
}

/// Groups sorted values into clusters whose consecutive gaps are `<= tol`.
pub fn count_distinct<T: Real>(sorted: &[T], tol: T) -> Vec<DistinctEigenvalue<T>> {
    let mut out: Vec<DistinctEigenvalue<T>> = Vec::new();
    let mut sum = T::zero();
    let mut prev: Option<T> = None;
    for &v in sorted {
        match (prev, out.last_mut()) {
            (Some(p), Some(last)) if v - p <= tol => {
                last.multiplicity += 1;
                sum += v;
                last.value = sum / T::from_usize(last.multiplicity).expect("small count");
            }
            _ => {
                out.push(DistinctEigenvalue { value: v, multiplicity: 1 });
                sum = v;
            }
        }
        prev = Some(v);
    }
    out
}

fn sorted_eigen<T: Real>(m: DMatrix<T>) -> Result<(Vec<T>, DMatrix<T>), DressingError> {
    let dim = m.nrows();
    let eig = m.try_symmetric_eigen(T::default_epsilon(), 10_000).ok_or(DressingError::EigenFailure { dim })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

fn check_tol<T: Real>(tol: T) -> Result<(), DressingError> {
    if !(tol > T::zero()) || !tol.is_finite() {
        return Err(DressingError::BadTolerance(tol.as_f64()));
    }
    Ok(())
}

/// Spectrum of a prebuilt template at `phi`.
pub fn eigen_spectrum_of<T: Real>(
    template: &CouplingTemplate<T>,
    phi: T,
    degeneracy_tol: T,
) -> Result<EigenSpectrum<T>, DressingError> {
    check_tol(degeneracy_tol)?;
    check_phi(phi)?;
    let (eigenvalues, _) = sorted_eigen(template.entries(phi))?;
    let distinct = count_distinct(&eigenvalues, degeneracy_tol);
    Ok(EigenSpectrum { phi, eigenvalues, distinct })
}

/// All eigenvalues of the coupling matrix at `phi`, ascending.
pub fn eigen_spectrum<T: Real>(
    cls: TransitionClass,
    phi: T,
    degeneracy_tol: T,
) -> Result<EigenSpectrum<T>, DressingError> {
    eigen_spectrum_of(&CouplingTemplate::new(cls)?, phi, degeneracy_tol)
}

/// One spectrum per grid point, computed in parallel, returned in grid order.
pub fn spectrogram<T: Real>(
    cls: TransitionClass,
    phi_grid: &[T],
    degeneracy_tol: T,
) -> Result<Vec<EigenSpectrum<T>>, DressingError> {
    if phi_grid.is_empty() {
        return Err(DressingError::EmptyGrid);
    }
    check_tol(degeneracy_tol)?;
    let template = CouplingTemplate::new(cls)?;
    phi_grid.par_iter().map(|&phi| eigen_spectrum_of(&template, phi, degeneracy_tol)).collect()
}

/// Eigenvalues with eigenvectors as columns, ascending.
#[derive(Clone, Debug)]
pub struct DressedStates<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: DMatrix<T>,
}

pub fn dressed_states<T: Real>(cls: TransitionClass, phi: T) -> Result<DressedStates<T>, DressingError> {
    check_phi(phi)?;
    let (eigenvalues, eigenvectors) = sorted_eigen(CouplingTemplate::new(cls)?.entries(phi))?;
    Ok(DressedStates { eigenvalues, eigenvectors })
}

/// `lambda_n = Re exp(i (phi/2 + (2n - 1) pi/4))` for `n = 1..4`, in that order.
pub fn closed_form_eigenvalues_half<T: Real>(phi: T) -> [T; 4] {
    let quarter = T::frac_pi_4();
    let half = phi / T::lit(2.0);
    std::array::from_fn(|k| (half + T::lit((2 * k + 1) as f64) * quarter).cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn tol() -> f64 {
        DEFAULT_DEGENERACY_TOL
    }

    #[test]
    fn closed_form_reference_points() {
        let v = closed_form_eigenvalues_half(0.0);
        let want = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2, -FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let v = closed_form_eigenvalues_half(PI / 2.0);
        for (a, b) in v.iter().zip([0.0, -1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let v = closed_form_eigenvalues_half(PI);
        for (a, b) in v.iter().zip([-FRAC_1_SQRT_2, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn half_zero_distinct_counts() {
        let c = TransitionClass::HALF_ZERO;
        assert_eq!(eigen_spectrum(c, 0.0, tol()).unwrap().distinct_count(), 2);
        let s = eigen_spectrum(c, PI / 2.0, tol()).unwrap();
        assert_eq!(s.distinct_count(), 3);
        assert_eq!(s.distinct[1].multiplicity, 2);
        assert_eq!(eigen_spectrum(c, 1.0, tol()).unwrap().distinct_count(), 4);
    }

    #[test]
    fn three_half_plus_at_quarter_turn() {
        let s = eigen_spectrum(TransitionClass::THREE_HALF_PLUS, PI / 2.0, tol()).unwrap();
        assert_eq!(s.eigenvalues.len(), 10);
        assert_eq!(s.distinct_count(), 9);
        let top = s.eigenvalues[9];
        assert!((top - 2.0 / 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn linear_counts_for_hierarchy() {
        for (cls, want) in TransitionClass::EXPERIMENTAL.iter().zip([2, 3, 4, 5]) {
            for phi in [0.0, PI] {
                assert_eq!(eigen_spectrum(*cls, phi, tol()).unwrap().distinct_count(), want, "{cls}");
            }
        }
    }

    #[test]
    fn spectrogram_single_point_and_order() {
        let c = TransitionClass::THREE_HALF_ZERO;
        let g = spectrogram(c, &[0.0], tol()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0], eigen_spectrum(c, 0.0, tol()).unwrap());
        let grid: Vec<f64> = (0..17).map(|k| k as f64 * 0.3).collect();
        let g = spectrogram(c, &grid, tol()).unwrap();
        for (s, phi) in g.iter().zip(&grid) {
            assert_eq!(s.phi, *phi);
        }
        assert_eq!(spectrogram::<f64>(c, &[], tol()), Err(DressingError::EmptyGrid));
        assert!(spectrogram(c, &[0.0], 0.0).is_err());
    }

    #[test]
    fn count_distinct_clusters() {
        let v = [-1.0, -1.0 + 1e-12, 0.0, 0.5, 0.5 + 5e-10, 0.5 + 1e-9];
        let d = count_distinct(&v, 1e-9);
        assert_eq!(d.iter().map(|x| x.multiplicity).collect::<Vec<_>>(), vec![2, 1, 3]);
    }

    #[test]
    fn dressed_states_are_orthonormal() {
        let d = dressed_states::<f64>(TransitionClass::THREE_HALF_PLUS, 1.1).unwrap();
        let g = d.eigenvectors.transpose() * &d.eigenvectors;
        assert!((g - DMatrix::identity(10, 10)).abs().max() < 1e-12);
    }

    #[test]
    fn works_in_f32() {
        let s = eigen_spectrum(TransitionClass::HALF_ZERO, 0.4f32, 1e-4).unwrap();
        assert_eq!(s.distinct_count(), 4);
    }
}
