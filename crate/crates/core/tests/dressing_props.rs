use num_complex::Complex;
use proptest::prelude::*;
use rydpol_core::dressing::*;
use rydpol_core::sop::{sop_from_phi, RfSop};
use std::f64::consts::{PI, SQRT_2, TAU};

fn class_strategy() -> impl Strategy<Value = TransitionClass> {
    (prop::sample::select(vec![1, 3, 5]), -1i32..=1).prop_map(|(j2, p)| TransitionClass::from_twice(j2, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_symmetric_about_zero(cls in class_strategy(), phi in 0.0..TAU) {
        let s = eigen_spectrum(cls, phi, DEFAULT_DEGENERACY_TOL).unwrap();
        prop_assert!(s.asymmetry() < 1e-12);
    }

    #[test]
    fn helicity_mirror_preserves_spectrum(cls in class_strategy(), phi in 0.0..TAU) {
        let a = eigen_spectrum(cls, phi, DEFAULT_DEGENERACY_TOL).unwrap();
        let b = eigen_spectrum(cls, TAU - phi, DEFAULT_DEGENERACY_TOL).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_tracks_coupling_matrix(cls in class_strategy(), phi in 0.0..TAU) {
        let a = eigen_spectrum(cls, phi, DEFAULT_DEGENERACY_TOL).unwrap().eigenvalues;
        let b = oracle_matrix(cls, &sop_from_phi(phi)).unwrap().eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - SQRT_2 * y).abs() < 1e-12);
        }
    }

    #[test]
    fn relative_helicity_phase_does_not_move_eigenvalues(
        cls in class_strategy(), theta in 0.0..TAU, chi in 0.0..TAU
    ) {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let a = RfSop::from_amplitudes(Complex::new(c, 0.0), Complex::new(s, 0.0)).unwrap();
        let b = RfSop::from_amplitudes(Complex::from_polar(c, chi), Complex::new(s, 0.0)).unwrap();
        let ea = oracle_matrix(cls, &a).unwrap().eigenvalues().unwrap();
        let eb = oracle_matrix(cls, &b).unwrap().eigenvalues().unwrap();
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_is_three_halves_of_half_zero_spectrum(phi in 0.0..TAU) {
        let mut cf = closed_form_eigenvalues_half(phi).to_vec();
        cf.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s = eigen_spectrum(TransitionClass::HALF_ZERO, phi, DEFAULT_DEGENERACY_TOL).unwrap();
        for (x, y) in cf.iter().zip(&s.eigenvalues) {
            prop_assert!((x - 1.5 * y).abs() < 1e-12);
        }
    }

    #[test]
    fn degeneracy_lifted_off_the_equator(cls in class_strategy(), phi in 0.05..(PI - 0.05)) {
        let s = eigen_spectrum(cls, phi, DEFAULT_DEGENERACY_TOL).unwrap();
        let nonzero_pairs = (cls.dim() - cls.structural_zeros()) / 2;
        let zero = s.distinct.iter().any(|d| d.value.abs() < 1e-9);
        // Off the equator only accidental crossings can merge nonzero bands.
        prop_assert!(s.distinct_count() + 1 >= 2 * nonzero_pairs + usize::from(zero));
    }
}

#[test]
fn envelope_bounds_over_dense_grid() {
    for cls in [TransitionClass::THREE_HALF_PLUS, TransitionClass::from_twice(3, -1).unwrap()] {
        let grid: Vec<f64> = (0..=720).map(|k| k as f64 * TAU / 720.0).collect();
        for s in spectrogram(cls, &grid, DEFAULT_DEGENERACY_TOL).unwrap() {
            let n = numeric_envelopes(cls, &s);
            let e = envelopes_exact(s.phi);
            assert!((n.outer_plus - e.outer_plus).abs() < 1e-9);
            assert!((n.inner_plus - e.inner_plus).abs() < 1e-9);
            assert!(n.outer_plus >= n.inner_plus && n.inner_plus >= 0.0);
        }
    }
}

#[test]
fn bands_vary_continuously() {
    let cls = TransitionClass::THREE_HALF_PLUS;
    let n = 2048;
    let grid: Vec<f64> = (0..=n).map(|k| k as f64 * TAU / n as f64).collect();
    let g = spectrogram(cls, &grid, DEFAULT_DEGENERACY_TOL).unwrap();
    // Entries are bounded by a few units, so |d lambda / d phi| stays O(1).
    let step = TAU / n as f64;
    for w in g.windows(2) {
        for (a, b) in w[0].eigenvalues.iter().zip(&w[1].eigenvalues) {
            assert!((a - b).abs() < 4.0 * step);
        }
    }
}
