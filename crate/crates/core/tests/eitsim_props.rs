use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rydpol_core::eitsim::{uniform_grid, EitSimulator, LevelScheme, SimParams};
use rydpol_core::inversion::{find_peaks, PeakOptions, SampledSpectrum};
use rydpol_core::sop::{OpticalConfig, OpticsPreset, RfSop};
use rydpol_core::{eigen_spectrum, TransitionClass};

fn class_strategy() -> impl Strategy<Value = TransitionClass> {
    prop::sample::select(vec![(1, 0), (1, 1), (1, -1), (3, 0), (3, 1), (3, -1)])
        .prop_map(|(j2, p)| TransitionClass::from_twice(j2, p).unwrap())
}

fn peaks(sim: &EitSimulator<f64>, phi: f64) -> Vec<f64> {
    let s = sim.spectrum(phi).unwrap();
    let spec = SampledSpectrum::new(s.detuning, s.response).unwrap();
    let o = PeakOptions::for_spectrum(&spec);
    find_peaks(&spec, o.min_prominence, o.merge_tol).iter().map(|p| p.position).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn steady_states_are_density_matrices(
        cls in class_strategy(),
        phi in 0.0..TAU,
        delta_c in -50.0..50.0f64,
        omega_probe in 0.05..2.0f64,
        omega_coupling in 0.5..8.0f64,
        omega_rf in 0.0..50.0f64,
        gamma_r in 0.01..1.0f64,
        rotated in any::<bool>(),
    ) {
        let preset = if rotated { OpticsPreset::RotatedCircular } else { OpticsPreset::Standard };
        let params = SimParams {
            omega_probe,
            omega_coupling,
            omega_rf,
            gamma_r,
            detuning_grid: vec![delta_c],
            optics: OpticalConfig::preset(preset),
            ..SimParams::default()
        };
        let sim = EitSimulator::new(&LevelScheme::new(cls), &params).unwrap();
        let states = sim.steady_states(&RfSop::from_phi(phi), delta_c).unwrap();
        prop_assert_eq!(states.len(), 2);
        for s in &states {
            prop_assert!((s.trace() - 1.0).abs() < 1e-10);
            prop_assert!(s.min_eigenvalue() > -1e-10, "min eigenvalue {}", s.min_eigenvalue());
            prop_assert!(s.hermiticity_error() < 1e-12);
            prop_assert!(s.residual < 1e-9, "residual {}", s.residual);
        }
        prop_assert!(sim.response_at(&RfSop::from_phi(phi), delta_c).unwrap() >= -1e-12);
    }

    #[test]
    fn standard_optics_mirror_the_phase_angle(cls in class_strategy(), phi in 0.0..PI, delta_c in -40.0..40.0f64) {
        let sim = EitSimulator::new(&LevelScheme::new(cls), &SimParams::default()).unwrap();
        let a = sim.response_at(&RfSop::from_phi(phi), delta_c).unwrap();
        let b = sim.response_at(&RfSop::from_phi(TAU - phi), delta_c).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-6), "{} vs {}", a, b);
    }
}

#[test]
fn weak_probe_response_is_linear_in_the_probe() {
    let sop = RfSop::from_phi(0.9);
    for cls in [TransitionClass::HALF_ZERO, TransitionClass::THREE_HALF_PLUS] {
        let scheme = LevelScheme::new(cls);
        let per_probe = |omega_probe: f64, delta_c: f64| {
            let sim = EitSimulator::new(&scheme, &SimParams { omega_probe, ..SimParams::default() }).unwrap();
            sim.response_at(&sop, delta_c).unwrap() / omega_probe
        };
        for delta_c in [-25.0, -3.0, 0.0, 12.0] {
            let (a, b) = (per_probe(0.005, delta_c), per_probe(0.01, delta_c));
            assert!((a - b).abs() < 1e-4 * a.abs(), "{cls} at {delta_c}: {a} vs {b}");
        }
    }
}

#[test]
fn lines_sit_at_rf_scaled_eigenvalues() {
    let params = SimParams { detuning_grid: uniform_grid(-60.0, 60.0, 1201), ..SimParams::default() };
    for cls in [TransitionClass::HALF_ZERO, TransitionClass::THREE_HALF_PLUS] {
        let sim = EitSimulator::new(&LevelScheme::new(cls), &params).unwrap();
        for phi in [0.3, 1.1, 2.5, 4.0] {
            let found = peaks(&sim, phi);
            let eig = eigen_spectrum(cls, phi, 1e-9).unwrap();
            let (lo, hi) = (eig.eigenvalues[0] * params.omega_rf, eig.eigenvalues.last().unwrap() * params.omega_rf);
            let (first, last) = (found[0], *found.last().unwrap());
            assert!((first - lo).abs() < 0.1 && (last - hi).abs() < 0.1, "{cls} phi={phi}: {found:?} vs [{lo}, {hi}]");
        }
    }
    // Every 1/2^0 line, not just the outer pair.
    let sim = EitSimulator::new(&LevelScheme::new(TransitionClass::HALF_ZERO), &params).unwrap();
    let found = peaks(&sim, 1.1);
    let eig = eigen_spectrum(TransitionClass::HALF_ZERO, 1.1, 1e-9).unwrap();
    assert_eq!(found.len(), 4);
    for (p, e) in found.iter().zip(&eig.eigenvalues) {
        assert!((p - e * params.omega_rf).abs() < 0.1, "{found:?}");
    }
}

#[test]
fn line_positions_scale_with_rf_amplitude() {
    let grid = uniform_grid(-60.0, 60.0, 1201);
    let at = |omega_rf: f64| {
        let params = SimParams { omega_rf, detuning_grid: grid.clone(), ..SimParams::default() };
        peaks(&EitSimulator::new(&LevelScheme::new(TransitionClass::HALF_ZERO), &params).unwrap(), 0.7)
    };
    let (a, b) = (at(20.0), at(40.0));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((2.0 * x - y).abs() < 0.2, "{a:?} vs {b:?}");
    }
}

#[test]
fn without_rf_a_single_transparency_line_at_zero() {
    let params = SimParams { omega_rf: 0.0, detuning_grid: uniform_grid(-20.0, 20.0, 401), ..SimParams::default() };
    let sim = EitSimulator::new(&LevelScheme::new(TransitionClass::THREE_HALF_PLUS), &params).unwrap();
    for phi in [0.0, 1.0, 3.0] {
        let p = peaks(&sim, phi);
        assert_eq!(p.len(), 1, "{p:?}");
        assert!(p[0].abs() < 0.1);
    }
}

#[test]
fn distant_partner_level_decouples() {
    let params = SimParams { detuning_grid: uniform_grid(-40.0, 40.0, 161), ..SimParams::default() };
    let base = LevelScheme::new(TransitionClass::THREE_HALF_ZERO);
    let far = base.clone().with_partner_level(1e6).unwrap();
    let a = EitSimulator::new(&base, &params).unwrap().spectrum(0.8).unwrap();
    let b = EitSimulator::new(&far, &params).unwrap().spectrum(0.8).unwrap();
    let peak = a.response.iter().copied().fold(0.0, f64::max);
    let n = a.response.len() as f64;
    let rms = (a.response.iter().zip(&b.response).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / n).sqrt();
    assert!(rms < 1e-3 * peak, "{rms} vs peak {peak}");
    // Residual light shift of order omega_rf^2 / delta_3 still moves steep flanks a little.
    let worst = a.response.iter().zip(&b.response).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst < 2e-2 * peak, "{worst} vs peak {peak}");
}
