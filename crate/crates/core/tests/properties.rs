//! Property tests for invariants that must hold for any valid input.

use std::f64::consts::PI;

use nalgebra::Vector3;
use proptest::prelude::*;
use zpf_oscillator::config::{nondimensionalize, PulseAmplitude, SimulationConfig};
use zpf_oscillator::model::{radiation_damping_coefficient, OscillatorParams};
use zpf_oscillator::pulse::PulseParams;
use zpf_oscillator::quantum::{hprime_matrix, multipole_factors, Operators, QmPropagator};
use zpf_oscillator::rng::Stream;
use zpf_oscillator::schedule::schedule;
use zpf_oscillator::spectrum::{compare_spectra, find_peaks, Source, SpectrumPoint};
use zpf_oscillator::zpf::{polarization_basis, sample_modes, ZpfParams};

fn max_entry(m: &nalgebra::DMatrix<num_complex::Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn damping_scales_as_charge_squared_over_mass(m in 1e-36f64..1e-28, q in 1e-20f64..1e-18) {
        let g = radiation_damping_coefficient(m, q).unwrap();
        let g2q = radiation_damping_coefficient(m, 2.0 * q).unwrap();
        let g2m = radiation_damping_coefficient(2.0 * m, q).unwrap();
        prop_assert!((g2q / g - 4.0).abs() < 1e-14);
        prop_assert!((g / g2m - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unit_conversions_round_trip(
        m in 1e-35f64..1e-30, w0 in 1e14f64..1e17,
        t in -1e-12f64..1e-12, x in -1e-8f64..1e-8, e in 1e-22f64..1e-15, a in -1e-10f64..1e-10,
    ) {
        let osc = OscillatorParams::new(m, 1.6e-19, w0).unwrap();
        let u = osc.units();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()) + f64::MIN_POSITIVE;
        prop_assert!(close(u.time_to_si(u.time_to_scaled(t)), t));
        prop_assert!(close(u.length_to_si(u.length_to_scaled(x)), x));
        prop_assert!(close(u.energy_to_si(u.energy_to_scaled(e)), e));
        prop_assert!(close(u.field_to_si(u.field_to_scaled(a)), a));
    }

    #[test]
    fn polarizations_complete_a_right_handed_triad(
        theta in 0.0f64..PI, phi in 0.0f64..2.0 * PI, chi in 0.0f64..2.0 * PI,
    ) {
        let (e1, e2) = polarization_basis(theta, phi, chi);
        let k = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        prop_assert!((e1.norm() - 1.0).abs() < 1e-12 && (e2.norm() - 1.0).abs() < 1e-12);
        prop_assert!(e1.dot(&e2).abs() < 1e-12 && e1.dot(&k).abs() < 1e-12 && e2.dot(&k).abs() < 1e-12);
        prop_assert!((e1.cross(&e2) - k).norm() < 1e-12);
    }

    #[test]
    fn sampled_modes_stay_in_band(seed in any::<u64>(), n in 2usize..200, band in 0.01f64..1.5) {
        let p = ZpfParams { n_modes: n, bandwidth: band * 1e16, center: 1e16 };
        let r = sample_modes(&p, &mut Stream::new(seed, 0)).unwrap();
        for m in &r.modes {
            prop_assert!(m.angular_frequency >= p.omega_min() * (1.0 - 1e-12));
            prop_assert!(m.angular_frequency <= p.omega_max() * (1.0 + 1e-12));
            prop_assert!(m.polarization_1.dot(&m.wave_vector).abs() < 1e-12 * m.wave_vector.norm());
            prop_assert!((0.0..2.0 * PI).contains(&m.phase_1) && (0.0..2.0 * PI).contains(&m.phase_2));
        }
        prop_assert_eq!(&r, &sample_modes(&p, &mut Stream::new(seed, 0)).unwrap());
    }

    #[test]
    fn pulse_polarization_is_transverse(theta in 0.0f64..PI / 2.0, omega in 0.1f64..5.0) {
        let p = PulseParams { amplitude: 1.0, omega, theta, width: 10.0, center: 0.0 };
        let k = p.wave_vector(0.36);
        prop_assert!(p.polarization().dot(&k).abs() < 1e-15 * k.norm().max(1.0));
        prop_assert!((p.polarization().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hprime_is_hermitian(
        theta in 0.0f64..PI / 2.0, omega in 0.3f64..3.5, a in 0.0f64..0.5, s in -5.0f64..5.0,
    ) {
        let width = 6.0 * PI;
        let pulse = PulseParams { amplitude: a, omega, theta, width, center: 100.0 };
        let ops = Operators::new(12, 20).unwrap();
        let h = hprime_matrix(&pulse, &ops, 0.359, 100.0 + s * width).unwrap();
        prop_assert!(max_entry(&(&h - h.adjoint())) < 1e-12);
    }

    #[test]
    fn fast_potential_equals_factor_product(
        theta in 0.0f64..PI / 2.0, omega in 0.3f64..3.5, s in -5.0f64..5.0,
    ) {
        let width = 6.0 * PI;
        let pulse = PulseParams { amplitude: 0.2, omega, theta, width, center: 100.0 };
        let ops = Operators::new(10, 20).unwrap();
        let prop = QmPropagator::new(&pulse, &ops, 0.359).unwrap();
        let t = 100.0 + s * width;
        let dense = zpf_oscillator::quantum::potential_matrix(&pulse, &ops, 0.359, t);
        prop_assert!(max_entry(&(prop.potential(t) - dense)) < 1e-10);
    }

    #[test]
    fn multipole_factors_commute(kx in -0.5f64..0.5, s in -4.0f64..4.0, order in 0usize..25) {
        let ops = Operators::new(8, order).unwrap();
        let m = &ops.position * num_complex::Complex64::new(kx, 0.0);
        let (f1, f2, f3) = multipole_factors(&m, 20.0, s, order);
        prop_assert!(max_entry(&(&f1 * &f2 - &f2 * &f1)) < 1e-12);
        prop_assert!(max_entry(&(&f1 * &f3 - &f3 * &f1)) < 1e-12);
    }

    #[test]
    fn config_text_round_trips(
        seed in any::<u64>(), n_modes in 2usize..5000, dt in 1e-4f64..0.1, a in prop::option::of(0.0f64..10.0),
    ) {
        let cfg = SimulationConfig {
            master_seed: seed,
            n_modes,
            dt_periods: dt,
            pulse_amplitude: a.map_or(PulseAmplitude::Auto, PulseAmplitude::Fixed),
            ..SimulationConfig::default()
        };
        prop_assert_eq!(SimulationConfig::parse(&cfg.to_text()).unwrap(), cfg.clone());
        prop_assert_eq!(nondimensionalize(&cfg).ok(), nondimensionalize(&cfg).ok());
    }

    #[test]
    fn schedule_preserves_order(n in 0usize..200, jobs in 1usize..9) {
        let items: Vec<usize> = (0..n).collect();
        let out = schedule(&items, jobs, |i, &x| Ok(i * 1000 + x)).unwrap();
        prop_assert_eq!(out, items.iter().map(|&x| x * 1001).collect::<Vec<_>>());
    }

    #[test]
    fn peak_reports_are_sorted_and_above_baseline(values in prop::collection::vec(0.0f64..3.0, 5..80)) {
        let pts: Vec<SpectrumPoint> = values
            .iter()
            .enumerate()
            .map(|(i, &e)| SpectrumPoint {
                omega_ratio: 0.5 + 0.05 * i as f64,
                mean_energy: e,
                standard_error: 0.0,
                source: Source::Quantum,
                theta: 0.0,
            })
            .collect();
        let r = find_peaks(&pts).unwrap();
        prop_assert!(r.positions.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(r.heights.iter().all(|&h| h > r.baseline));
        let c = compare_spectra(&pts, &pts).unwrap();
        prop_assert_eq!(c.weighted_rms, 0.0);
        prop_assert!(c.matches.iter().all(|m| m.position_difference == 0.0 && m.height_ratio == 1.0));
    }
}
