//! Quantum propagation against two-level and perturbative oracles.

mod common;

use std::f64::consts::PI;

use common::first_order_population;
use num_complex::Complex64 as C64;
use zpf_oscillator::model::OscillatorParams;
use zpf_oscillator::pulse::PulseParams;
use zpf_oscillator::quantum::{
    excitation_energy, propagate_with, Operators, QmPropagator, QmState, STEPS_PER_FAST_PERIOD,
};

fn eta() -> f64 {
    OscillatorParams::default().units().size_parameter
}

#[test]
fn resonant_two_level_system_rabi_oscillates() {
    let omega_r = 0.05;
    for t_end in [10.0, 31.4, 62.8, 100.0] {
        let state = propagate_with(&QmState::ground(2), t_end, 20_000, |t, psi, out| {
            let half = 0.5 * omega_r;
            out[0] = C64::from_polar(half, t) * psi[1];
            out[1] = C64::from_polar(half, -t) * psi[0];
        })
        .unwrap();
        let p1 = state.probabilities()[1];
        let expected = (0.5 * omega_r * t_end).sin().powi(2);
        assert!((p1 - expected).abs() < 1e-9, "t = {t_end}: {p1} vs {expected}");
        assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

fn weak_dipole_pulse(omega: f64) -> PulseParams {
    let width = 3.0 * 2.0 * PI;
    PulseParams { amplitude: 2e-3, omega, theta: 0.0, width, center: 7.0 * width }
}

#[test]
fn weak_dipole_pulse_follows_first_order_theory() {
    let ops = Operators::new(20, 20).unwrap();
    for omega in [0.9, 0.97, 1.0, 1.05] {
        let pulse = weak_dipole_pulse(omega);
        let prop = QmPropagator::new(&pulse, &ops, eta()).unwrap();
        let state = prop.run(prop.default_steps(STEPS_PER_FAST_PERIOD)).unwrap();
        let p1 = state.probabilities()[1];
        let oracle = first_order_population(&pulse);
        assert!(oracle < 1e-3, "pulse too strong: {oracle}");
        assert!((p1 / oracle - 1.0).abs() < 0.01, "ω = {omega}: {p1:e} vs {oracle:e}");
    }
}

#[test]
fn no_second_harmonic_without_spatial_dependence() {
    let width = 3.0 * 2.0 * PI;
    let pulse = PulseParams { amplitude: 0.1223, omega: 2.0, theta: PI / 4.0, width, center: 7.0 * width };
    let excess = |p: &PulseParams| excitation_energy(p, 20, 20, eta(), STEPS_PER_FAST_PERIOD).unwrap().0 - 0.5;
    let oblique = excess(&pulse);
    let dipole = excess(&pulse.with_theta(0.0));
    assert!(oblique > 0.05, "second harmonic at π/4: {oblique}");
    assert!(dipole.abs() * 100.0 < oblique, "θ = 0: {dipole:e}, π/4: {oblique:e}");
}

#[test]
fn default_step_keeps_the_norm() {
    let width = 3.0 * 2.0 * PI;
    for omega in [1.0, 2.0, 3.0] {
        let pulse = PulseParams { amplitude: 0.1223, omega, theta: PI / 4.0, width, center: 7.0 * width };
        let (_, drift) = excitation_energy(&pulse, 20, 20, eta(), STEPS_PER_FAST_PERIOD).unwrap();
        assert!(drift < 1e-6, "ω = {omega}: drift {drift:e}");
    }
}
