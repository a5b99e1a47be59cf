//! Statistical properties of sampled zero-point-field realizations.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;
use zpf_oscillator::model::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use zpf_oscillator::rng::Stream;
use zpf_oscillator::zpf::{sample_modes, ZpfParams};

const W0: f64 = 1e16;

fn params(n_modes: usize) -> ZpfParams {
    // Δ = 0.1375 ω₀, the full-scale bandwidth
    ZpfParams { n_modes, bandwidth: 0.1375 * W0, center: W0 }
}

#[test]
fn radial_density_follows_k_squared_per_decile() {
    let p = params(20_000);
    let (k_lo, k_hi) = (p.omega_min() / SPEED_OF_LIGHT, p.omega_max() / SPEED_OF_LIGHT);
    let r = sample_modes(&p, &mut Stream::new(1, 0)).unwrap();
    let mut counts = [0usize; 10];
    for m in &r.modes {
        let u = (m.wave_vector.norm() - k_lo) / (k_hi - k_lo);
        counts[((u * 10.0) as usize).min(9)] += 1;
    }
    for (j, &c) in counts.iter().enumerate() {
        let a = k_lo + (k_hi - k_lo) * j as f64 / 10.0;
        let b = k_lo + (k_hi - k_lo) * (j + 1) as f64 / 10.0;
        let expected = p.n_modes as f64 * (b.powi(3) - a.powi(3)) / (k_hi.powi(3) - k_lo.powi(3));
        let rel = (c as f64 - expected).abs() / expected;
        assert!(rel < 0.05, "decile {j}: {c} modes, expected {expected:.1}");
    }
}

#[test]
fn directions_are_uniform_on_the_sphere() {
    let n = 20_000;
    let p = params(n);
    let bound = 3.0 / 3f64.sqrt() / (n as f64).sqrt();
    let seeds = 50;
    let mut within = 0;
    let mut pooled = 0.0;
    for seed in 0..seeds {
        let r = sample_modes(&p, &mut Stream::new(seed, 0)).unwrap();
        let mean = r.modes.iter().map(|m| m.wave_vector.z / m.wave_vector.norm()).sum::<f64>() / n as f64;
        pooled += mean / seeds as f64;
        if mean.abs() < bound {
            within += 1;
        }
    }
    // a 3σ bound holds for 99.7% of seeds
    assert!(within >= 48, "{within} of {seeds} seeds inside the 3σ band");
    assert!(pooled.abs() < bound / (seeds as f64).sqrt(), "pooled mean cos θ = {pooled}");
}

#[test]
fn polarization_projector_is_isotropic() {
    let r = sample_modes(&params(10_000), &mut Stream::new(7, 3)).unwrap();
    let mut sum = Matrix3::zeros();
    for m in &r.modes {
        sum += m.polarization_1 * m.polarization_1.transpose() + m.polarization_2 * m.polarization_2.transpose();
    }
    let mean = sum / r.modes.len() as f64;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 2.0 / 3.0 } else { 0.0 };
            assert!((mean[(i, j)] - target).abs() < 0.05 * 2.0 / 3.0, "entry ({i},{j}) = {}", mean[(i, j)]);
        }
    }
}

#[test]
fn field_variance_over_phases_matches_mode_sum() {
    let mut r = sample_modes(&params(40), &mut Stream::new(3, 0)).unwrap();
    let expected: f64 = r
        .modes
        .iter()
        .map(|m| {
            let ex2 = m.polarization_1.x.powi(2) + m.polarization_2.x.powi(2);
            HBAR * m.angular_frequency / (2.0 * EPSILON_0 * r.volume) * ex2
        })
        .sum();
    let trials = 20_000;
    let mut phases = Stream::new(99, 0);
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..trials {
        for m in r.modes.iter_mut() {
            m.phase_1 = phases.uniform_in(0.0, 2.0 * PI);
            m.phase_2 = phases.uniform_in(0.0, 2.0 * PI);
        }
        let e = r.electric_field_x(&Vector3::zeros(), 0.0);
        s1 += e;
        s2 += e * e;
    }
    let mean = s1 / trials as f64;
    let var = s2 / trials as f64 - mean * mean;
    assert!((var / expected - 1.0).abs() < 0.05, "variance {var:e} vs {expected:e}");
    assert!(mean.abs() < 4.0 * (expected / trials as f64).sqrt());
}

#[test]
fn field_power_stays_inside_the_band() {
    // Two modes sit exactly on the band edges and leak half their power
    // through the Hann main lobe (±2 bins), so the mode count must be large
    // for that measurement artifact to stay below 0.1%.
    let p = params(3000);
    let r = sample_modes(&p, &mut Stream::new(11, 0)).unwrap();
    // Record in units of 1/ω₀; about 4000 frequency bins fall inside the band.
    let dtau = 2.5;
    let n = 73_000usize;
    let record: Vec<f64> = (0..n)
        .map(|i| {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos();
            w * r.electric_field_x(&Vector3::zeros(), i as f64 * dtau / W0)
        })
        .collect();
    let total: f64 = record.iter().map(|x| x * x).sum();
    let span = n as f64 * dtau;
    let (lo, hi) = (p.omega_min() / W0, p.omega_max() / W0);
    let k_lo = (lo * span / (2.0 * PI)).ceil() as usize;
    let k_hi = (hi * span / (2.0 * PI)).floor() as usize;
    let mut inside = 0.0;
    for k in k_lo..=k_hi {
        let rot = C64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64);
        let mut ph = C64::new(1.0, 0.0);
        let mut acc = C64::new(0.0, 0.0);
        for &x in &record {
            acc += ph * x;
            ph *= rot;
        }
        inside += acc.norm_sqr();
    }
    // one-sided spectrum: the mirror bins carry the same power
    let fraction = 2.0 * inside / (n as f64 * total);
    assert!(fraction > 0.999 && fraction < 1.0 + 1e-9, "in-band fraction {fraction}");
}
