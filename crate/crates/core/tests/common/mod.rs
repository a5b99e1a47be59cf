//! Helpers shared by the integration tests: bundled configurations and
//! quadrature oracles that do not go through the propagators.
#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use zpf_oscillator::config::{nondimensionalize, ScaledProblem, SimulationConfig};
use zpf_oscillator::pulse::PulseParams;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn load(name: &str) -> SimulationConfig {
    SimulationConfig::from_file(&config_path(name)).expect("bundled config parses")
}

pub fn problem(cfg: &SimulationConfig) -> ScaledProblem {
    nondimensionalize(cfg).expect("valid config")
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + i as f64 * h) * w;
    }
    s * (h / 3.0)
}

/// Dipole vector potential of a pulse at θ_p = 0, A₀e^{−s²}cos(ω_p t).
pub fn dipole_potential(p: &PulseParams, t: f64) -> f64 {
    let s = (t - p.center) / p.width;
    p.amplitude * (-s * s).exp() * (p.omega * t).cos()
}

/// First-order |c₁|² for a dipole pulse: H′₁₀ = −A(t)⟨1|p|0⟩ with
/// ⟨1|p|0⟩ = i/√2, so c₁ = −i∫H′₁₀e^{it}dt.
pub fn first_order_population(p: &PulseParams) -> f64 {
    let (lo, hi) = (p.center - 8.0 * p.width, p.center + 8.0 * p.width);
    let n = (((hi - lo) * 200.0) as usize).max(2000);
    let p10 = C64::new(0.0, 0.5f64.sqrt());
    let c1 = simpson(|t| -C64::i() * (-dipole_potential(p, t) * p10) * C64::from_polar(1.0, t), lo, hi, n);
    c1.norm_sqr()
}

/// (x, v) at `t_end` of ẍ + γẋ + x = f(t) started from rest at `t_start`,
/// by quadrature of the retarded Green's function.
pub fn green_state<F: Fn(f64) -> f64>(f: F, gamma: f64, t_start: f64, t_end: f64, n: usize) -> (f64, f64) {
    let wd = (1.0 - gamma * gamma / 4.0).sqrt();
    let g = |tau: f64| (-0.5 * gamma * tau).exp() * (wd * tau).sin() / wd;
    let dg = |tau: f64| (-0.5 * gamma * tau).exp() * ((wd * tau).cos() - 0.5 * gamma / wd * (wd * tau).sin());
    let x = simpson(|s| C64::new(f(s) * g(t_end - s), 0.0), t_start, t_end, n).re;
    let v = simpson(|s| C64::new(f(s) * dg(t_end - s), 0.0), t_start, t_end, n).re;
    (x, v)
}

/// (x, v) of the same problem at each of the ascending `times`, from the
/// running integral z(t) = e^{λt}∫f(s)e^{−λs}ds with λ = −γ/2 + iω_d.
/// Simpson's rule with nodes at most 0.005 apart.
pub fn green_trace<F: Fn(f64) -> f64>(f: F, gamma: f64, t_start: f64, times: &[f64]) -> Vec<(f64, f64)> {
    let wd = (1.0 - gamma * gamma / 4.0).sqrt();
    let lambda = C64::new(-0.5 * gamma, wd);
    let mut acc = C64::new(0.0, 0.0);
    let mut prev = t_start;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        // shift by t to keep the exponentials bounded
        let n = (((t - prev) / 0.005).ceil() as usize).max(2);
        acc += simpson(|s| (lambda * (t - s)).exp() * f(s), prev, t, n) * (-lambda * t).exp();
        prev = t;
        let z = acc * (lambda * t).exp();
        out.push((z.im / wd, z.re - 0.5 * gamma / wd * z.im));
    }
    out
}

/// Force of a θ_p = 0 pulse, −∂ₜ[A₀e^{−s²}cos(ω_p t)].
pub fn dipole_force(p: &PulseParams, t: f64) -> f64 {
    let s = (t - p.center) / p.width;
    let g = p.amplitude * (-s * s).exp();
    g * (p.omega * (p.omega * t).sin() + 2.0 * s / p.width * (p.omega * t).cos())
}
