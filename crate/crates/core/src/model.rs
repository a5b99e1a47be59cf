//! Physical constants, oscillator parameters and the dimensionless unit system.
//!
//! Everything downstream works in oscillator units: time in 1/ω₀, length in
//! √(ħ/(mω₀)), energy in ħω₀ and vector potential in √(ħmω₀)/q. In these units
//! the equation of motion reads ẍ = −x − γẋ − ∂ₜA_x with γ = Γω₀.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant ħ (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light c (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity ε₀ (F/m), CODATA 2018.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Elementary charge (C), exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass (kg), CODATA 2018. Runs at this mass need ~10⁴× longer
/// relaxation than the reduced default.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Reduced oscillator mass (kg) that keeps integration times short.
pub const DEFAULT_MASS: f64 = 9.11e-35;

/// Default charge (C).
pub const DEFAULT_CHARGE: f64 = 1.60e-19;

/// Default natural frequency ω₀ (rad/s).
pub const DEFAULT_OMEGA0: f64 = 1.0e16;

/// Upper bound on Γω₀ for the weak-damping model.
pub const MAX_DIMENSIONLESS_DAMPING: f64 = 0.1;

/// Radiation damping time Γ = 2q²/(3mc³) · 1/(4πε₀), in seconds.
pub fn radiation_damping_coefficient(mass: f64, charge: f64) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive, got {mass}"
        )));
    }
    if !charge.is_finite() {
        return Err(Error::InvalidParameter(format!("charge must be finite, got {charge}")));
    }
    Ok(2.0 * charge * charge / (3.0 * mass * SPEED_OF_LIGHT.powi(3)) / (4.0 * PI * EPSILON_0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    charge: f64,
    natural_frequency: f64,
    damping: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, charge: f64, natural_frequency: f64) -> Result<Self> {
        let damping = radiation_damping_coefficient(mass, charge)?;
        if !(natural_frequency > 0.0) || !natural_frequency.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "natural frequency must be positive, got {natural_frequency}"
            )));
        }
        if damping * natural_frequency >= MAX_DIMENSIONLESS_DAMPING {
            return Err(Error::InvalidParameter(format!(
                "Γω₀ = {:.3e} is outside the weak-damping regime (< {MAX_DIMENSIONLESS_DAMPING})",
                damping * natural_frequency
            )));
        }
        Ok(Self { mass, charge, natural_frequency, damping })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn natural_frequency(&self) -> f64 {
        self.natural_frequency
    }

    /// Γ in seconds.
    pub fn damping(&self) -> f64 {
        self.damping
    }

    /// γ = Γω₀, the only damping parameter of the scaled dynamics.
    pub fn dimensionless_damping(&self) -> f64 {
        self.damping * self.natural_frequency
    }

    pub fn units(&self) -> ScaledUnits {
        ScaledUnits::new(self)
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self::new(DEFAULT_MASS, DEFAULT_CHARGE, DEFAULT_OMEGA0).expect("default parameters are valid")
    }
}

/// Conversion factors between SI and oscillator units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledUnits {
    /// 1/ω₀ (s)
    pub time: f64,
    /// √(ħ/(mω₀)) (m)
    pub length: f64,
    /// ħω₀ (J)
    pub energy: f64,
    /// √(ħmω₀)/q (V·s/m); a potential of one field unit gives a unit coupling
    /// qA/√(ħmω₀) in the minimal-coupling Hamiltonian.
    pub field: f64,
    /// ω₀·length/c: wave number of a resonant photon times the oscillator
    /// length. Sets the strength of every beyond-dipole effect.
    pub size_parameter: f64,
}

impl ScaledUnits {
    pub fn new(osc: &OscillatorParams) -> Self {
        let w0 = osc.natural_frequency;
        let length = (HBAR / (osc.mass * w0)).sqrt();
        Self {
            time: 1.0 / w0,
            length,
            energy: HBAR * w0,
            field: (HBAR * osc.mass * w0).sqrt() / osc.charge.abs(),
            size_parameter: w0 * length / SPEED_OF_LIGHT,
        }
    }

    pub fn time_to_scaled(&self, t: f64) -> f64 {
        t / self.time
    }
    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.time
    }
    pub fn length_to_scaled(&self, x: f64) -> f64 {
        x / self.length
    }
    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length
    }
    pub fn energy_to_scaled(&self, e: f64) -> f64 {
        e / self.energy
    }
    pub fn energy_to_si(&self, e: f64) -> f64 {
        e * self.energy
    }
    pub fn field_to_scaled(&self, a: f64) -> f64 {
        a / self.field
    }
    pub fn field_to_si(&self, a: f64) -> f64 {
        a * self.field
    }
    /// Length of one oscillator period in scaled time.
    pub fn period(&self) -> f64 {
        2.0 * PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn damping_oracle(m: f64, q: f64) -> f64 {
        // q²/(6πε₀mc³)
        q * q / (6.0 * PI * 8.8541878128e-12 * m * 299792458f64.powi(3))
    }

    #[test]
    fn damping_reduced_mass() {
        let g = radiation_damping_coefficient(9.11e-35, 1.60e-19).unwrap();
        let want = damping_oracle(9.11e-35, 1.60e-19);
        assert!((g - want).abs() / want < 1e-14);
        assert!((g - 6.25e-20).abs() / 6.25e-20 < 3e-3, "{g}");
    }

    #[test]
    fn damping_electron_mass() {
        let g = radiation_damping_coefficient(9.11e-31, 1.60e-19).unwrap();
        let want = damping_oracle(9.11e-31, 1.60e-19);
        assert!((g - want).abs() / want < 1e-14);
        assert!((g - 6.25e-24).abs() / 6.25e-24 < 3e-3);
        let e = radiation_damping_coefficient(ELECTRON_MASS, ELEMENTARY_CHARGE).unwrap();
        assert!((e - 6.26e-24).abs() < 0.01e-24, "{e}");
    }

    #[test]
    fn damping_zero_charge() {
        assert_eq!(radiation_damping_coefficient(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn damping_rejects_bad_mass() {
        assert!(matches!(radiation_damping_coefficient(0.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(radiation_damping_coefficient(-1.0, 1.0).is_err());
    }

    #[test]
    fn damping_scaling_law() {
        let base = radiation_damping_coefficient(1e-34, 1e-19).unwrap();
        let dq = radiation_damping_coefficient(1e-34, 2e-19).unwrap();
        let dm = radiation_damping_coefficient(2e-34, 1e-19).unwrap();
        assert_eq!(dq, 4.0 * base);
        assert_eq!(dm, base / 2.0);
    }

    #[test]
    fn cached_damping_matches_formula() {
        let osc = OscillatorParams::default();
        assert_eq!(osc.damping(), radiation_damping_coefficient(DEFAULT_MASS, DEFAULT_CHARGE).unwrap());
    }

    #[test]
    fn rejects_strong_damping() {
        // Γω₀ ≈ 6.25e-4 · 200 > 0.1
        assert!(OscillatorParams::new(DEFAULT_MASS, DEFAULT_CHARGE, 2.0e18).is_err());
        assert!(OscillatorParams::new(DEFAULT_MASS, DEFAULT_CHARGE, 0.0).is_err());
    }

    #[test]
    fn dimensionless_damping_fig2() {
        let osc = OscillatorParams::default();
        let gamma = osc.dimensionless_damping();
        assert!((gamma - 6.25e-4).abs() / 6.25e-4 < 3e-3);
    }

    #[test]
    fn unit_round_trip() {
        let u = OscillatorParams::default().units();
        for v in [1e-30, 3.7e-12, 1.0, 42.0, 6.02e23] {
            for (to, from) in [
                (u.time_to_scaled(v), u.time_to_si(u.time_to_scaled(v))),
                (u.length_to_scaled(v), u.length_to_si(u.length_to_scaled(v))),
                (u.energy_to_scaled(v), u.energy_to_si(u.energy_to_scaled(v))),
                (u.field_to_scaled(v), u.field_to_si(u.field_to_scaled(v))),
            ] {
                assert!(to.is_finite());
                assert!((from - v).abs() / v < 1e-12);
            }
        }
    }

    #[test]
    fn zero_point_energy_is_half() {
        let osc = OscillatorParams::default();
        let u = osc.units();
        let e = HBAR * osc.natural_frequency() / 2.0;
        assert!((u.energy_to_scaled(e) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn size_parameter_reduced_mass() {
        // ω₀√(ħ/(mω₀))/c with the reduced mass is of order one third.
        let u = OscillatorParams::default().units();
        assert!((u.size_parameter - 0.359).abs() < 2e-3, "{}", u.size_parameter);
    }
}
