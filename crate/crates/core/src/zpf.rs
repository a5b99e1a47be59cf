//! Classical zero-point field: spherical-shell mode sampling and field evaluation.
//!
//! Mode `i` of a realization has |kᵢ| = (3κᵢ)^{1/3} with κᵢ on an even grid
//! between the cubed shell radii, so the modes fill the shell with the k²
//! density of a cartesian lattice. Per mode the stream is consumed in the
//! order (cos θ, φ, χ, θ̃₁, θ̃₂).

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::model::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZpfParams {
    pub n_modes: usize,
    /// Δ (rad/s)
    pub bandwidth: f64,
    /// ω₀ (rad/s)
    pub center: f64,
}

impl ZpfParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 ZPF modes, got {}",
                self.n_modes
            )));
        }
        if !(self.bandwidth > 0.0) || !self.bandwidth.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ZPF bandwidth must be positive, got {}",
                self.bandwidth
            )));
        }
        if !(self.center - self.bandwidth / 2.0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ZPF band [{:e}, {:e}] must stay above zero frequency",
                self.center - self.bandwidth / 2.0,
                self.center + self.bandwidth / 2.0
            )));
        }
        Ok(())
    }

    pub fn omega_min(&self) -> f64 {
        self.center - self.bandwidth / 2.0
    }

    pub fn omega_max(&self) -> f64 {
        self.center + self.bandwidth / 2.0
    }

    /// V_k: k-space volume of the sampled spherical shell (rad³/m³).
    pub fn shell_volume(&self) -> f64 {
        let k_hi = self.omega_max() / SPEED_OF_LIGHT;
        let k_lo = self.omega_min() / SPEED_OF_LIGHT;
        4.0 * PI / 3.0 * k_hi.powi(3) - 4.0 * PI / 3.0 * k_lo.powi(3)
    }

    /// V = (2π)³ N_ω / V_k (m³).
    pub fn quantization_volume(&self) -> f64 {
        (2.0 * PI).powi(3) * self.n_modes as f64 / self.shell_volume()
    }

    /// Radial coordinate κᵢ = kᵢ³/3 of mode `i` (0-based).
    pub fn kappa(&self, i: usize) -> f64 {
        let lo = self.omega_min().powi(3) / (3.0 * SPEED_OF_LIGHT.powi(3));
        let hi = self.omega_max().powi(3) / (3.0 * SPEED_OF_LIGHT.powi(3));
        let step = (hi - lo) / (self.n_modes - 1) as f64;
        lo + i as f64 * step
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZpfMode {
    /// rad/m
    pub wave_vector: Vector3<f64>,
    /// c|k| (rad/s)
    pub angular_frequency: f64,
    pub polarization_1: Vector3<f64>,
    pub polarization_2: Vector3<f64>,
    pub phase_1: f64,
    pub phase_2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZpfRealization {
    pub modes: Vec<ZpfMode>,
    /// m³
    pub volume: f64,
    /// √(ħ/(ε₀Vω)) per mode (V·s/m)
    pub amplitudes: Vec<f64>,
}

/// The transverse pair (ε₁, ε₂) for a wave vector along (θ, φ), rotated by χ
/// about k̂. ε₁ × ε₂ = k̂.
pub fn polarization_basis(theta: f64, phi: f64, chi: f64) -> (Vector3<f64>, Vector3<f64>) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (sc, cc) = chi.sin_cos();
    let e1 = Vector3::new(ct * cp * cc - sp * sc, ct * sp * cc + cp * sc, -st * cc);
    let e2 = Vector3::new(-ct * cp * sc - sp * cc, -ct * sp * sc + cp * cc, st * sc);
    (e1, e2)
}

pub fn sample_modes(params: &ZpfParams, stream: &mut Stream) -> Result<ZpfRealization> {
    params.validate()?;
    let volume = params.quantization_volume();
    let mut modes = Vec::with_capacity(params.n_modes);
    let mut amplitudes = Vec::with_capacity(params.n_modes);
    for i in 0..params.n_modes {
        let k = (3.0 * params.kappa(i)).cbrt();
        let cos_theta = stream.uniform_in(-1.0, 1.0);
        let phi = stream.uniform_in(0.0, 2.0 * PI);
        let chi = stream.uniform_in(0.0, 2.0 * PI);
        let phase_1 = stream.uniform_in(0.0, 2.0 * PI);
        let phase_2 = stream.uniform_in(0.0, 2.0 * PI);

        let theta = cos_theta.acos();
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let wave_vector = Vector3::new(k * st * cp, k * st * sp, k * ct);
        let (polarization_1, polarization_2) = polarization_basis(theta, phi, chi);
        let angular_frequency = SPEED_OF_LIGHT * k;
        amplitudes.push((HBAR / (EPSILON_0 * volume * angular_frequency)).sqrt());
        modes.push(ZpfMode {
            wave_vector,
            angular_frequency,
            polarization_1,
            polarization_2,
            phase_1,
            phase_2,
        });
    }
    Ok(ZpfRealization { modes, volume, amplitudes })
}

impl ZpfRealization {
    /// x-component of E = −∂A/∂t (V/m) at position `x` (m) and time `t` (s).
    pub fn electric_field_x(&self, x: &Vector3<f64>, t: f64) -> f64 {
        zpf_electric_field_x(self, x, t)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "kx,ky,kz,omega,e1x,e1y,e1z,e2x,e2y,e2z,phase1,phase2")?;
        for m in &self.modes {
            let k = &m.wave_vector;
            let (a, b) = (&m.polarization_1, &m.polarization_2);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                k.x, k.y, k.z, m.angular_frequency, a.x, a.y, a.z, b.x, b.y, b.z, m.phase_1, m.phase_2
            )?;
        }
        Ok(())
    }
}

pub fn zpf_electric_field_x(realization: &ZpfRealization, x: &Vector3<f64>, t: f64) -> f64 {
    let mut field = 0.0;
    for (m, &a) in realization.modes.iter().zip(&realization.amplitudes) {
        // E = −∂ₜ[a cos(k·x − ωt + θ̃) ε] = −aω sin(k·x − ωt + θ̃) ε
        let arg = m.wave_vector.dot(x) - m.angular_frequency * t;
        let amp = a * m.angular_frequency;
        field -= amp
            * ((arg + m.phase_1).sin() * m.polarization_1.x
                + (arg + m.phase_2).sin() * m.polarization_2.x);
    }
    field
}
