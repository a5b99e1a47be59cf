//! Gaussian excitation pulse.
//!
//! A_p = A₀ cos(k_p·x − ω_p t) exp[−(k_p·x/(|k_p|Δx) − (t − t₀)/Δt)²] ε_p with
//! k_p = (ω_p/c)(sin θ_p, 0, cos θ_p), ε_p = (cos θ_p, 0, −sin θ_p) and
//! Δx = cΔt. All quantities here are in oscillator units; the size parameter
//! η = ω₀L/c converts ω_p into a wave number along the oscillator axis.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// The pulse is switched off beyond this many widths from its center, where the
/// envelope is below e⁻³⁶ ≈ 2.3e-16.
pub const SUPPORT_WIDTHS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    /// A₀ in field units √(ħmω₀)/q.
    pub amplitude: f64,
    /// Carrier ω_p/ω₀.
    pub omega: f64,
    /// Incidence angle θ_p (rad) measured from the z axis.
    pub theta: f64,
    /// Δt in units of 1/ω₀.
    pub width: f64,
    /// t₀ in units of 1/ω₀.
    pub center: f64,
}

impl PulseParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.amplitude, self.omega, self.theta, self.width, self.center]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("pulse parameters must be finite".into()));
        }
        if !(self.omega > 0.0) {
            return Err(Error::InvalidParameter(format!("pulse frequency must be positive, got {}", self.omega)));
        }
        if !(self.width > 0.0) {
            return Err(Error::InvalidParameter(format!("pulse width must be positive, got {}", self.width)));
        }
        Ok(())
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// k_p in units of 1/L for size parameter η.
    pub fn wave_vector(&self, size_parameter: f64) -> Vector3<f64> {
        let k = self.omega * size_parameter;
        Vector3::new(k * self.theta.sin(), 0.0, k * self.theta.cos())
    }

    pub fn polarization(&self) -> Vector3<f64> {
        Vector3::new(self.theta.cos(), 0.0, -self.theta.sin())
    }

    /// |k_p|Δx = ω_pΔt, dimensionless.
    pub fn k_delta_x(&self) -> f64 {
        self.omega * self.width
    }

    /// exp(−(t − t₀)²/Δt²), zero outside the support.
    pub fn envelope(&self, t: f64) -> f64 {
        if !self.is_active(t) {
            return 0.0;
        }
        let s = (t - self.center) / self.width;
        (-s * s).exp()
    }

    pub fn is_active(&self, t: f64) -> bool {
        (t - self.center).abs() < SUPPORT_WIDTHS * self.width
    }

    /// [t₀ − 6Δt, t₀ + 6Δt]
    pub fn support(&self) -> (f64, f64) {
        let half = SUPPORT_WIDTHS * self.width;
        (self.center - half, self.center + half)
    }

    pub fn drive(&self, size_parameter: f64) -> PulseDrive {
        PulseDrive::new(self, size_parameter)
    }
}

/// Classical force of the pulse on a charge moving along x.
#[derive(Debug, Clone, Copy)]
pub struct PulseDrive {
    params: PulseParams,
    /// A₀ε_p^{(x)}
    ax: f64,
    /// k_p^{(x)} in 1/L
    kx: f64,
    /// k_p^{(x)}/(|k_p|Δx) in 1/L
    lambda: f64,
}

impl PulseDrive {
    pub fn new(params: &PulseParams, size_parameter: f64) -> Self {
        let k = params.wave_vector(size_parameter);
        Self {
            params: *params,
            ax: params.amplitude * params.polarization().x,
            kx: k.x,
            lambda: k.x / params.k_delta_x(),
        }
    }

    pub fn params(&self) -> &PulseParams {
        &self.params
    }

    /// A_p^{(x)}(x, t) in field units.
    pub fn vector_potential_x(&self, x: f64, t: f64) -> f64 {
        if !self.params.is_active(t) {
            return 0.0;
        }
        let p = &self.params;
        let s = (t - p.center) / p.width;
        let u = self.lambda * x - s;
        self.ax * (self.kx * x - p.omega * t).cos() * (-u * u).exp()
    }

    /// E_p^{(x)} = −∂ₜA_p^{(x)}; in oscillator units this is directly the force
    /// per unit mass in ẍ = −x − γẋ + f.
    pub fn force(&self, x: f64, t: f64) -> f64 {
        if !self.params.is_active(t) || self.ax == 0.0 {
            return 0.0;
        }
        let p = &self.params;
        let s = (t - p.center) / p.width;
        let u = self.lambda * x - s;
        let g = (-u * u).exp();
        let (sin_psi, cos_psi) = (self.kx * x - p.omega * t).sin_cos();
        -self.ax * g * (p.omega * sin_psi + cos_psi * 2.0 * u / p.width)
    }
}
