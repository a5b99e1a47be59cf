//! Run configuration: the flat `key = value` file format and its conversion to
//! a dimensionless [`ScaledProblem`].
//!
//! Time-like keys are in oscillator periods 2π/ω₀. The measurement window is
//! given relative to the pulse center, and the pulse center sits
//! `measure_to_periods` before the end of the run, so `total_time_periods`
//! also fixes how long each trajectory relaxes in the zero-point field before
//! the pulse arrives.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{OscillatorParams, ScaledUnits, DEFAULT_CHARGE, DEFAULT_MASS, DEFAULT_OMEGA0};
use crate::pulse::{PulseParams, SUPPORT_WIDTHS};
use crate::zpf::ZpfParams;

pub const CONFIG_KEYS: [&str; 17] = [
    "mass_kg",
    "charge_C",
    "omega0_rad_s",
    "pulse_amplitude",
    "pulse_omega_over_omega0",
    "pulse_theta_rad",
    "pulse_dt_periods",
    "zpf_bandwidth_over_gamma_w0sq",
    "n_modes",
    "ensemble_size",
    "dt_periods",
    "total_time_periods",
    "measure_from_periods",
    "measure_to_periods",
    "master_seed",
    "qm_levels",
    "expansion_order",
];

/// Number of pulse widths after which the pulse intensity exp(−2s²) has
/// dropped below 1e-6.
pub fn intensity_decay_widths() -> f64 {
    (1e6f64.ln() / 2.0).sqrt()
}

/// Shortest decimal that parses back to `v`, in exponent form for very
/// small or large magnitudes.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseAmplitude {
    /// Calibrated so the quantum oscillator ends at 1.5 ħω₀ for a resonant
    /// pulse at θ_p = π/4.
    Auto,
    /// A₀ in field units √(ħmω₀)/q.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub mass_kg: f64,
    pub charge_c: f64,
    pub omega0_rad_s: f64,
    pub pulse_amplitude: PulseAmplitude,
    pub pulse_omega_over_omega0: f64,
    pub pulse_theta_rad: f64,
    pub pulse_dt_periods: f64,
    pub zpf_bandwidth_over_gamma_w0sq: f64,
    pub n_modes: usize,
    pub ensemble_size: usize,
    pub dt_periods: f64,
    pub total_time_periods: f64,
    pub measure_from_periods: f64,
    pub measure_to_periods: f64,
    pub master_seed: u64,
    pub qm_levels: usize,
    pub expansion_order: usize,
    /// Evaluate the zero-point field at x = 0 instead of the particle position.
    /// Not a file key; used for ablations.
    pub field_at_origin: bool,
    /// Each field realization is reused at this many equally spaced global
    /// phase offsets; `ensemble_size` counts trajectories. Not a file key.
    pub phase_strata: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            mass_kg: DEFAULT_MASS,
            charge_c: DEFAULT_CHARGE,
            omega0_rad_s: DEFAULT_OMEGA0,
            pulse_amplitude: PulseAmplitude::Auto,
            pulse_omega_over_omega0: 1.0,
            pulse_theta_rad: PI / 4.0,
            pulse_dt_periods: 20.0,
            zpf_bandwidth_over_gamma_w0sq: 220.0,
            n_modes: 500,
            ensemble_size: 200,
            dt_periods: 1.0 / 640.0,
            total_time_periods: 1500.0,
            measure_from_periods: 60.0,
            measure_to_periods: 70.0,
            master_seed: 1,
            qm_levels: 20,
            expansion_order: 20,
            field_at_origin: false,
            phase_strata: 1,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse::<T>().map_err(|_| Error::Config {
        line,
        message: format!("cannot parse value {value:?} for key {key}"),
    })
}

impl SimulationConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment. Missing keys keep
    /// their defaults. Unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, got {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) && CONFIG_KEYS.contains(&key) {
                return Err(Error::Config { line, message: format!("duplicate key {key}") });
            }
            match key {
                "mass_kg" => cfg.mass_kg = parse_value(key, value, line)?,
                "charge_C" => cfg.charge_c = parse_value(key, value, line)?,
                "omega0_rad_s" => cfg.omega0_rad_s = parse_value(key, value, line)?,
                "pulse_amplitude" => {
                    cfg.pulse_amplitude = if value.eq_ignore_ascii_case("auto") {
                        PulseAmplitude::Auto
                    } else {
                        PulseAmplitude::Fixed(parse_value(key, value, line)?)
                    }
                }
                "pulse_omega_over_omega0" => cfg.pulse_omega_over_omega0 = parse_value(key, value, line)?,
                "pulse_theta_rad" => cfg.pulse_theta_rad = parse_value(key, value, line)?,
                "pulse_dt_periods" => cfg.pulse_dt_periods = parse_value(key, value, line)?,
                "zpf_bandwidth_over_gamma_w0sq" => {
                    cfg.zpf_bandwidth_over_gamma_w0sq = parse_value(key, value, line)?
                }
                "n_modes" => cfg.n_modes = parse_value(key, value, line)?,
                "ensemble_size" => cfg.ensemble_size = parse_value(key, value, line)?,
                "dt_periods" => cfg.dt_periods = parse_value(key, value, line)?,
                "total_time_periods" => cfg.total_time_periods = parse_value(key, value, line)?,
                "measure_from_periods" => cfg.measure_from_periods = parse_value(key, value, line)?,
                "measure_to_periods" => cfg.measure_to_periods = parse_value(key, value, line)?,
                "master_seed" => cfg.master_seed = parse_value(key, value, line)?,
                "qm_levels" => cfg.qm_levels = parse_value(key, value, line)?,
                "expansion_order" => cfg.expansion_order = parse_value(key, value, line)?,
                other => {
                    return Err(Error::Config { line, message: format!("unknown key {other:?}") })
                }
            }
        }
        Ok(cfg)
    }

    /// Canonical `key = value` text; parsing it reproduces `self` exactly.
    pub fn to_text(&self) -> String {
        let amp = match self.pulse_amplitude {
            PulseAmplitude::Auto => "auto".to_string(),
            PulseAmplitude::Fixed(a) => format_f64(a),
        };
        let values: [String; 17] = [
            format_f64(self.mass_kg),
            format_f64(self.charge_c),
            format_f64(self.omega0_rad_s),
            amp,
            format_f64(self.pulse_omega_over_omega0),
            format_f64(self.pulse_theta_rad),
            format_f64(self.pulse_dt_periods),
            format_f64(self.zpf_bandwidth_over_gamma_w0sq),
            format!("{}", self.n_modes),
            format!("{}", self.ensemble_size),
            format_f64(self.dt_periods),
            format_f64(self.total_time_periods),
            format_f64(self.measure_from_periods),
            format_f64(self.measure_to_periods),
            format!("{}", self.master_seed),
            format!("{}", self.qm_levels),
            format!("{}", self.expansion_order),
        ];
        let mut out = String::new();
        for (k, v) in CONFIG_KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn oscillator(&self) -> Result<OscillatorParams> {
        OscillatorParams::new(self.mass_kg, self.charge_c, self.omega0_rad_s)
    }

    /// Smallest admissible `total_time_periods` for the current pulse and window.
    pub fn min_total_time_periods(&self) -> f64 {
        self.measure_to_periods + SUPPORT_WIDTHS * self.pulse_dt_periods
    }
}

/// Everything in oscillator units; immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledProblem {
    pub oscillator: OscillatorParams,
    pub units: ScaledUnits,
    /// γ = Γω₀
    pub gamma: f64,
    pub dt: f64,
    pub total_time: f64,
    /// Pulse template; the amplitude is 0 while `amplitude_is_auto` is set.
    pub pulse: PulseParams,
    pub amplitude_is_auto: bool,
    pub zpf: ZpfParams,
    pub ensemble_size: usize,
    /// Absolute measurement interval.
    pub window: (f64, f64),
    pub master_seed: u64,
    pub qm_levels: usize,
    pub expansion_order: usize,
    pub field_at_origin: bool,
    pub phase_strata: usize,
}

impl ScaledProblem {
    /// ZPF bandwidth in units of ω₀.
    pub fn zpf_bandwidth(&self) -> f64 {
        self.zpf.bandwidth / self.zpf.center
    }

    /// Enforces ≥ 10 RK4 steps per period of the fastest frequency present.
    pub fn check_step(&self, max_pulse_omega: f64) -> Result<()> {
        let omega_max = (1.0 + self.zpf_bandwidth() / 2.0).max(max_pulse_omega);
        let limit = 2.0 * PI / (10.0 * omega_max);
        if !(self.dt < limit) {
            return Err(Error::InvalidParameter(format!(
                "time step {:.4} exceeds 2π/(10·{omega_max:.3}) = {limit:.4}",
                self.dt
            )));
        }
        Ok(())
    }

    /// Index of the last time step before the pulse switches on.
    pub fn pulse_on_step(&self) -> u64 {
        let t_on = self.pulse.support().0.max(0.0);
        let mut k = (t_on / self.dt).floor() as u64;
        while k > 0 && k as f64 * self.dt > t_on {
            k -= 1;
        }
        k
    }

    /// Number of steps needed to reach the end of the measurement window.
    pub fn final_step(&self) -> u64 {
        (self.window.1 / self.dt).ceil() as u64
    }
}

pub fn nondimensionalize(cfg: &SimulationConfig) -> Result<ScaledProblem> {
    let oscillator = cfg.oscillator()?;
    let units = oscillator.units();
    let gamma = oscillator.dimensionless_damping();
    let period = 2.0 * PI;

    let positive = [
        ("pulse_dt_periods", cfg.pulse_dt_periods),
        ("dt_periods", cfg.dt_periods),
        ("total_time_periods", cfg.total_time_periods),
        ("pulse_omega_over_omega0", cfg.pulse_omega_over_omega0),
        ("zpf_bandwidth_over_gamma_w0sq", cfg.zpf_bandwidth_over_gamma_w0sq),
    ];
    for (name, v) in positive {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    if cfg.ensemble_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "ensemble_size must be at least 2, got {}",
            cfg.ensemble_size
        )));
    }
    if cfg.phase_strata == 0 || cfg.ensemble_size % cfg.phase_strata != 0 || cfg.ensemble_size / cfg.phase_strata < 2 {
        return Err(Error::InvalidParameter(format!(
            "ensemble_size {} must be a multiple of phase_strata {} with at least two realizations",
            cfg.ensemble_size, cfg.phase_strata
        )));
    }
    if cfg.qm_levels < 2 {
        return Err(Error::InvalidParameter(format!("qm_levels must be at least 2, got {}", cfg.qm_levels)));
    }
    if !(cfg.measure_to_periods > cfg.measure_from_periods) {
        return Err(Error::InvalidParameter("measurement window is empty".into()));
    }
    let decay = intensity_decay_widths() * cfg.pulse_dt_periods;
    if cfg.measure_from_periods < decay {
        return Err(Error::InvalidParameter(format!(
            "measurement must start at least {decay:.3} periods after the pulse center"
        )));
    }
    if cfg.total_time_periods < cfg.min_total_time_periods() {
        return Err(Error::InvalidParameter(format!(
            "total_time_periods must be at least {} (pulse support plus measurement window)",
            cfg.min_total_time_periods()
        )));
    }

    let (amplitude, amplitude_is_auto) = match cfg.pulse_amplitude {
        PulseAmplitude::Auto => (0.0, true),
        PulseAmplitude::Fixed(a) => (a, false),
    };
    let total_time = cfg.total_time_periods * period;
    let center = total_time - cfg.measure_to_periods * period;
    let pulse = PulseParams {
        amplitude,
        omega: cfg.pulse_omega_over_omega0,
        theta: cfg.pulse_theta_rad,
        width: cfg.pulse_dt_periods * period,
        center,
    };
    pulse.validate()?;

    let zpf = ZpfParams {
        n_modes: cfg.n_modes,
        bandwidth: cfg.zpf_bandwidth_over_gamma_w0sq * oscillator.damping() * cfg.omega0_rad_s.powi(2),
        center: cfg.omega0_rad_s,
    };
    zpf.validate()?;

    let problem = ScaledProblem {
        oscillator,
        units,
        gamma,
        dt: cfg.dt_periods * period,
        total_time,
        pulse,
        amplitude_is_auto,
        zpf,
        ensemble_size: cfg.ensemble_size,
        window: (center + cfg.measure_from_periods * period, center + cfg.measure_to_periods * period),
        master_seed: cfg.master_seed,
        qm_levels: cfg.qm_levels,
        expansion_order: cfg.expansion_order,
        field_at_origin: cfg.field_at_origin,
        phase_strata: cfg.phase_strata,
    };
    problem.check_step(pulse.omega)?;
    Ok(problem)
}
