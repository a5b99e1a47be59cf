//! Classical oscillator driven by the zero-point field and the pulse.
//!
//! In oscillator units the equation of motion is
//!
//! ```text
//! ẍ = −x − γẋ + E_vac^{(x)}(x, t) + E_p^{(x)}(x, t)
//! ```
//!
//! where the fields are already scaled by q/(mω₀²L). Radiation reaction enters
//! only through −γẋ. Integration is fixed-step RK4 on the time grid tₖ = k·dt.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::config::ScaledProblem;
use crate::error::{Error, Result};
use crate::model::OscillatorParams;
use crate::pulse::{PulseDrive, PulseParams};
use crate::rng::Stream;
use crate::schedule::schedule;
use crate::zpf::{sample_modes, ZpfRealization};

/// |x| or |v| beyond this aborts a trajectory.
pub const RUNAWAY_LIMIT: f64 = 1e6;

/// Exact time phasors are recomputed every this many steps.
const PHASOR_ANCHOR: u64 = 256;

/// Above this |k_x x| the power series for e^{ik_x x} is not used.
const SERIES_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub x: f64,
    pub v: f64,
    pub t: f64,
}

impl TrajectoryState {
    pub fn energy(&self) -> f64 {
        0.5 * (self.x * self.x + self.v * self.v)
    }
}

/// One RK4 step of ẍ = −x − γẋ + f. `force(slot, x)` is evaluated at
/// slot 0 (t), 1 (t + dt/2, twice) and 2 (t + dt).
#[inline(always)]
fn rk4_update<F: FnMut(usize, f64) -> f64>(x: f64, v: f64, gamma: f64, h: f64, mut force: F) -> (f64, f64) {
    let acc = |x: f64, v: f64, f: f64| -x - gamma * v + f;
    let k1x = v;
    let k1v = acc(x, v, force(0, x));
    let x2 = x + 0.5 * h * k1x;
    let v2 = v + 0.5 * h * k1v;
    let k2x = v2;
    let k2v = acc(x2, v2, force(1, x2));
    let x3 = x + 0.5 * h * k2x;
    let v3 = v + 0.5 * h * k2v;
    let k3x = v3;
    let k3v = acc(x3, v3, force(1, x3));
    let x4 = x + h * k3x;
    let v4 = v + h * k3v;
    let k4x = v4;
    let k4v = acc(x4, v4, force(2, x4));
    (
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Classical RK4 step of ẍ = −x − γẋ + f(x, t).
pub fn step_rk4<F: FnMut(f64, f64) -> f64>(
    state: &TrajectoryState,
    gamma: f64,
    dt: f64,
    mut force: F,
) -> Result<TrajectoryState> {
    let t = state.t;
    let offsets = [0.0, 0.5 * dt, dt];
    let (x, v) = rk4_update(state.x, state.v, gamma, dt, |slot, x| force(x, t + offsets[slot]));
    let next = TrajectoryState { x, v, t: t + dt };
    check_runaway(&next, 0)?;
    Ok(next)
}

fn check_runaway(s: &TrajectoryState, trajectory: u64) -> Result<()> {
    if !(s.x.abs() < RUNAWAY_LIMIT && s.v.abs() < RUNAWAY_LIMIT) {
        return Err(Error::Runaway {
            trajectory,
            time: s.t,
            detail: format!("x = {:e}, v = {:e}", s.x, s.v),
        });
    }
    Ok(())
}

const COS_SERIES: [f64; 13] = taylor_coefficients(0);
const SIN_SERIES: [f64; 13] = taylor_coefficients(1);

/// (−1)ʲ/(2j + offset)! for j = 0..13.
const fn taylor_coefficients(offset: usize) -> [f64; 13] {
    let mut out = [0.0; 13];
    let mut j = 0;
    while j < 13 {
        let n = 2 * j + offset;
        let mut fact = 1.0;
        let mut i = 2;
        while i <= n {
            fact *= i as f64;
            i += 1;
        }
        out[j] = if j % 2 == 0 { 1.0 / fact } else { -1.0 / fact };
        j += 1;
    }
    out
}

/// Number of series terms giving cos and sin to ~1e-17 for |y| ≤ `y_max`.
fn series_terms(y_max: f64) -> usize {
    let y2 = y_max * y_max;
    let mut term = 1.0;
    for j in 1..COS_SERIES.len() {
        term *= y2 / ((2 * j - 1) * 2 * j) as f64;
        if term < 1e-17 {
            return j;
        }
    }
    COS_SERIES.len()
}

/// (cos y, sin y) from the first `terms` series terms.
#[inline(always)]
fn cis_series(y: f64, terms: usize) -> (f64, f64) {
    let y2 = y * y;
    let mut c = COS_SERIES[terms - 1];
    let mut s = SIN_SERIES[terms - 1];
    for j in (0..terms - 1).rev() {
        c = c * y2 + COS_SERIES[j];
        s = s * y2 + SIN_SERIES[j];
    }
    (c, s * y)
}

const LANES: usize = 4;

/// Σᵢ (cos(kᵢx)·Im zᵢ + sin(kᵢx)·Re zᵢ) by series, four modes at a time.
#[inline]
fn series_sum(kx: &[f64], z: &[C64], x: f64, terms: usize) -> f64 {
    let mut acc = [0.0; LANES];
    let body = kx.len() / LANES * LANES;
    for (kc, zc) in kx[..body].chunks_exact(LANES).zip(z[..body].chunks_exact(LANES)) {
        let mut y = [0.0; LANES];
        let mut y2 = [0.0; LANES];
        for l in 0..LANES {
            y[l] = kc[l] * x;
            y2[l] = y[l] * y[l];
        }
        let mut c = [COS_SERIES[terms - 1]; LANES];
        let mut s = [SIN_SERIES[terms - 1]; LANES];
        for j in (0..terms - 1).rev() {
            for l in 0..LANES {
                c[l] = c[l] * y2[l] + COS_SERIES[j];
                s[l] = s[l] * y2[l] + SIN_SERIES[j];
            }
        }
        for l in 0..LANES {
            acc[l] += c[l] * zc[l].im + s[l] * y[l] * zc[l].re;
        }
    }
    let mut total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (k, z) in kx[body..].iter().zip(&z[body..]) {
        let (c, s) = cis_series(k * x, terms);
        total += c * z.im + s * z.re;
    }
    total
}

/// Zero-point field of one realization in oscillator units. Mode i
/// contributes −Im[e^{ik_i x}·Bᵢe^{−iωᵢt}] to the scaled force, with
/// Bᵢ = (q/(mω₀²L))√(ħωᵢ/(ε₀V))·(ε₁ₓe^{iθ̃₁} + ε₂ₓe^{iθ̃₂}).
#[derive(Debug, Clone, PartialEq)]
pub struct ZpfForce {
    kx: Vec<f64>,
    omega: Vec<f64>,
    amp: Vec<C64>,
    k_max: f64,
    at_origin: bool,
}

impl ZpfForce {
    pub fn new(realization: &ZpfRealization, osc: &OscillatorParams, at_origin: bool) -> Self {
        let units = osc.units();
        let w0 = osc.natural_frequency();
        let coupling = osc.charge() / (osc.mass() * w0 * w0 * units.length);
        let mut kx = Vec::with_capacity(realization.modes.len());
        let mut omega = Vec::with_capacity(realization.modes.len());
        let mut amp = Vec::with_capacity(realization.modes.len());
        for (m, &a) in realization.modes.iter().zip(&realization.amplitudes) {
            kx.push(m.wave_vector.x * units.length);
            omega.push(m.angular_frequency / w0);
            let e = coupling * a * m.angular_frequency;
            amp.push(
                e * (m.polarization_1.x * C64::from_polar(1.0, m.phase_1)
                    + m.polarization_2.x * C64::from_polar(1.0, m.phase_2)),
            );
        }
        let k_max = if at_origin { 0.0 } else { kx.iter().fold(0.0f64, |a, &k| a.max(k.abs())) };
        Self { kx, omega, amp, k_max, at_origin }
    }

    /// Field of ensemble member `trajectory`: realization
    /// ⌊trajectory/strata⌋ drawn from stream (master_seed, realization), at
    /// global phase 2π(trajectory mod strata)/strata.
    pub fn sample(problem: &ScaledProblem, trajectory: u64) -> Result<Self> {
        let strata = problem.phase_strata.max(1) as u64;
        let mut stream = Stream::new(problem.master_seed, trajectory / strata);
        let realization = sample_modes(&problem.zpf, &mut stream)?;
        let field = Self::new(&realization, &problem.oscillator, problem.field_at_origin);
        let offset = trajectory % strata;
        Ok(if offset == 0 { field } else { field.with_global_phase(2.0 * PI * offset as f64 / strata as f64) })
    }

    /// Same modes with every phase advanced by `phase`; the field law is
    /// invariant under this shift.
    pub fn with_global_phase(mut self, phase: f64) -> Self {
        let r = C64::from_polar(1.0, phase);
        self.amp.iter_mut().for_each(|a| *a *= r);
        self
    }

    pub fn n_modes(&self) -> usize {
        self.omega.len()
    }

    /// Scaled force at position x and time t, evaluated directly.
    pub fn force(&self, x: f64, t: f64) -> f64 {
        let mut f = 0.0;
        for i in 0..self.omega.len() {
            let kx = if self.at_origin { 0.0 } else { self.kx[i] * x };
            let (s, c) = (kx - self.omega[i] * t).sin_cos();
            f -= self.amp[i].re * s + self.amp[i].im * c;
        }
        f
    }

    fn phasors_at(&self, t: f64, out: &mut [C64]) {
        for (i, z) in out.iter_mut().enumerate() {
            let (s, c) = (self.omega[i] * t).sin_cos();
            *z = self.amp[i] * C64::new(c, -s);
        }
    }

    /// Σᵢ Im[e^{ik_i x} zᵢ] with zᵢ = Bᵢe^{−iωᵢt} precomputed.
    #[inline]
    fn sum_with_phasors(&self, x: f64, z: &[C64]) -> f64 {
        if self.at_origin {
            return -z.iter().map(|z| z.im).sum::<f64>();
        }
        let y_max = self.k_max * x.abs();
        if y_max <= SERIES_LIMIT {
            return -series_sum(&self.kx, z, x, series_terms(y_max));
        }
        let mut acc = 0.0;
        for (k, z) in self.kx.iter().zip(z) {
            let (s, c) = (k * x).sin_cos();
            acc += c * z.im + s * z.re;
        }
        -acc
    }

    /// Dipole-approximation steady state at t = 0: the long-time limit of the
    /// linear response to this realization with the field pinned at x = 0.
    pub fn steady_state(&self, gamma: f64) -> (f64, f64) {
        let (mut x, mut v) = (0.0, 0.0);
        for (&w, &b) in self.omega.iter().zip(&self.amp) {
            let response = C64::new(1.0 - w * w, -gamma * w);
            x += (C64::i() * b / response).re;
            v += (w * b / response).re;
        }
        (x, v)
    }
}

/// Time phasors for steps k, k + ½, k + 1, advanced by rotation with exact
/// recomputation on every multiple of [`PHASOR_ANCHOR`]. The sequence depends
/// only on the step index, so integrations resumed mid-way match
/// uninterrupted ones bit for bit.
struct PhasorClock {
    step: u64,
    dt: f64,
    half_rotation: Vec<C64>,
    now: Vec<C64>,
    half: Vec<C64>,
    next: Vec<C64>,
}

impl PhasorClock {
    fn new(field: &ZpfForce, dt: f64, step: u64) -> Self {
        let n = field.n_modes();
        let half_rotation = field.omega.iter().map(|w| C64::from_polar(1.0, -w * 0.5 * dt)).collect();
        let mut clock = Self {
            step: step - step % PHASOR_ANCHOR,
            dt,
            half_rotation,
            now: vec![C64::new(0.0, 0.0); n],
            half: vec![C64::new(0.0, 0.0); n],
            next: vec![C64::new(0.0, 0.0); n],
        };
        field.phasors_at(clock.step as f64 * dt, &mut clock.now);
        while clock.step < step {
            clock.prepare();
            clock.advance(field);
        }
        clock.prepare();
        clock
    }

    fn prepare(&mut self) {
        for i in 0..self.now.len() {
            let r = self.half_rotation[i];
            self.half[i] = self.now[i] * r;
            self.next[i] = self.half[i] * r;
        }
    }

    fn advance(&mut self, field: &ZpfForce) {
        self.step += 1;
        if self.step % PHASOR_ANCHOR == 0 {
            field.phasors_at(self.step as f64 * self.dt, &mut self.now);
        } else {
            std::mem::swap(&mut self.now, &mut self.next);
        }
    }

    fn slot(&self, slot: usize) -> &[C64] {
        match slot {
            0 => &self.now,
            1 => &self.half,
            _ => &self.next,
        }
    }
}

/// Position along the time grid: state after `step` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridState {
    pub step: u64,
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Rest,
    /// Dipole-approximation steady state of the sampled field.
    ZpfSteadyState,
    Given { x: f64, v: f64 },
}

/// Integrates one trajectory from `start` to step `end`, calling
/// `observe(step, x, v)` after every step.
pub fn integrate<O: FnMut(u64, f64, f64)>(
    gamma: f64,
    dt: f64,
    zpf: Option<&ZpfForce>,
    pulse: Option<&PulseDrive>,
    start: GridState,
    end: u64,
    trajectory: u64,
    mut observe: O,
) -> Result<GridState> {
    let (mut x, mut v) = (start.x, start.v);
    let mut clock = zpf.map(|f| PhasorClock::new(f, dt, start.step));
    for k in start.step..end {
        let t = k as f64 * dt;
        let times = [t, t + 0.5 * dt, t + dt];
        let pulse_on = pulse.map_or(false, |p| {
            let (lo, hi) = p.params().support();
            t + dt > lo && t < hi
        });
        let (nx, nv) = rk4_update(x, v, gamma, dt, |slot, xs| {
            let mut f = 0.0;
            if let (Some(field), Some(c)) = (zpf, clock.as_ref()) {
                f += field.sum_with_phasors(xs, c.slot(slot));
            }
            if pulse_on {
                f += pulse.map_or(0.0, |p| p.force(xs, times[slot]));
            }
            f
        });
        x = nx;
        v = nv;
        if let (Some(field), Some(c)) = (zpf, clock.as_mut()) {
            c.advance(field);
            c.prepare();
        }
        check_runaway(&TrajectoryState { x, v, t: (k + 1) as f64 * dt }, trajectory)?;
        observe(k + 1, x, v);
    }
    Ok(GridState { step: end.max(start.step), x, v })
}

/// One sample of a trajectory record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    /// (v² + x²)/2 in ħω₀
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub trajectory: u64,
    pub samples: Vec<TrajectorySample>,
}

impl TrajectoryRecord {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,v,E")?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{}", s.t, s.x, s.v, s.energy)?;
        }
        Ok(())
    }

    /// Mean energy over samples with t in [from, to].
    pub fn window_mean(&self, from: f64, to: f64) -> Option<f64> {
        let inside: Vec<f64> =
            self.samples.iter().filter(|s| s.t >= from && s.t <= to).map(|s| s.energy).collect();
        (!inside.is_empty()).then(|| inside.iter().sum::<f64>() / inside.len() as f64)
    }
}

fn initial_state(init: InitialCondition, zpf: Option<&ZpfForce>, gamma: f64) -> GridState {
    let (x, v) = match (init, zpf) {
        (InitialCondition::Rest, _) | (InitialCondition::ZpfSteadyState, None) => (0.0, 0.0),
        (InitialCondition::ZpfSteadyState, Some(f)) => f.steady_state(gamma),
        (InitialCondition::Given { x, v }, _) => (x, v),
    };
    GridState { step: 0, x, v }
}

/// Integrates from t = 0 to the end of the run and records (t, x, v, E) every
/// `stride` steps. The field realization, when present, is owned by the
/// caller; `trajectory` only labels diagnostics.
pub fn run_trajectory(
    problem: &ScaledProblem,
    zpf: Option<&ZpfForce>,
    pulse: Option<&PulseParams>,
    init: InitialCondition,
    trajectory: u64,
    stride: u64,
) -> Result<TrajectoryRecord> {
    let drive = pulse.map(|p| p.drive(problem.units.size_parameter));
    let start = initial_state(init, zpf, problem.gamma);
    let stride = stride.max(1);
    let mut samples = vec![TrajectorySample { t: 0.0, x: start.x, v: start.v, energy: 0.5 * (start.x * start.x + start.v * start.v) }];
    integrate(problem.gamma, problem.dt, zpf, drive.as_ref(), start, problem.final_step(), trajectory, |k, x, v| {
        if k % stride == 0 {
            samples.push(TrajectorySample { t: k as f64 * problem.dt, x, v, energy: 0.5 * (x * x + v * v) });
        }
    })
    .map_err(|e| context(e, trajectory))?;
    Ok(TrajectoryRecord { trajectory, samples })
}

fn context(e: Error, trajectory: u64) -> Error {
    match e {
        Error::Runaway { time, detail, .. } => Error::Runaway { trajectory, time, detail },
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    /// ħω₀
    pub mean: f64,
    /// ħω₀
    pub standard_error: f64,
    /// Trajectories that contributed.
    pub ensemble_size: usize,
    /// Trajectories dropped after running away.
    pub excluded: usize,
    /// Absolute measurement interval in scaled time.
    pub window: (f64, f64),
}

impl EnergyEstimate {
    /// Mean over groups of equal weight; the standard error treats group
    /// means as the independent samples.
    fn from_groups(groups: &[Vec<f64>], excluded: usize, window: (f64, f64)) -> Self {
        let means: Vec<f64> = groups
            .iter()
            .filter(|g| !g.is_empty())
            .map(|g| g.iter().sum::<f64>() / g.len() as f64)
            .collect();
        let n = means.len() as f64;
        let mean = means.iter().sum::<f64>() / n;
        let var = if means.len() > 1 {
            means.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let ensemble_size = groups.iter().map(Vec::len).sum();
        Self { mean, standard_error: (var / n).sqrt(), ensemble_size, excluded, window }
    }
}

struct Member {
    index: u64,
    zpf: Option<ZpfForce>,
    warm: std::result::Result<GridState, String>,
}

/// Trajectories integrated up to the step before the pulse switches on. The
/// pre-pulse evolution does not depend on the pulse, so one preparation serves
/// every carrier frequency and angle of a scan.
pub struct PreparedEnsemble {
    problem: ScaledProblem,
    zpf_on: bool,
    members: Vec<Member>,
}

impl PreparedEnsemble {
    pub fn prepare(problem: &ScaledProblem, zpf_on: bool, jobs: usize) -> Result<Self> {
        Self::prepare_with(problem, zpf_on, InitialCondition::ZpfSteadyState, jobs)
    }

    pub fn prepare_with(problem: &ScaledProblem, zpf_on: bool, init: InitialCondition, jobs: usize) -> Result<Self> {
        // Without the field every trajectory is the same deterministic solution.
        let count = if zpf_on { problem.ensemble_size } else { 1 };
        let indices: Vec<u64> = (0..count as u64).collect();
        let on_step = problem.pulse_on_step();
        let members = schedule(&indices, jobs, |_, &i| {
            let zpf = if zpf_on { Some(ZpfForce::sample(problem, i)?) } else { None };
            let start = initial_state(init, zpf.as_ref(), problem.gamma);
            let warm = integrate(problem.gamma, problem.dt, zpf.as_ref(), None, start, on_step, i, |_, _, _| {})
                .map_err(|e| e.to_string());
            Ok(Member { index: i, zpf, warm })
        })?;
        Ok(Self { problem: problem.clone(), zpf_on, members })
    }

    pub fn problem(&self) -> &ScaledProblem {
        &self.problem
    }

    /// Continues every member through the pulse and averages E over the
    /// measurement window, then over members.
    pub fn measure(&self, pulse: Option<&PulseParams>, jobs: usize) -> Result<EnergyEstimate> {
        let p = &self.problem;
        let drive = pulse.map(|pp| pp.drive(p.units.size_parameter));
        let (w0, w1) = p.window;
        let end = p.final_step();
        let results = schedule(&self.members, jobs, |_, m| {
            let warm = match &m.warm {
                Ok(w) => *w,
                Err(msg) => return Ok(Err(msg.clone())),
            };
            let (mut sum, mut count) = (0.0, 0usize);
            let r = integrate(p.gamma, p.dt, m.zpf.as_ref(), drive.as_ref(), warm, end, m.index, |k, x, v| {
                let t = k as f64 * p.dt;
                if t >= w0 && t <= w1 {
                    sum += 0.5 * (x * x + v * v);
                    count += 1;
                }
            });
            Ok(match r {
                Ok(_) if count > 0 => Ok(sum / count as f64),
                Ok(_) => Err("measurement window holds no grid points".to_string()),
                Err(e) => Err(e.to_string()),
            })
        })?;

        let strata = if self.zpf_on { p.phase_strata.max(1) } else { 1 };
        let mut groups = vec![Vec::new(); self.members.len() / strata];
        let mut excluded = 0;
        for (m, r) in self.members.iter().zip(results) {
            match r {
                Ok(v) => groups[m.index as usize / strata].push(v),
                Err(msg) => {
                    log::warn!("excluding trajectory {}: {msg}", m.index);
                    excluded += 1;
                }
            }
        }
        let total = self.members.len();
        if excluded * 20 > total || groups.iter().all(Vec::is_empty) {
            return Err(Error::TooManyExclusions { excluded, total });
        }
        if !self.zpf_on {
            groups = vec![vec![groups[0][0]]; p.ensemble_size];
        }
        Ok(EnergyEstimate::from_groups(&groups, excluded, p.window))
    }
}

/// Mean window energy over `problem.ensemble_size` trajectories, each with its
/// own field realization drawn from stream (master_seed, i).
pub fn ensemble_average(
    problem: &ScaledProblem,
    pulse: Option<&PulseParams>,
    zpf_on: bool,
    jobs: usize,
) -> Result<EnergyEstimate> {
    PreparedEnsemble::prepare(problem, zpf_on, jobs)?.measure(pulse, jobs)
}

/// Steady-state amplitude of ẍ + γẋ + x = F₀cos(ωt).
pub fn driven_amplitude(f0: f64, omega: f64, gamma: f64) -> f64 {
    f0 / ((1.0 - omega * omega).powi(2) + (gamma * omega).powi(2)).sqrt()
}

/// Time-averaged steady-state energy (x² + ẋ²)/2 under F₀cos(ωt).
pub fn driven_energy(f0: f64, omega: f64, gamma: f64) -> f64 {
    let a = driven_amplitude(f0, omega, gamma);
    0.25 * a * a * (1.0 + omega * omega)
}

/// Simulated counterpart of [`driven_energy`]: integrates from rest under
/// F₀cos(ωt), discards `settle` time units and averages E over the following
/// `average` time units.
pub fn simulate_driven_energy(f0: f64, omega: f64, gamma: f64, dt: f64, settle: f64, average: f64) -> Result<f64> {
    let mut s = TrajectoryState { x: 0.0, v: 0.0, t: 0.0 };
    let n_settle = (settle / dt).ceil() as u64;
    let n_avg = (average / dt).ceil() as u64;
    for _ in 0..n_settle {
        s = step_rk4(&s, gamma, dt, |_, t| f0 * (omega * t).cos())?;
    }
    let mut sum = 0.0;
    for _ in 0..n_avg {
        s = step_rk4(&s, gamma, dt, |_, t| f0 * (omega * t).cos())?;
        sum += s.energy();
    }
    Ok(sum / n_avg as f64)
}

/// Physical ZPF x-field scaled to the force of the scaled
/// equation of motion, for cross-checks against [`ZpfForce`].
pub fn scaled_force_from_si(realization: &ZpfRealization, osc: &OscillatorParams, x: f64, t: f64) -> f64 {
    let u = osc.units();
    let w0 = osc.natural_frequency();
    let pos = nalgebra::Vector3::new(u.length_to_si(x), 0.0, 0.0);
    let e = realization.electric_field_x(&pos, u.time_to_si(t));
    osc.charge() * e / (osc.mass() * w0 * w0 * u.length)
}
