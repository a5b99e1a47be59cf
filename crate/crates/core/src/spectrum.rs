//! Excitation spectra: pulse-frequency scans for the three sources, peak
//! detection and cross-source comparison.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::classical::{driven_energy, simulate_driven_energy, PreparedEnsemble};
use crate::config::ScaledProblem;
use crate::error::{Error, Result};
use crate::pulse::PulseParams;
use crate::quantum::{excitation_energy, STEPS_PER_FAST_PERIOD};
use crate::schedule::schedule;

/// Target energy for the automatic amplitude, in ħω₀.
pub const CALIBRATION_ENERGY: f64 = 1.5;
/// Carrier used for calibration, in ω₀.
pub const CALIBRATION_OMEGA: f64 = 1.0;
pub const CALIBRATION_THETA: f64 = PI / 4.0;

/// Refinement half-width around each detected peak, in ω₀.
pub const REFINE_HALF_WIDTH: f64 = 0.05;
pub const REFINE_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Quantum,
    ClassicalZpf,
    ClassicalBare,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::Quantum, Source::ClassicalZpf, Source::ClassicalBare];

    pub fn tag(self) -> &'static str {
        match self {
            Source::Quantum => "quantum",
            Source::ClassicalZpf => "classical-zpf",
            Source::ClassicalBare => "classical-bare",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Source::ALL
            .into_iter()
            .find(|src| src.tag() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown source tag {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    /// ω_p/ω₀
    pub omega_ratio: f64,
    /// ħω₀
    pub mean_energy: f64,
    /// ħω₀; zero for deterministic sources.
    pub standard_error: f64,
    pub source: Source,
    pub theta: f64,
}

/// `count` evenly spaced points on [start, stop].
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(start > 0.0) || !(stop > start) || !stop.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "frequency grid needs 0 < start < stop and count ≥ 2, got {start}:{stop}:{count}"
        )));
    }
    let span = stop - start;
    Ok((0..count).map(|i| start + span * i as f64 / (count - 1) as f64).collect())
}

/// 61 points on [0.5, 3.5].
pub fn default_grid() -> Vec<f64> {
    linear_grid(0.5, 3.5, 61).expect("static grid")
}

/// Extra points at a quarter of the local grid step within ±0.05 of each
/// peak position, excluding points already on the grid.
pub fn refinement_points(grid: &[f64], peaks: &[f64]) -> Vec<f64> {
    if grid.len() < 2 {
        return Vec::new();
    }
    let (lo_edge, hi_edge) = (grid[0], grid[grid.len() - 1]);
    let intervals = ((grid.len() - 1) * REFINE_FACTOR) as f64;
    let fine = (hi_edge - lo_edge) / intervals;
    let tol = fine * 1e-6;
    let mut out: Vec<f64> = Vec::new();
    for &p in peaks {
        // anchor the fine lattice to the coarse grid so that neighbouring
        // peaks share points
        let lo = ((p - REFINE_HALF_WIDTH - lo_edge) / fine).ceil() as i64;
        let hi = ((p + REFINE_HALF_WIDTH - lo_edge) / fine).floor() as i64;
        for j in lo..=hi {
            let w = lo_edge + (hi_edge - lo_edge) * j as f64 / intervals;
            if w < lo_edge || w > hi_edge {
                continue;
            }
            let known = grid.iter().chain(out.iter()).any(|g| (g - w).abs() < tol);
            if !known {
                out.push(w);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Union of two grids, sorted.
pub fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    all
}

fn quantum_energy(problem: &ScaledProblem, pulse: &PulseParams) -> Result<f64> {
    let (e, _) = excitation_energy(
        pulse,
        problem.qm_levels,
        problem.expansion_order,
        problem.units.size_parameter,
        STEPS_PER_FAST_PERIOD,
    )?;
    Ok(e)
}

/// Bisects A₀ until the quantum oscillator ends at 1.5 ħω₀ after a resonant
/// pulse at θ_p = π/4, to 1e-4 ħω₀.
pub fn calibrate_amplitude(problem: &ScaledProblem) -> Result<f64> {
    let template = problem.pulse.with_omega(CALIBRATION_OMEGA).with_theta(CALIBRATION_THETA);
    let energy = |a: f64| quantum_energy(problem, &template.with_amplitude(a));
    let (mut lo, mut hi) = (0.0, 0.01);
    let mut e_hi = energy(hi)?;
    while e_hi < CALIBRATION_ENERGY {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::InvalidParameter("amplitude calibration did not bracket the target".into()));
        }
        e_hi = energy(hi)?;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let e = energy(mid)?;
        if (e - CALIBRATION_ENERGY).abs() < 1e-4 {
            return Ok(mid);
        }
        if e < CALIBRATION_ENERGY {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Copy of `problem` with the automatic amplitude replaced by its calibrated
/// value.
pub fn resolve_amplitude(problem: &ScaledProblem) -> Result<ScaledProblem> {
    let mut p = problem.clone();
    if p.amplitude_is_auto {
        let a = calibrate_amplitude(problem)?;
        log::info!("calibrated pulse amplitude A0 = {a}");
        p.pulse = p.pulse.with_amplitude(a);
        p.amplitude_is_auto = false;
    }
    Ok(p)
}

fn check_frequencies(frequencies: &[f64], problem: &ScaledProblem) -> Result<()> {
    if frequencies.is_empty() {
        return Err(Error::InvalidParameter("frequency list is empty".into()));
    }
    if let Some(w) = frequencies.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(format!("pulse frequency must be positive, got {w}")));
    }
    let max = frequencies.iter().copied().fold(0.0, f64::max);
    problem.check_step(max)
}

fn ensure_resolved(problem: &ScaledProblem) -> Result<()> {
    if problem.amplitude_is_auto {
        return Err(Error::InvalidParameter("pulse amplitude must be resolved before scanning".into()));
    }
    Ok(())
}

/// Quantum spectrum at angle `theta`; one propagation per frequency.
pub fn scan_quantum(problem: &ScaledProblem, frequencies: &[f64], theta: f64, jobs: usize) -> Result<Vec<SpectrumPoint>> {
    ensure_resolved(problem)?;
    check_frequencies(frequencies, problem)?;
    let template = problem.pulse.with_theta(theta);
    let energies = schedule(frequencies, jobs, |_, &w| quantum_energy(problem, &template.with_omega(w)))?;
    Ok(frequencies
        .iter()
        .zip(energies)
        .map(|(&w, e)| SpectrumPoint { omega_ratio: w, mean_energy: e, standard_error: 0.0, source: Source::Quantum, theta })
        .collect())
}

/// Classical spectrum from an already prepared ensemble; the pre-pulse
/// evolution is shared by every point.
pub fn scan_prepared(
    ensemble: &PreparedEnsemble,
    source: Source,
    frequencies: &[f64],
    theta: f64,
    jobs: usize,
) -> Result<Vec<SpectrumPoint>> {
    let problem = ensemble.problem();
    ensure_resolved(problem)?;
    check_frequencies(frequencies, problem)?;
    let template = problem.pulse.with_theta(theta);
    let mut out = Vec::with_capacity(frequencies.len());
    for &w in frequencies {
        let est = ensemble.measure(Some(&template.with_omega(w)), jobs)?;
        log::debug!("{source} ω={w}: {} ± {}", est.mean, est.standard_error);
        out.push(SpectrumPoint {
            omega_ratio: w,
            mean_energy: est.mean,
            standard_error: est.standard_error,
            source,
            theta,
        });
    }
    Ok(out)
}

pub fn prepare_classical(problem: &ScaledProblem, source: Source, jobs: usize) -> Result<PreparedEnsemble> {
    match source {
        Source::ClassicalZpf => PreparedEnsemble::prepare(problem, true, jobs),
        Source::ClassicalBare => PreparedEnsemble::prepare(problem, false, jobs),
        Source::Quantum => Err(Error::InvalidParameter("quantum source has no classical ensemble".into())),
    }
}

/// One point per frequency, in input order; every source uses the pulse of
/// `problem` with only the carrier changed.
pub fn scan(problem: &ScaledProblem, frequencies: &[f64], source: Source, jobs: usize) -> Result<Vec<SpectrumPoint>> {
    let theta = problem.pulse.theta;
    match source {
        Source::Quantum => scan_quantum(problem, frequencies, theta, jobs),
        _ => {
            check_frequencies(frequencies, problem)?;
            let ensemble = prepare_classical(problem, source, jobs)?;
            scan_prepared(&ensemble, source, frequencies, theta, jobs)
        }
    }
}

/// Default-grid scan refined around the peaks of the quantum spectrum at the
/// same angle, so every source lands on the same grid.
pub fn refined_grid(problem: &ScaledProblem, coarse: &[f64], theta: f64, jobs: usize) -> Result<Vec<f64>> {
    let q = scan_quantum(problem, coarse, theta, jobs)?;
    let peaks = find_peaks(&q)?;
    Ok(merge_grids(coarse, &refinement_points(coarse, &peaks.positions)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleSpectrum {
    pub theta: f64,
    pub quantum: Vec<SpectrumPoint>,
    pub classical: Vec<SpectrumPoint>,
}

/// θ_p = 0, π/6, π/4, π/3, π/2
pub fn default_angles() -> Vec<f64> {
    vec![0.0, PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0]
}

/// Quantum and classical-zpf spectra for each angle. The classical ensemble
/// is prepared once and reused.
pub fn angle_sweep(problem: &ScaledProblem, angles: &[f64], frequencies: &[f64], jobs: usize) -> Result<Vec<AngleSpectrum>> {
    if let Some(a) = angles.iter().find(|a| !(**a >= 0.0 && **a <= PI / 2.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("angle {a} outside [0, π/2]")));
    }
    ensure_resolved(problem)?;
    check_frequencies(frequencies, problem)?;
    let ensemble = prepare_classical(problem, Source::ClassicalZpf, jobs)?;
    angles
        .iter()
        .map(|&theta| {
            Ok(AngleSpectrum {
                theta,
                quantum: scan_quantum(problem, frequencies, theta, jobs)?,
                classical: scan_prepared(&ensemble, Source::ClassicalZpf, frequencies, theta, jobs)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    /// ω_p/ω₀, ascending
    pub positions: Vec<f64>,
    /// Peak energies, ħω₀.
    pub heights: Vec<f64>,
    /// Full width at half prominence, ω₀.
    pub widths: Vec<f64>,
    /// Median energy of the spectrum, ħω₀.
    pub baseline: f64,
}

impl PeakReport {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Index of the peak nearest to `omega`.
    pub fn nearest(&self, omega: f64) -> Option<usize> {
        (0..self.len()).min_by(|&a, &b| (self.positions[a] - omega).abs().total_cmp(&(self.positions[b] - omega).abs()))
    }

    pub fn excess(&self, i: usize) -> f64 {
        self.heights[i] - self.baseline
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Vertex of the parabola through three points.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<f64> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if !(a < 0.0) {
        return None;
    }
    let b = d1 - a * (x[0] + x[1]);
    Some(-b / (2.0 * a))
}

/// Local maxima above baseline + 5·max(σ, 0.02·baseline), where the baseline
/// is the median energy. Maxima whose half-prominence intervals overlap are
/// merged into the higher one.
pub fn find_peaks(spectrum: &[SpectrumPoint]) -> Result<PeakReport> {
    if spectrum.len() < 5 {
        return Err(Error::InvalidParameter(format!("peak search needs at least 5 points, got {}", spectrum.len())));
    }
    let w: Vec<f64> = spectrum.iter().map(|p| p.omega_ratio).collect();
    let e: Vec<f64> = spectrum.iter().map(|p| p.mean_energy).collect();
    if w.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidParameter("frequency grid must be strictly increasing".into()));
    }
    let baseline = median(&e);
    let n = e.len();

    struct Candidate {
        index: usize,
        left: f64,
        right: f64,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for i in 1..n - 1 {
        let threshold = baseline + 5.0 * spectrum[i].standard_error.max(0.02 * baseline.abs());
        // first index of a plateau counts as the maximum
        let mut j = i + 1;
        while j < n && e[j] == e[i] {
            j += 1;
        }
        let is_max = e[i] > e[i - 1] && j < n && e[i] > e[j];
        if !is_max || e[i] <= threshold {
            continue;
        }
        let half = baseline + 0.5 * (e[i] - baseline);
        let mut l = i;
        while l > 0 && e[l - 1] >= half {
            l -= 1;
        }
        let left = if l == 0 { w[0] } else { w[l - 1] + (half - e[l - 1]) / (e[l] - e[l - 1]) * (w[l] - w[l - 1]) };
        let mut r = i;
        while r + 1 < n && e[r + 1] >= half {
            r += 1;
        }
        let right =
            if r + 1 == n { w[n - 1] } else { w[r] + (e[r] - half) / (e[r] - e[r + 1]) * (w[r + 1] - w[r]) };
        candidates.push(Candidate { index: i, left, right });
    }

    let mut kept: Vec<Candidate> = Vec::new();
    for c in candidates {
        match kept.last_mut() {
            Some(prev) if c.left <= prev.right => {
                if e[c.index] > e[prev.index] {
                    *prev = c;
                }
            }
            _ => kept.push(c),
        }
    }

    let mut report = PeakReport { positions: Vec::new(), heights: Vec::new(), widths: Vec::new(), baseline };
    for c in kept {
        let i = c.index;
        let center = parabola_vertex([w[i - 1], w[i], w[i + 1]], [e[i - 1], e[i], e[i + 1]])
            .filter(|x| *x > w[i - 1] && *x < w[i + 1])
            .unwrap_or(w[i]);
        report.positions.push(center);
        report.heights.push(e[i]);
        report.widths.push(c.right - c.left);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakMatch {
    pub position_a: f64,
    pub position_b: f64,
    /// position_b − position_a
    pub position_difference: f64,
    /// (height_b − baseline_b)/(height_a − baseline_a)
    pub height_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub peaks_a: PeakReport,
    pub peaks_b: PeakReport,
    /// One entry per peak of `a` when `b` has any peaks.
    pub matches: Vec<PeakMatch>,
    /// Weighted root-mean-square energy difference, ħω₀.
    pub weighted_rms: f64,
}

/// Matches each peak of `a` with the nearest peak of `b` and reports the
/// weighted RMS of b − a with weights 1/(σ_a² + σ_b²), or equal weights when
/// both spectra are noiseless.
pub fn compare_spectra(a: &[SpectrumPoint], b: &[SpectrumPoint]) -> Result<Comparison> {
    if a.len() != b.len() || a.iter().zip(b).any(|(p, q)| (p.omega_ratio - q.omega_ratio).abs() > 1e-9) {
        return Err(Error::DimensionMismatch("spectra are on different frequency grids".into()));
    }
    let peaks_a = find_peaks(a)?;
    let peaks_b = find_peaks(b)?;
    let mut matches = Vec::new();
    for i in 0..peaks_a.len() {
        if let Some(j) = peaks_b.nearest(peaks_a.positions[i]) {
            matches.push(PeakMatch {
                position_a: peaks_a.positions[i],
                position_b: peaks_b.positions[j],
                position_difference: peaks_b.positions[j] - peaks_a.positions[i],
                height_ratio: peaks_b.excess(j) / peaks_a.excess(i),
            });
        }
    }
    let noiseless = a.iter().chain(b).all(|p| p.standard_error == 0.0);
    let (mut num, mut den) = (0.0, 0.0);
    for (p, q) in a.iter().zip(b) {
        let var = p.standard_error.powi(2) + q.standard_error.powi(2);
        let weight = if noiseless {
            1.0
        } else if var > 0.0 {
            1.0 / var
        } else {
            continue;
        };
        num += weight * (q.mean_energy - p.mean_energy).powi(2);
        den += weight;
    }
    let weighted_rms = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    Ok(Comparison { peaks_a, peaks_b, matches, weighted_rms })
}

/// Analytic time-averaged energy of ẍ + γẋ + x = F₀cos(ωt) at each frequency.
pub fn steady_drive_response(f0: f64, gamma: f64, frequencies: &[f64]) -> Vec<f64> {
    frequencies.iter().map(|&w| driven_energy(f0, w, gamma)).collect()
}

/// Simulated counterpart of [`steady_drive_response`] with RK4 step `dt`,
/// settling for 12/γ before averaging over 50 drive periods.
pub fn simulate_steady_drive(f0: f64, gamma: f64, frequencies: &[f64], dt: f64, jobs: usize) -> Result<Vec<f64>> {
    schedule(frequencies, jobs, |_, &w| {
        let average = 50.0 * 2.0 * PI / w;
        simulate_driven_energy(f0, w, gamma, dt, 12.0 / gamma, average)
    })
}
