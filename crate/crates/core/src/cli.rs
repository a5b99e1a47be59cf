//! `zpfosc` command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::classical::ensemble_average;
use crate::config::{format_f64, nondimensionalize, ScaledProblem, SimulationConfig};
use crate::error::{Error, Result};
use crate::output::{
    read_spectrum, select, write_equilibrium, write_peaks, write_spectrum, RunContext, RunManifest,
};
use crate::spectrum::{
    angle_sweep, compare_spectra, default_angles, default_grid, find_peaks, linear_grid, refined_grid,
    resolve_amplitude, scan, Source, SpectrumPoint,
};
use crate::svg::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zpfosc", version, about = "Excitation spectra of a charged oscillator: zero-point-field dynamics versus quantum propagation")]
pub struct Cli {
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Overrides master_seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Frequency grid `start:stop:count` in ω₀; disables refinement.
    #[arg(long, global = true)]
    pub frequencies: Option<String>,
    /// Overrides pulse_theta_rad.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Global phase offsets per field realization.
    #[arg(long, global = true, default_value_t = 1)]
    pub phase_strata: usize,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean zero-point-field energy without a pulse.
    Equilibrium,
    /// Classical spectrum with the zero-point field.
    ClassicalSpectrum,
    /// Quantum spectrum.
    QmSpectrum,
    /// Classical spectrum without the zero-point field.
    BareSpectrum,
    /// Quantum and classical spectra at θ_p = 0, π/6, π/4, π/3, π/2.
    AngleSweep,
    /// Compares the first source of two spectrum CSVs.
    Compare { a: PathBuf, b: PathBuf },
    /// Renders a spectrum CSV as SVG.
    Plot {
        input: PathBuf,
        /// SVG path; defaults to the input name with .svg in the output directory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Equilibrium => "equilibrium",
            Command::ClassicalSpectrum => "classical-spectrum",
            Command::QmSpectrum => "qm-spectrum",
            Command::BareSpectrum => "bare-spectrum",
            Command::AngleSweep => "angle-sweep",
            Command::Compare { .. } => "compare",
            Command::Plot { .. } => "plot",
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Parses `argv` and runs; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn parse_frequencies(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::InvalidParameter(format!("--frequencies expects start:stop:count, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    linear_grid(start, stop, count)
}

fn load_config(cli: &Cli) -> Result<SimulationConfig> {
    let mut cfg = match &cli.config {
        Some(p) => SimulationConfig::from_file(p)?,
        None => SimulationConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(theta) = cli.theta {
        cfg.pulse_theta_rad = theta;
    }
    cfg.phase_strata = cli.phase_strata;
    Ok(cfg)
}

fn context(cli: &Cli, cfg: &SimulationConfig) -> RunContext {
    let mut arguments = Vec::new();
    if let Some(f) = &cli.frequencies {
        arguments.push(format!("--frequencies={f}"));
    }
    if cli.phase_strata != 1 {
        arguments.push(format!("--phase-strata={}", cli.phase_strata));
    }
    match &cli.command {
        Command::Compare { a, b } => {
            arguments.push(a.display().to_string());
            arguments.push(b.display().to_string());
        }
        Command::Plot { input, .. } => arguments.push(input.display().to_string()),
        _ => {}
    }
    RunContext { subcommand: cli.command.name().to_string(), arguments, config: cfg.clone() }
}

struct Session<'a> {
    cli: &'a Cli,
    ctx: RunContext,
    outputs: Vec<PathBuf>,
}

impl Session<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.cli.out.join(name);
        self.outputs.push(p.clone());
        p
    }

    fn grid(&self, problem: &ScaledProblem, theta: f64) -> Result<Vec<f64>> {
        match &self.cli.frequencies {
            Some(spec) => parse_frequencies(spec),
            None => refined_grid(problem, &default_grid(), theta, self.cli.jobs),
        }
    }

    fn spectrum(&mut self, source: Source, stem: &str) -> Result<()> {
        let problem = resolve_amplitude(&nondimensionalize(&self.ctx.config)?)?;
        let grid = self.grid(&problem, problem.pulse.theta)?;
        let points = scan(&problem, &grid, source, self.cli.jobs)?;
        let path = self.path(&format!("{stem}.csv"));
        write_spectrum(&path, &self.ctx, &points)?;
        let peaks = find_peaks(&points)?;
        let path = self.path(&format!("{stem}-peaks.csv"));
        write_peaks(&path, &self.ctx, &[(source, peaks)])
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let started = Instant::now();
    if cli.jobs == 0 {
        return Err(Error::InvalidParameter("--jobs must be at least 1".into()));
    }
    let cfg = load_config(cli)?;
    fs::create_dir_all(&cli.out)?;
    let mut session = Session { cli, ctx: context(cli, &cfg), outputs: Vec::new() };

    match &cli.command {
        Command::Equilibrium => {
            let problem = nondimensionalize(&cfg)?;
            let est = ensemble_average(&problem, None, true, cli.jobs)?;
            println!("mean energy {} ± {} ħω₀ over {} trajectories", est.mean, est.standard_error, est.ensemble_size);
            let path = session.path("equilibrium.csv");
            write_equilibrium(&path, &session.ctx, &est)?;
        }
        Command::ClassicalSpectrum => session.spectrum(Source::ClassicalZpf, "classical-spectrum")?,
        Command::QmSpectrum => session.spectrum(Source::Quantum, "qm-spectrum")?,
        Command::BareSpectrum => session.spectrum(Source::ClassicalBare, "bare-spectrum")?,
        Command::AngleSweep => {
            let problem = resolve_amplitude(&nondimensionalize(&cfg)?)?;
            let grid = session.grid(&problem, std::f64::consts::PI / 4.0)?;
            let sweep = angle_sweep(&problem, &default_angles(), &grid, cli.jobs)?;
            let mut points: Vec<SpectrumPoint> = Vec::new();
            let mut reports = Vec::new();
            for a in &sweep {
                points.extend(&a.quantum);
                points.extend(&a.classical);
                reports.push((Source::Quantum, find_peaks(&a.quantum)?));
                reports.push((Source::ClassicalZpf, find_peaks(&a.classical)?));
            }
            let path = session.path("angle-sweep.csv");
            write_spectrum(&path, &session.ctx, &points)?;
            let path = session.path("angle-sweep-peaks.csv");
            write_peaks(&path, &session.ctx, &reports)?;
        }
        Command::Compare { a, b } => {
            let (pa, pb) = (first_source(&read_spectrum(a)?, a)?, first_source(&read_spectrum(b)?, b)?);
            let c = compare_spectra(&pa, &pb)?;
            let mut text = session.ctx.header();
            text.push_str(&format!("# weighted_rms_hw0 = {}\n", format_f64(c.weighted_rms)));
            text.push_str("position_a,position_b,position_difference,height_ratio\n");
            for m in &c.matches {
                let row = [m.position_a, m.position_b, m.position_difference, m.height_ratio].map(format_f64);
                text.push_str(&(row.join(",") + "\n"));
                println!(
                    "peak {:.4} vs {:.4}: Δ = {:.4}, height ratio {:.4}",
                    m.position_a, m.position_b, m.position_difference, m.height_ratio
                );
            }
            println!("weighted rms difference {} ħω₀", c.weighted_rms);
            let path = session.path("comparison.csv");
            fs::write(path, text)?;
        }
        Command::Plot { input, svg } => {
            let points = read_spectrum(input)?;
            let doc = render_svg(&points)?;
            let target = match svg {
                Some(p) => p.clone(),
                None => {
                    let stem = input.file_stem().map_or("spectrum".into(), |s| s.to_string_lossy().into_owned());
                    cli.out.join(format!("{stem}.svg"))
                }
            };
            session.outputs.push(target.clone());
            fs::write(&target, doc)?;
        }
    }

    let manifest = RunManifest {
        context: session.ctx.clone(),
        jobs: cli.jobs,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs: session.outputs.clone(),
    };
    manifest.write(&cli.out.join(format!("{}.manifest", cli.command.name())))
}

fn first_source(points: &[SpectrumPoint], path: &Path) -> Result<Vec<SpectrumPoint>> {
    let first = points
        .first()
        .ok_or_else(|| Error::Csv { row: 0, message: format!("{} holds no spectrum rows", path.display()) })?;
    let pts = select(points, first.source);
    let mut seen = pts.iter().map(|p| p.theta.to_bits()).collect::<Vec<_>>();
    seen.dedup();
    if seen.len() > 1 {
        return Err(Error::InvalidParameter(format!("{} mixes several angles; compare needs one", path.display())));
    }
    Ok(pts)
}
