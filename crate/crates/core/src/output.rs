//! CSV files, run manifests and run identifiers.
//!
//! Every CSV starts with `#` header lines carrying the run id, the random
//! generator, the physical constants and the configuration echo, followed by
//! an ordinary header row. Floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::classical::EnergyEstimate;
use crate::config::{format_f64, SimulationConfig};
use crate::error::{Error, Result};
use crate::model::{ELEMENTARY_CHARGE, ELECTRON_MASS, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::rng::GENERATOR_NAME;
use crate::spectrum::{PeakReport, Source, SpectrumPoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SPECTRUM_COLUMNS: [&str; 5] = ["omega_ratio", "energy_hw0", "stderr_hw0", "source", "theta_p_rad"];
pub const PEAK_COLUMNS: [&str; 4] = ["position", "height", "width", "source"];
pub const EQUILIBRIUM_COLUMNS: [&str; 6] =
    ["mean_hw0", "stderr_hw0", "ensemble_size", "excluded", "window_start", "window_end"];

/// Identity of a run: everything that determines its outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunContext {
    pub subcommand: String,
    /// Canonical argument list without output directory and job count.
    pub arguments: Vec<String>,
    pub config: SimulationConfig,
}

impl RunContext {
    /// First 16 hex digits of SHA-256 over version, subcommand, arguments and
    /// configuration echo.
    pub fn run_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(VERSION.as_bytes());
        h.update([0]);
        h.update(self.subcommand.as_bytes());
        for a in &self.arguments {
            h.update([0]);
            h.update(a.as_bytes());
        }
        h.update([0]);
        h.update(self.config.to_text().as_bytes());
        h.finalize().iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    pub fn header(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# run_id = {}", self.run_id());
        let _ = writeln!(out, "# version = {VERSION}");
        let _ = writeln!(out, "# subcommand = {}", self.subcommand);
        let _ = writeln!(out, "# arguments = {}", self.arguments.join(" "));
        let _ = writeln!(out, "# generator = {GENERATOR_NAME}");
        for (k, v) in constants() {
            let _ = writeln!(out, "# constant {k} = {}", format_f64(v));
        }
        for line in self.config.to_text().lines() {
            let _ = writeln!(out, "# config {line}");
        }
        out
    }
}

pub fn constants() -> [(&'static str, f64); 5] {
    [
        ("hbar_J_s", HBAR),
        ("c_m_s", SPEED_OF_LIGHT),
        ("epsilon0_F_m", EPSILON_0),
        ("e_C", ELEMENTARY_CHARGE),
        ("m_e_kg", ELECTRON_MASS),
    ]
}

fn csv_error(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    Error::Csv { row, message: e.to_string() }
}

fn write_table(path: &Path, header: &str, columns: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut buf = header.as_bytes().to_vec();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(columns).map_err(csv_error)?;
        for r in rows {
            w.write_record(&r).map_err(csv_error)?;
        }
        w.flush()?;
    }
    fs::write(path, buf)?;
    Ok(())
}

pub fn write_spectrum(path: &Path, ctx: &RunContext, points: &[SpectrumPoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|p| {
            vec![
                format_f64(p.omega_ratio),
                format_f64(p.mean_energy),
                format_f64(p.standard_error),
                p.source.tag().to_string(),
                format_f64(p.theta),
            ]
        })
        .collect();
    write_table(path, &ctx.header(), &SPECTRUM_COLUMNS, rows)
}

pub fn write_peaks(path: &Path, ctx: &RunContext, reports: &[(Source, PeakReport)]) -> Result<()> {
    let mut rows = Vec::new();
    for (source, r) in reports {
        for i in 0..r.len() {
            rows.push(vec![
                format_f64(r.positions[i]),
                format_f64(r.heights[i]),
                format_f64(r.widths[i]),
                source.tag().to_string(),
            ]);
        }
    }
    write_table(path, &ctx.header(), &PEAK_COLUMNS, rows)
}

pub fn write_equilibrium(path: &Path, ctx: &RunContext, est: &EnergyEstimate) -> Result<()> {
    let row = vec![
        format_f64(est.mean),
        format_f64(est.standard_error),
        format!("{}", est.ensemble_size),
        format!("{}", est.excluded),
        format_f64(est.window.0),
        format_f64(est.window.1),
    ];
    write_table(path, &ctx.header(), &EQUILIBRIUM_COLUMNS, vec![row])
}

/// Reads a spectrum CSV. Errors carry the 1-based line number of the
/// offending row.
pub fn read_spectrum(path: &Path) -> Result<Vec<SpectrumPoint>> {
    let text = fs::read(path)?;
    parse_spectrum(&text)
}

pub fn parse_spectrum(bytes: &[u8]) -> Result<Vec<SpectrumPoint>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).has_headers(true).from_reader(bytes);
    let headers = r.headers().map_err(csv_error)?.clone();
    let header_line = r.position().line() as usize;
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    if cols != SPECTRUM_COLUMNS {
        return Err(Error::Csv { row: header_line, message: format!("expected columns {SPECTRUM_COLUMNS:?}, got {cols:?}") });
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |what: &str| Error::Csv { row, message: format!("cannot parse {what}") };
        let num = |i: usize, what: &str| -> Result<f64> {
            rec.get(i).and_then(|s| s.trim().parse::<f64>().ok()).filter(|v| v.is_finite()).ok_or_else(|| bad(what))
        };
        let source = rec.get(3).ok_or_else(|| bad("source"))?.trim().parse::<Source>().map_err(|_| bad("source"))?;
        out.push(SpectrumPoint {
            omega_ratio: num(0, "omega_ratio")?,
            mean_energy: num(1, "energy_hw0")?,
            standard_error: num(2, "stderr_hw0")?,
            source,
            theta: num(4, "theta_p_rad")?,
        });
    }
    Ok(out)
}

/// Points of one source, in file order.
pub fn select(points: &[SpectrumPoint], source: Source) -> Vec<SpectrumPoint> {
    points.iter().filter(|p| p.source == source).copied().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub context: RunContext,
    pub jobs: usize,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let ctx = &self.context;
        let mut out = String::new();
        let _ = writeln!(out, "run_id = {}", ctx.run_id());
        let _ = writeln!(out, "version = {VERSION}");
        let _ = writeln!(out, "subcommand = {}", ctx.subcommand);
        let _ = writeln!(out, "arguments = {}", ctx.arguments.join(" "));
        let _ = writeln!(out, "generator = {GENERATOR_NAME}");
        let _ = writeln!(out, "master_seed = {}", ctx.config.master_seed);
        let _ = writeln!(out, "jobs = {}", self.jobs);
        let _ = writeln!(out, "wall_clock_seconds = {}", self.wall_clock_seconds);
        for (k, v) in constants() {
            let _ = writeln!(out, "constant.{k} = {}", format_f64(v));
        }
        for p in &self.outputs {
            let _ = writeln!(out, "output = {}", p.display());
        }
        let _ = writeln!(out, "[config]");
        out.push_str(&ctx.config.to_text());
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// The configuration echoed in a manifest.
pub fn config_from_manifest(text: &str) -> Result<SimulationConfig> {
    let (_, cfg) = text
        .split_once("[config]\n")
        .ok_or_else(|| Error::Config { line: 0, message: "manifest has no [config] section".into() })?;
    SimulationConfig::parse(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RunContext {
        RunContext { subcommand: "qm-spectrum".into(), arguments: vec!["--theta".into(), "0.5".into()], config: SimulationConfig::default() }
    }

    fn sample_points() -> Vec<SpectrumPoint> {
        vec![
            SpectrumPoint { omega_ratio: 0.5, mean_energy: 0.5, standard_error: 0.0, source: Source::Quantum, theta: 0.1 },
            SpectrumPoint { omega_ratio: 1.0 / 3.0, mean_energy: 1.1, standard_error: 0.013, source: Source::ClassicalZpf, theta: 0.1 },
        ]
    }

    #[test]
    fn spectrum_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_spectrum(&path, &ctx(), &sample_points()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# run_id = "));
        assert!(text.contains("\nomega_ratio,energy_hw0,stderr_hw0,source,theta_p_rad\n"));
        assert_eq!(read_spectrum(&path).unwrap(), sample_points());
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "# x\nomega_ratio,energy_hw0,stderr_hw0,source,theta_p_rad\n1,0.5,0,quantum,0\n1.1,abc,0,quantum,0\n";
        match parse_spectrum(text.as_bytes()).unwrap_err() {
            Error::Csv { row, .. } => assert_eq!(row, 4),
            e => panic!("{e}"),
        }
        let text = "omega_ratio,energy_hw0,stderr_hw0,source,theta_p_rad\n1,0.5,0,spectral,0\n";
        assert!(matches!(parse_spectrum(text.as_bytes()), Err(Error::Csv { row: 2, .. })));
        assert!(parse_spectrum(b"a,b\n1,2\n").is_err());
    }

    #[test]
    fn run_id_ignores_nothing_that_matters() {
        let a = ctx();
        let mut b = ctx();
        assert_eq!(a.run_id(), b.run_id());
        b.config.master_seed = 2;
        assert_ne!(a.run_id(), b.run_id());
        let mut c = ctx();
        c.arguments.push("--frequencies".into());
        assert_ne!(a.run_id(), c.run_id());
        assert_eq!(a.run_id().len(), 16);
    }

    #[test]
    fn manifest_echo_reproduces_config() {
        let mut c = ctx();
        c.config.n_modes = 321;
        c.config.dt_periods = 1.0 / 37.0;
        let m = RunManifest { context: c.clone(), jobs: 3, wall_clock_seconds: 1.5, outputs: vec!["a.csv".into()] };
        assert_eq!(config_from_manifest(&m.to_text()).unwrap(), c.config);
    }
}
