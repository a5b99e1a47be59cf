//! Static SVG line charts of spectra.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spectrum::{Source, SpectrumPoint};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

fn style(source: Source) -> (&'static str, &'static str) {
    match source {
        Source::Quantum => ("#1f4e9c", ""),
        Source::ClassicalZpf => ("#c0392b", "6 3"),
        Source::ClassicalBare => ("#2e7d32", "2 3"),
    }
}

/// Round tick spacing giving roughly `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Renders one polyline per source (grouped by source and angle), error bars
/// where the standard error is positive, a legend and labelled axes.
pub fn render_svg(points: &[SpectrumPoint]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("spectrum is empty; nothing to plot".into()));
    }
    let mut series: BTreeMap<(Source, u64), Vec<SpectrumPoint>> = BTreeMap::new();
    for p in points {
        series.entry((p.source, p.theta.to_bits())).or_default().push(*p);
    }
    let multi_angle = {
        let mut thetas: Vec<u64> = series.keys().map(|k| k.1).collect();
        thetas.dedup();
        thetas.sort();
        thetas.dedup();
        thetas.len() > 1
    };

    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (0.0f64, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.omega_ratio);
        x1 = x1.max(p.omega_ratio);
        y0 = y0.min(p.mean_energy - p.standard_error);
        y1 = y1.max(p.mean_energy + p.standard_error);
    }
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    y1 += 0.05 * (y1 - y0);

    let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let xs = tick_step(x1 - x0, 6.0);
    let mut t = (x0 / xs).ceil() * xs;
    while t <= x1 + 1e-9 * xs {
        let x = sx(t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, MARGIN_TOP + ph, MARGIN_TOP + ph + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_TOP + ph + 19.0, trim(t));
        t += xs;
    }
    let ys = tick_step(y1 - y0, 6.0);
    let mut t = (y0 / ys).ceil() * ys;
    while t <= y1 + 1e-9 * ys {
        let y = sy(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#, MARGIN_LEFT - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN_LEFT - 8.0, y + 4.0, trim(t));
        t += ys;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">pulse frequency ω_p/ω₀ (dimensionless)</text>"#,
        MARGIN_LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">energy (ħω₀)</text>"#,
        MARGIN_TOP + ph / 2.0,
        MARGIN_TOP + ph / 2.0
    );

    for (idx, ((source, theta_bits), pts)) in series.iter().enumerate() {
        let (color, dash) = style(*source);
        let dash_attr = if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
        let mut pts = pts.clone();
        pts.sort_by(|a, b| a.omega_ratio.total_cmp(&b.omega_ratio));
        let coords: Vec<String> =
            pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.omega_ratio), sy(p.mean_energy))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-source="{source}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{}"/>"#,
            coords.join(" ")
        );
        for p in pts.iter().filter(|p| p.standard_error > 0.0) {
            let x = sx(p.omega_ratio);
            let (ya, yb) = (sy(p.mean_energy - p.standard_error), sy(p.mean_energy + p.standard_error));
            let _ = writeln!(
                s,
                r#"<path class="errorbar" d="M{x:.2} {ya:.2}V{yb:.2}M{:.2} {ya:.2}h6M{:.2} {yb:.2}h6" stroke="{color}" stroke-width="1"/>"#,
                x - 3.0,
                x - 3.0
            );
        }
        let ly = MARGIN_TOP + 15.0 + 20.0 * idx as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let label = if multi_angle {
            format!("{source}, θ_p = {}", trim(f64::from_bits(*theta_bits)))
        } else {
            source.to_string()
        };
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash_attr}/><text x="{:.2}" y="{:.2}">{label}</text></g>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn trim(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(source: Source, n: usize, se: f64) -> Vec<SpectrumPoint> {
        (0..n)
            .map(|i| SpectrumPoint {
                omega_ratio: 0.5 + 0.05 * i as f64,
                mean_energy: 0.5 + (i as f64 * 0.3).sin().abs(),
                standard_error: se,
                source,
                theta: 0.785,
            })
            .collect()
    }

    #[test]
    fn empty_is_an_error() {
        assert!(render_svg(&[]).is_err());
    }

    #[test]
    fn one_source_one_polyline() {
        let svg = render_svg(&series(Source::Quantum, 61, 0.0)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(pts.split_whitespace().count(), 61);
        assert_eq!(svg.matches("class=\"errorbar\"").count(), 0);
        assert!(svg.contains("ω_p/ω₀") && svg.contains("ħω₀"));
    }

    #[test]
    fn two_sources_two_styles() {
        let mut pts = series(Source::Quantum, 10, 0.0);
        pts.extend(series(Source::ClassicalZpf, 10, 0.02));
        let svg = render_svg(&pts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("class=\"legend\"").count(), 2);
        assert_eq!(svg.matches("class=\"errorbar\"").count(), 10);
        assert!(svg.contains("stroke-dasharray"));
    }
}
