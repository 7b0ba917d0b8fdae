//! Line charts as standalone SVG, derived from harness CSV files.
//!
//! Output depends only on the CSV contents: no timestamps, fixed number
//! formatting, series in order of first appearance.

use std::fmt::Write as _;
use std::path::Path;

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// `error` against `n`, one line per `strategy`.
    ErrorVsN,
    /// `cr_lower`, `cr_upper` and `best_subband` against `gamma`, one set of
    /// lines per `lambda`.
    BoundsVsGamma,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Reads `csv` and writes the chart to `out`.
pub fn emit_plot(csv: &Path, kind: PlotKind, out: &Path) -> Result<(), HarnessError> {
    let mut rdr = csv::Reader::from_path(csv)?;
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::Format(format!("{}: missing column `{name}`", csv.display())))
    };
    let records: Vec<csv::StringRecord> = rdr.records().collect::<Result<_, _>>()?;
    let parse = |rec: &csv::StringRecord, c: usize, line: usize| -> Result<f64, HarnessError> {
        rec[c]
            .parse::<f64>()
            .map_err(|_| HarnessError::Format(format!("{}:{line}: `{}` is not a number", csv.display(), &rec[c])))
    };

    let mut series: Vec<Series> = Vec::new();
    let mut push = |label: String, p: (f64, f64)| match series.iter_mut().find(|s| s.label == label) {
        Some(s) => s.points.push(p),
        None => series.push(Series { label, points: vec![p] }),
    };
    let (x_label, y_label);
    match kind {
        PlotKind::ErrorVsN => {
            let (n, e, s) = (col("n")?, col("error")?, col("strategy")?);
            for (i, rec) in records.iter().enumerate() {
                push(rec[s].to_string(), (parse(rec, n, i + 2)?, parse(rec, e, i + 2)?));
            }
            x_label = "blocklength n";
            y_label = "average error";
        }
        PlotKind::BoundsVsGamma => {
            let (g, l) = (col("gamma")?, col("lambda")?);
            let cols = [("lower", col("cr_lower")?), ("upper", col("cr_upper")?), ("best band", col("best_subband")?)];
            let lambdas: Vec<&str> = {
                let mut v: Vec<&str> = Vec::new();
                for rec in &records {
                    if !v.contains(&&rec[l]) {
                        v.push(&rec[l]);
                    }
                }
                v
            };
            for (i, rec) in records.iter().enumerate() {
                let x = parse(rec, g, i + 2)?;
                for (name, c) in cols {
                    // bounds that do not apply are marked rather than numeric
                    let Ok(y) = rec[c].parse::<f64>() else { continue };
                    let label = if lambdas.len() > 1 {
                        format!("{name}, Λ={}", &rec[l])
                    } else {
                        name.to_string()
                    };
                    push(label, (x, y));
                }
            }
            x_label = "Γ";
            y_label = "rate";
        }
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    std::fs::write(out, render(&series, x_label, y_label))?;
    Ok(())
}

fn render(series: &[Series], x_label: &str, y_label: &str) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top}V{bottom}H{right}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(svg, r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 4.0);
        let _ = writeln!(svg, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, bottom + 16.0, tick(xv));
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/>"#, left - 4.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, py + 4.0, tick(yv));
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        let ly = top + 14.0 * i as f64;
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/>"#, right - 120.0, right - 100.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, right - 96.0, ly + 4.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_compact() {
        assert_eq!(tick(0.25), "0.25");
        assert_eq!(tick(16.0), "16");
        assert_eq!(tick(-0.0001), "0");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
