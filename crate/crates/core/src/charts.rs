//! Self-contained SVG charts from averaged trace CSVs.
//!
//! For every (strategy, mode) pair found, one file holds a 2×2 grid of line
//! charts (diameter, APL, efficiency, clustering against fraction removed)
//! with one series per scenario and a dashed rule at the rich-set fraction.
//! `degree_variance.svg` compares baseline degree variance per scenario and mode.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::parse_key_values;
use crate::resilience::format_sig6;
use crate::richclub::DEFAULT_RICH_FRACTION;

const REQUIRED: &[&str] = &[
    "scenario",
    "mode",
    "strategy",
    "frac_removed",
    "diameter",
    "apl",
    "efficiency",
    "clustering",
    "degree_variance",
];

pub const PANEL_METRICS: [(&str, &str); 4] = [
    ("diameter", "Diameter D"),
    ("apl", "Average path length"),
    ("efficiency", "Global efficiency E"),
    ("clustering", "Mean clustering C"),
];

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// One averaged trace file.
#[derive(Clone, Debug)]
pub struct Series {
    pub path: PathBuf,
    pub scenario: String,
    pub mode: String,
    pub strategy: String,
    pub frac: Vec<f64>,
    pub columns: BTreeMap<String, Vec<Option<f64>>>,
}

fn schema(path: &Path, reason: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn read_series(path: &Path) -> Result<Series> {
    let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_slice());
    let bad = |e: csv::Error| schema(path, e.to_string());
    let header: Vec<String> = reader.headers().map_err(bad)?.iter().map(str::to_string).collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(schema(path, "empty file"));
    }
    let col = |name: &str| header.iter().position(|h| h == name);
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|c| col(c).is_none()).collect();
    if !missing.is_empty() {
        return Err(schema(path, format!("missing columns: {}", missing.join(", "))));
    }
    let idx = |name: &str| col(name).expect("checked");
    let mut series = Series {
        path: path.to_path_buf(),
        scenario: String::new(),
        mode: String::new(),
        strategy: String::new(),
        frac: Vec::new(),
        columns: BTreeMap::new(),
    };
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(bad)?;
        let line = row_no + 2;
        if series.frac.is_empty() {
            series.scenario = record[idx("scenario")].to_string();
            series.mode = record[idx("mode")].to_string();
            series.strategy = record[idx("strategy")].to_string();
        }
        let num = |name: &str| -> Result<Option<f64>> {
            let raw = &record[idx(name)];
            if raw.is_empty() {
                return Ok(None);
            }
            raw.parse()
                .map(Some)
                .map_err(|_| schema(path, format!("row {line}: bad {name} value {raw:?}")))
        };
        series
            .frac
            .push(num("frac_removed")?.ok_or_else(|| schema(path, format!("row {line}: empty frac_removed")))?);
        for name in REQUIRED.iter().skip(4) {
            let v = num(name)?;
            series.columns.entry(name.to_string()).or_default().push(v);
        }
    }
    if series.frac.is_empty() {
        return Err(schema(path, "no data rows"));
    }
    Ok(series)
}

/// Rich-set fraction recorded in a run manifest next to (or one level above) `csv_dir`.
pub fn manifest_rich_fraction(csv_dir: &Path) -> Result<f64> {
    for candidate in [csv_dir.join("manifest.txt"), csv_dir.join("..").join("manifest.txt")] {
        if candidate.is_file() {
            let text = std::fs::read_to_string(&candidate).map_err(|e| Error::io(&candidate, e))?;
            for (k, v) in parse_key_values(&text, &candidate.display().to_string())? {
                if k == "rich_fraction" {
                    return v
                        .parse()
                        .map_err(|_| schema(&candidate, format!("bad rich_fraction {v:?}")));
                }
            }
        }
    }
    Ok(DEFAULT_RICH_FRACTION)
}

fn natural_key(label: &str) -> (String, u64, String) {
    let digits_at = label.find(|c: char| c.is_ascii_digit()).unwrap_or(label.len());
    let (prefix, rest) = label.split_at(digits_at);
    let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let num = rest[..end].parse().unwrap_or(0);
    (prefix.to_string(), num, rest[end..].to_string())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Rounded tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= target as f64)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step + 1e-9).floor() as i64;
    (start..=end).map(|k| k as f64 * step).collect()
}

struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        self.x + (v - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.w
    }

    fn py(&self, v: f64) -> f64 {
        self.y + self.h - (v - self.y_range.0) / (self.y_range.1 - self.y_range.0) * self.h
    }

    fn axes(&self, svg: &mut String, title: &str, x_label: &str) {
        let _ = writeln!(
            svg,
            r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#333"/>"##,
            self.x, self.y, self.w, self.h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
            self.x + self.w / 2.0,
            self.y - 8.0,
            escape(title)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"#,
            self.x + self.w / 2.0,
            self.y + self.h + 32.0,
            escape(x_label)
        );
        for t in ticks(self.x_range.0, self.x_range.1, 5) {
            let px = self.px(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="#333"/><text x="{px:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"##,
                self.y + self.h,
                self.y + self.h + 4.0,
                self.y + self.h + 16.0,
                format_sig6(t)
            );
        }
        for t in ticks(self.y_range.0, self.y_range.1, 5) {
            let py = self.py(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#333"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"##,
                self.x - 4.0,
                self.x,
                self.x - 6.0,
                py + 3.5,
                format_sig6(t)
            );
        }
    }
}

fn value_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Renders one strategy/mode panel grid. Returns the SVG text and the number
/// of series drawn per panel.
pub fn render_panels(series: &[&Series], rich_fraction: f64, title: &str) -> (String, usize) {
    let (pw, ph) = (420.0, 280.0);
    let (ml, mt) = (70.0, 60.0);
    let (gap_x, gap_y) = (90.0, 90.0);
    let legend_w = 140.0;
    let width = ml + 2.0 * pw + gap_x + legend_w + 20.0;
    let height = mt + 2.0 * ph + gap_y + 60.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="16" font-weight="bold">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    let x_max = series
        .iter()
        .flat_map(|s| s.frac.iter().copied())
        .fold(rich_fraction, f64::max);
    for (p, (col, label)) in PANEL_METRICS.iter().enumerate() {
        let frame = Frame {
            x: ml + (p % 2) as f64 * (pw + gap_x),
            y: mt + (p / 2) as f64 * (ph + gap_y),
            w: pw,
            h: ph,
            x_range: (0.0, x_max.max(1e-9)),
            y_range: value_range(series.iter().flat_map(|s| s.columns[*col].iter().flatten().copied())),
        };
        frame.axes(&mut svg, label, "fraction of nodes removed");
        let _ = writeln!(svg, r#"<g class="panel" data-metric="{col}">"#);
        for (k, s) in series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let _ = writeln!(
                svg,
                r#"<g class="series" data-scenario="{}" stroke="{color}" fill="none" stroke-width="1.5">"#,
                escape(&s.scenario)
            );
            // gaps split the line into separate runs
            let mut run: Vec<String> = Vec::new();
            let flush = |run: &mut Vec<String>, svg: &mut String| {
                if run.len() > 1 {
                    let _ = writeln!(svg, r#"<polyline points="{}"/>"#, run.join(" "));
                } else if let Some(pt) = run.first() {
                    let (x, y) = pt.split_once(',').unwrap();
                    let _ = writeln!(svg, r#"<circle cx="{x}" cy="{y}" r="1.5" fill="{color}"/>"#);
                }
                run.clear();
            };
            for (x, y) in s.frac.iter().zip(&s.columns[*col]) {
                match y {
                    Some(y) => run.push(format!("{:.2},{:.2}", frame.px(*x), frame.py(*y))),
                    None => flush(&mut run, &mut svg),
                }
            }
            flush(&mut run, &mut svg);
            let _ = writeln!(svg, "</g>");
        }
        let rx = frame.px(rich_fraction);
        let _ = writeln!(
            svg,
            r##"<line class="rich-fraction" x1="{rx:.2}" y1="{:.1}" x2="{rx:.2}" y2="{:.1}" stroke="#555" stroke-dasharray="6,4" data-x="{rich_fraction}"/>"##,
            frame.y,
            frame.y + frame.h
        );
        let _ = writeln!(svg, "</g>");
    }
    let lx = ml + 2.0 * pw + gap_x + 10.0;
    for (k, s) in series.iter().enumerate() {
        let y = mt + 10.0 + 20.0 * k as f64;
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="3"/><text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            y + 4.0,
            escape(&s.scenario)
        );
    }
    svg.push_str("</svg>\n");
    (svg, series.len())
}

/// Grouped bars of baseline (zero-removal) degree variance per scenario and mode.
pub fn render_degree_variance(series: &[Series]) -> String {
    let mut scenarios: Vec<String> = Vec::new();
    let mut modes: Vec<String> = Vec::new();
    let mut values: BTreeMap<(String, String), f64> = BTreeMap::new();
    for s in series {
        if !scenarios.contains(&s.scenario) {
            scenarios.push(s.scenario.clone());
        }
        if !modes.contains(&s.mode) {
            modes.push(s.mode.clone());
        }
        if let Some(Some(v)) = s.columns["degree_variance"].first() {
            values.entry((s.scenario.clone(), s.mode.clone())).or_insert(*v);
        }
    }
    scenarios.sort_by_key(|s| natural_key(s));
    modes.sort();
    let (w, h) = (80.0 * scenarios.len() as f64 + 200.0, 380.0);
    let frame = Frame {
        x: 70.0,
        y: 50.0,
        w: w - 200.0,
        h: h - 110.0,
        x_range: (0.0, scenarios.len() as f64),
        y_range: (0.0, values.values().fold(0.0f64, |a, &b| a.max(b)).max(1e-9) * 1.1),
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#333"/>"##,
        frame.x, frame.y, frame.w, frame.h
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="30" text-anchor="middle" font-size="15" font-weight="bold">Degree variance after thickening</text>"#,
        w / 2.0
    );
    for t in ticks(frame.y_range.0, frame.y_range.1, 5) {
        let py = frame.py(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#333"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"##,
            frame.x - 4.0,
            frame.x,
            frame.x - 6.0,
            py + 3.5,
            format_sig6(t)
        );
    }
    let slot = frame.w / scenarios.len().max(1) as f64;
    let bar = 0.8 * slot / modes.len().max(1) as f64;
    for (si, sc) in scenarios.iter().enumerate() {
        let cx = frame.x + slot * (si as f64 + 0.5);
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"#,
            frame.y + frame.h + 16.0,
            escape(sc)
        );
        for (mi, mode) in modes.iter().enumerate() {
            if let Some(&v) = values.get(&(sc.clone(), mode.clone())) {
                let x = frame.x + slot * si as f64 + 0.1 * slot + bar * mi as f64;
                let y = frame.py(v);
                let _ = writeln!(
                    svg,
                    r#"<rect class="bar" data-scenario="{}" data-mode="{}" data-value="{}" x="{x:.2}" y="{y:.2}" width="{bar:.2}" height="{:.2}" fill="{}"/>"#,
                    escape(sc),
                    escape(mode),
                    format_sig6(v),
                    frame.y + frame.h - y,
                    PALETTE[mi % PALETTE.len()]
                );
            }
        }
    }
    for (mi, mode) in modes.iter().enumerate() {
        let y = frame.y + 10.0 + 20.0 * mi as f64;
        let lx = frame.x + frame.w + 20.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx:.1}" y="{:.1}" width="14" height="14" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            y - 7.0,
            PALETTE[mi % PALETTE.len()],
            lx + 20.0,
            y + 4.0,
            escape(mode)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Reads every averaged CSV under `csv_dir` (or its `avg/` subdirectory) and
/// writes the chart files into `out_dir`. Nothing is written unless every
/// input parses.
pub fn emit_charts(csv_dir: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let source = if csv_dir.join("avg").is_dir() {
        csv_dir.join("avg")
    } else {
        csv_dir.to_path_buf()
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(&source)
        .map_err(|e| Error::io(&source, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(schema(&source, "no averaged CSV files found"));
    }
    let series: Vec<Series> = files.iter().map(|p| read_series(p)).collect::<Result<_>>()?;
    let rich_fraction = manifest_rich_fraction(csv_dir)?;

    let mut groups: BTreeMap<(String, String), Vec<&Series>> = BTreeMap::new();
    for s in &series {
        groups
            .entry((s.strategy.clone(), s.mode.clone()))
            .or_default()
            .push(s);
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for ((strategy, mode), mut members) in groups {
        members.sort_by_key(|s| natural_key(&s.scenario));
        let title = format!("{strategy} / {mode} thickening");
        let (svg, _) = render_panels(&members, rich_fraction, &title);
        let path = out_dir.join(format!("{strategy}_{mode}.svg"));
        std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    let path = out_dir.join("degree_variance.svg");
    std::fs::write(&path, render_degree_variance(&series)).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}
