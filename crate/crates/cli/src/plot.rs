//! Dependency-free SVG line plots of sweep results.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::sweep::{SweepResult, SweepRow};

pub const WIDTH: f64 = 760.0;
pub const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
pub const BOUND_COLOR: &str = "#ff00ff";
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlotOptions {
    pub log_y: bool,
    pub title: Option<String>,
}

/// Maps data coordinates to pixels inside the plot area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub log_y: bool,
}

impl Frame {
    pub fn area() -> (f64, f64, f64, f64) {
        (LEFT, TOP, WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM)
    }

    pub fn px(&self, x: f64) -> f64 {
        let (left, _, w, _) = Self::area();
        left + (x - self.x_min) / (self.x_max - self.x_min) * w
    }

    pub fn py(&self, y: f64) -> f64 {
        let (_, top, _, h) = Self::area();
        let frac = if self.log_y {
            (y.log10() - self.y_min.log10()) / (self.y_max.log10() - self.y_min.log10())
        } else {
            (y - self.y_min) / (self.y_max - self.y_min)
        };
        top + (1.0 - frac) * h
    }

    fn fit(result: &SweepResult, log_y: bool) -> Result<Self> {
        let xs = result.rows.iter().map(|r| r.x);
        let (x_min, x_max) = min_max(xs).ok_or_else(|| CliError::Invalid("nothing to plot".into()))?;
        let (x_min, x_max) = if x_min < x_max { (x_min, x_max) } else { (x_min - 0.5, x_max + 0.5) };
        let ys: Vec<f64> = result
            .rows
            .iter()
            .flat_map(|r| [Some(r.value), Some(r.bound), r.ideal].into_iter().flatten())
            .filter(|y| y.is_finite())
            .collect();
        let frame = if log_y {
            let positive = ys.iter().copied().filter(|y| *y > 0.0);
            let (lo, hi) =
                min_max(positive).ok_or_else(|| CliError::Invalid("log scale needs positive values".into()))?;
            let mut lo = 10f64.powf(lo.log10().floor());
            let mut hi = 10f64.powf(hi.log10().ceil());
            if lo == hi {
                lo /= 10.0;
                hi *= 10.0;
            }
            Frame { x_min, x_max, y_min: lo, y_max: hi, log_y }
        } else {
            let (lo, hi) = min_max(ys.iter().copied()).unwrap_or((0.0, 1.0));
            let lo = lo.min(0.0);
            let hi = if hi > lo { hi * 1.05 } else { lo + 1.0 };
            Frame { x_min, x_max, y_min: lo, y_max: hi, log_y }
        };
        Ok(frame)
    }

    fn y_ticks(&self) -> Vec<f64> {
        if self.log_y {
            let (a, b) = (self.y_min.log10().round() as i32, self.y_max.log10().round() as i32);
            (a..=b).map(|e| 10f64.powi(e)).collect()
        } else {
            nice_ticks(self.y_min, self.y_max)
        }
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn points(frame: &Frame, rows: &[SweepRow], y: impl Fn(&SweepRow) -> Option<f64>) -> String {
    rows.iter()
        .filter_map(|r| y(r).filter(|v| v.is_finite() && (!frame.log_y || *v > 0.0)).map(|v| (r.x, v)))
        .map(|(x, v)| format!("{:.2},{:.2}", frame.px(x), frame.py(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg(result: &SweepResult, options: &PlotOptions) -> Result<String> {
    let frame = Frame::fit(result, options.log_y)?;
    let (left, top, w, h) = Frame::area();
    let mut s = String::new();
    let scale = if frame.log_y { "log" } else { "linear" };
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" data-y-scale="{scale}" data-x-min="{}" data-x-max="{}" data-y-min="{}" data-y-max="{}">"#,
        frame.x_min, frame.x_max, frame.y_min, frame.y_max
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect class="plot-area" x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
    );
    let title = options.title.clone().unwrap_or_else(|| result.target.name().to_string());
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        left + w / 2.0,
        escape_xml(&title)
    );

    s.push_str("<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n");
    for x in nice_ticks(frame.x_min, frame.x_max) {
        let px = frame.px(x);
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, top + h, top + h + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, top + h + 18.0, tick_label(x));
    }
    for y in frame.y_ticks() {
        let py = frame.py(y);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/>"#, left - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 8.0, py + 4.0, tick_label(y));
    }
    s.push_str("</g>\n");
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        left + w / 2.0,
        HEIGHT - 15.0,
        escape_xml(result.axis.name())
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 {:.1})">{}</text>"#,
        top + h / 2.0,
        top + h / 2.0,
        escape_xml(result.target.value_column())
    );

    let groups = result.series();
    let mut legend: Vec<(String, String, bool)> = Vec::new();
    let mut drawn_bounds: Vec<Vec<f64>> = Vec::new();
    for (i, (series, rows)) in groups.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let label = match (result.series_axis, series) {
            (Some(a), Some(v)) => format!("{} = {}", a.name(), tick_label(*v)),
            _ => result.target.value_column().to_string(),
        };
        let series_attr = series.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<polyline class="curve" data-series="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            escape_xml(&series_attr),
            points(&frame, rows, |r| Some(r.value))
        );
        if rows.iter().any(|r| r.ideal.is_some()) {
            let _ = writeln!(
                s,
                r#"<polyline class="ideal" data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6,4" points="{}"/>"#,
                escape_xml(&series_attr),
                points(&frame, rows, |r| r.ideal)
            );
        }
        legend.push((label, color.to_string(), false));
        let bounds: Vec<f64> = rows.iter().map(|r| r.bound).collect();
        if !drawn_bounds.contains(&bounds) {
            let _ = writeln!(
                s,
                r#"<polyline class="bound" data-bound="N^2 t^2" fill="none" stroke="{BOUND_COLOR}" stroke-width="1.5" stroke-dasharray="2,3" points="{}"/>"#,
                points(&frame, rows, |r| Some(r.bound))
            );
            drawn_bounds.push(bounds);
        }
    }
    if result.has_ideal() {
        legend.push(("ideal, same state".into(), "#555555".into(), true));
    }
    legend.push(("N\u{b2}t\u{b2}".into(), BOUND_COLOR.into(), true));

    s.push_str("<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n");
    for (i, (label, color, dashed)) in legend.iter().enumerate() {
        let y = top + 10.0 + 20.0 * i as f64;
        let x = left + w + 15.0;
        let dash = if *dashed { r#" stroke-dasharray="2,3""# } else { "" };
        let _ = writeln!(s, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"{dash}/>"#, x + 25.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, x + 32.0, y + 4.0, escape_xml(label));
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn emit_plot(result: &SweepResult, path: &Path, options: &PlotOptions) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(CliError::Invalid("SVG output path is empty".into()));
    }
    let svg = render_svg(result, options)?;
    std::fs::write(path, svg).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape_xml("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(0.0, 2625.0);
        assert_eq!(t.first(), Some(&0.0));
        assert_eq!(t.last(), Some(&2500.0));
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(1e5), "1e5");
    }

    #[test]
    fn log_frame_maps_decades_evenly() {
        let f = Frame { x_min: 0.0, x_max: 1.0, y_min: 1.0, y_max: 100.0, log_y: true };
        let (_, top, _, h) = Frame::area();
        assert!((f.py(10.0) - (top + h / 2.0)).abs() < 1e-9);
        assert!((f.py(100.0) - top).abs() < 1e-9);
    }
}
