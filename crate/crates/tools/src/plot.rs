//! Minimal SVG plots: axes, scatter and line series, and an entropy colour
//! bar. Plots are drawn from the same rows that were written to disk.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

/// Entropy colours: `t = S / S_Page` clamped to `[0, 1]`, dark red for low
/// entanglement to pale blue for thermal states.
pub fn entropy_color(t: f64) -> String {
    const LOW: [f64; 3] = [178.0, 24.0, 43.0];
    const HIGH: [f64; 3] = [146.0, 197.0, 222.0];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 1.0 };
    let mix = |k: usize| (LOW[k] + (HIGH[k] - LOW[k]) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Style {
    Markers { radius: f64 },
    Line { dashed: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    /// One colour for the series, or one per point.
    pub colors: Colors,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Colors {
    Uniform(String),
    PerPoint(Vec<String>),
}

impl Series {
    pub fn markers(label: &str, points: Vec<(f64, f64)>, color: &str) -> Self {
        Self {
            label: label.into(),
            points,
            style: Style::Markers { radius: 2.5 },
            colors: Colors::Uniform(color.into()),
        }
    }

    pub fn line(label: &str, points: Vec<(f64, f64)>, color: &str, dashed: bool) -> Self {
        Self {
            label: label.into(),
            points,
            style: Style::Line { dashed },
            colors: Colors::Uniform(color.into()),
        }
    }

    fn color(&self, k: usize) -> &str {
        match &self.colors {
            Colors::Uniform(c) => c,
            Colors::PerPoint(cs) => cs.get(k).map_or("#000000", String::as_str),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Horizontal reference lines `(y, label)`.
    pub guides: Vec<(f64, String)>,
    /// Draw the `S / S_Page` colour bar.
    pub entropy_bar: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Roughly five round tick values covering `[lo, hi]`.
pub fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-3..1e4).contains(&a) {
        let text = format!("{x:.3}");
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.1e}")
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Self::default()
        }
    }

    pub fn render(&self) -> String {
        let points = || self.series.iter().flat_map(|s| s.points.iter());
        let (x0, x1) = bounds(points().map(|p| p.0));
        let (y0, y1) = bounds(points().map(|p| p.1).chain(self.guides.iter().map(|g| g.0)));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b2}" stroke="black"/><text x="{x:.2}" y="{ty}" text-anchor="middle">{}</text>"#,
                tick_label(t),
                b = TOP + plot_h,
                b2 = TOP + plot_h + 5.0,
                ty = TOP + plot_h + 18.0
            );
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                svg,
                r#"<line x1="{l2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{tx}" y="{yy:.2}" text-anchor="end">{}</text>"#,
                tick_label(t),
                l2 = LEFT - 5.0,
                tx = LEFT - 8.0,
                yy = y + 4.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{cy}" text-anchor="middle" transform="rotate(-90 18 {cy})">{}</text>"#,
            escape(&self.y_label),
            cy = TOP + plot_h / 2.0
        );
        for (y, label) in &self.guides {
            let py = sy(*y);
            let _ = writeln!(
                svg,
                r##"<line x1="{LEFT}" y1="{py:.2}" x2="{r}" y2="{py:.2}" stroke="#555555" stroke-dasharray="4 3"/><text x="{tx}" y="{ty:.2}" fill="#555555">{}</text>"##,
                escape(label),
                r = LEFT + plot_w,
                tx = LEFT + 4.0,
                ty = py - 4.0
            );
        }
        for series in &self.series {
            match series.style {
                Style::Markers { radius } => {
                    for (k, &(x, y)) in series.points.iter().enumerate() {
                        if x.is_finite() && y.is_finite() {
                            let _ = writeln!(
                                svg,
                                r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{}"/>"#,
                                sx(x),
                                sy(y),
                                series.color(k)
                            );
                        }
                    }
                }
                Style::Line { dashed } => {
                    let path: Vec<String> = series
                        .points
                        .iter()
                        .filter(|(x, y)| x.is_finite() && y.is_finite())
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                        .collect();
                    let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(
                        svg,
                        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                        path.join(" "),
                        series.color(0)
                    );
                }
            }
        }
        let mut legend_y = TOP + 10.0;
        for series in self.series.iter().filter(|s| !s.label.is_empty()) {
            let lx = LEFT + plot_w + 10.0;
            let _ = writeln!(
                svg,
                r#"<rect x="{lx}" y="{:.2}" width="10" height="10" fill="{}"/><text x="{}" y="{:.2}" font-size="11">{}</text>"#,
                legend_y - 8.0,
                series.color(0),
                lx + 14.0,
                legend_y + 1.0,
                escape(&series.label)
            );
            legend_y += 16.0;
        }
        if self.entropy_bar {
            let bx = LEFT + plot_w + 20.0;
            let top = legend_y + 20.0;
            let height = (TOP + plot_h - top).max(60.0);
            let cells = 24;
            for k in 0..cells {
                let t = 1.0 - k as f64 / (cells - 1) as f64;
                let _ = writeln!(
                    svg,
                    r#"<rect x="{bx}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#,
                    top + height * k as f64 / cells as f64,
                    height / cells as f64 + 0.5,
                    entropy_color(t)
                );
            }
            let _ = writeln!(
                svg,
                r#"<text x="{tx}" y="{:.2}" font-size="11">1</text><text x="{tx}" y="{:.2}" font-size="11">0</text><text x="{bx}" y="{:.2}" font-size="11">S/S_Page</text>"#,
                top + 8.0,
                top + height,
                top - 6.0,
                tx = bx + 18.0
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}
