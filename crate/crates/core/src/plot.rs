//! Log-log scatter plots as standalone SVG, with a CSV of the raw points.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scaling::{fit_power_law, ExponentEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleHint {
    #[default]
    LogLog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries<T> {
    pub name: String,
    pub points: Vec<(T, T)>,
    pub scale: ScaleHint,
}

impl<T: Scalar> PlotSeries<T> {
    pub fn new(name: impl Into<String>, points: Vec<(T, T)>) -> Self {
        PlotSeries {
            name: name.into(),
            points,
            scale: ScaleHint::LogLog,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOutput<T> {
    pub svg: String,
    /// `series,x,y` rows for every plotted point.
    pub csv: String,
    pub fits: Vec<ExponentEstimate<T>>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 56.0;

const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Copy)]
enum Marker {
    Circle,
    Square,
    Triangle,
    Diamond,
    Cross,
    Plus,
}

const MARKERS: [Marker; 6] = [
    Marker::Circle,
    Marker::Square,
    Marker::Triangle,
    Marker::Diamond,
    Marker::Cross,
    Marker::Plus,
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn marker_svg(out: &mut String, marker: Marker, x: f64, y: f64, color: &str) {
    let r = 4.5;
    let _ = match marker {
        Marker::Circle => writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{color}"/>"#
        ),
        Marker::Square => writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.1}" height="{:.1}" fill="{color}"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        Marker::Triangle => writeln!(
            out,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
            x,
            y - r,
            x - r,
            y + r,
            x + r,
            y + r
        ),
        Marker::Diamond => writeln!(
            out,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
            x,
            y - r,
            x + r,
            y,
            x,
            y + r,
            x - r,
            y
        ),
        Marker::Cross => writeln!(
            out,
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{color}" stroke-width="2"/>"#,
            x - r,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r,
            x + r,
            y - r
        ),
        Marker::Plus => writeln!(
            out,
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{color}" stroke-width="2"/>"#,
            x - r,
            y,
            x + r,
            y,
            x,
            y - r,
            x,
            y + r
        ),
    };
}

/// Decade-aligned log10 range covering `values`.
fn decades(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v.log10()), hi.max(v.log10()))
    });
    let (lo, hi) = (lo.floor(), hi.ceil());
    if lo == hi {
        (lo, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Renders every series on shared log-scaled axes, one marker shape per
/// series, each with its fitted power law drawn dashed and its slope in the
/// legend.
pub fn emit_loglog_svg<T: Scalar>(series: &[PlotSeries<T>]) -> Result<PlotOutput<T>> {
    if series.is_empty() {
        return Err(Error::domain("no series to plot"));
    }
    for s in series {
        if let Some(&(x, y)) = s
            .points
            .iter()
            .find(|(x, y)| !(*x > T::zero() && *y > T::zero()))
        {
            return Err(Error::NonPositivePoint {
                series: s.name.clone(),
                x: x.as_f64(),
                y: y.as_f64(),
            });
        }
    }
    let fits = series
        .iter()
        .map(|s| {
            fit_power_law(&s.points).map_err(|e| match e {
                Error::DegenerateSeries { reason, .. } => Error::DegenerateSeries {
                    indicator: Some(s.name.clone()),
                    reason,
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x_lo, x_hi) = decades(all().map(|p| p.0.as_f64()));
    let (y_lo, y_hi) = decades(all().map(|p| p.1.as_f64()));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x.log10() - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| TOP + plot_h - (y.log10() - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    let axis_ticks = |svg: &mut String, lo: f64, hi: f64, horizontal: bool| {
        for k in lo as i32..=hi as i32 {
            for m in 1..10 {
                let v = f64::from(m) * 10f64.powi(k);
                let lv = v.log10();
                if lv > hi + 1e-9 {
                    break;
                }
                let major = m == 1;
                let len = if major { 6.0 } else { 3.0 };
                if horizontal {
                    let x = px(v);
                    let y0 = TOP + plot_h;
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                        y0 + len
                    );
                    if major {
                        let _ = writeln!(
                            svg,
                            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{y0}" stroke="#dddddd"/>"##
                        );
                        let _ = writeln!(
                            svg,
                            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">10<tspan dy="-5" font-size="9">{k}</tspan></text>"#,
                            y0 + 20.0
                        );
                    }
                } else {
                    let y = py(v);
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#,
                        LEFT - len
                    );
                    if major {
                        let _ = writeln!(
                            svg,
                            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
                            LEFT + plot_w
                        );
                        let _ = writeln!(
                            svg,
                            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">10<tspan dy="-5" font-size="9">{k}</tspan></text>"#,
                            LEFT - 9.0,
                            y + 4.0
                        );
                    }
                }
            }
        }
    };
    axis_ticks(&mut svg, x_lo, x_hi, true);
    axis_ticks(&mut svg, y_lo, y_hi, false);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">scale (log)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(16,{:.2}) rotate(-90)" text-anchor="middle">value (log)</text>"#,
        TOP + plot_h / 2.0
    );

    let mut csv = String::from("series,x,y\n");
    for (idx, (s, fit)) in series.iter().zip(&fits).enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let marker = MARKERS[idx % MARKERS.len()];
        let name = escape(&s.name);
        let _ = writeln!(svg, r#"<g class="series" data-name="{name}">"#);

        let (xmin, xmax) = s
            .points
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
                (lo.min(p.0.as_f64()), hi.max(p.0.as_f64()))
            });
        let line_y = |x: f64| (fit.intercept.as_f64() + fit.slope.as_f64() * x.ln()).exp();
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="5,3"/>"#,
            px(xmin),
            py(line_y(xmin)),
            px(xmax),
            py(line_y(xmax))
        );
        for &(x, y) in &s.points {
            marker_svg(&mut svg, marker, px(x.as_f64()), py(y.as_f64()), color);
            let field = if s.name.contains([',', '"']) {
                format!("\"{}\"", s.name.replace('"', "\"\""))
            } else {
                s.name.clone()
            };
            let _ = writeln!(csv, "{field},{x},{y}");
        }
        let ly = TOP + 14.0 + 20.0 * idx as f64;
        let lx = WIDTH - RIGHT + 16.0;
        marker_svg(&mut svg, marker, lx, ly - 4.0, color);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" class="slope">{name}: slope {:.2}</text>"#,
            lx + 12.0,
            fit.slope
        );
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(PlotOutput { svg, csv, fits })
}
