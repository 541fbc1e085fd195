//! Deterministic SVG 1.1 renderers. Every coordinate is printed with two
//! decimals so identical inputs give identical bytes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::aggregation::ImpactFactor;
use crate::reporting::{scaled_points, spoke_direction, ProgressReport, RadarSeries, SCORE_MAX};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SvgError {
    #[error("at least one series is required")]
    NoSeries,
}

/// Layout variant for the impact chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImpactChart {
    #[default]
    Radar,
    Bars,
}

const MARGIN: f64 = 70.0;

fn palette(style: &str, index: usize) -> &'static str {
    match style {
        "readiness" => "#1f77b4",
        "aspiration" => "#2ca02c",
        "threshold" => "#d62728",
        "impact" => "#9467bd",
        _ => ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"][index % 5],
    }
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, "<rect class=\"background\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"#ffffff\"/>");
}

struct RadarFrame<'a> {
    labels: &'a [&'a str],
    max: f64,
    rings: &'a [f64],
}

/// Grid rings, spokes and axis labels. Returns (cx, cy, radius).
fn radar_frame(out: &mut String, size: f64, frame: &RadarFrame<'_>, absent: &[bool]) -> (f64, f64, f64) {
    let (cx, cy) = (size / 2.0, size / 2.0);
    let radius = (size / 2.0 - MARGIN).max(1.0);
    let n = frame.labels.len();

    let _ = writeln!(out, "<g class=\"grid\" fill=\"none\" stroke=\"#cccccc\">");
    for ring in frame.rings {
        let pts = scaled_points(&alloc::vec![*ring; n], frame.max, radius);
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if i == 0 { "M" } else { "L" }, cx + p.x, cy - p.y);
        }
        d.push('Z');
        let _ = writeln!(out, "<path class=\"ring\" data-value=\"{ring}\" d=\"{d}\"/>");
    }
    for k in 0..n {
        let dir = spoke_direction(k, n);
        let _ = writeln!(
            out,
            "<line class=\"spoke\" x1=\"{cx:.2}\" y1=\"{cy:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
            cx + dir.x * radius,
            cy - dir.y * radius
        );
    }
    let _ = writeln!(out, "</g>");

    for (k, label) in frame.labels.iter().enumerate() {
        let dir = spoke_direction(k, n);
        let (x, y) = (cx + dir.x * (radius + 16.0), cy - dir.y * (radius + 16.0) + 4.0);
        let anchor = if dir.x > 0.1 {
            "start"
        } else if dir.x < -0.1 {
            "end"
        } else {
            "middle"
        };
        let class = if absent.get(k).copied().unwrap_or(false) {
            "axis-label absent"
        } else {
            "axis-label"
        };
        let _ = writeln!(
            out,
            "<text class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\">{}</text>",
            escape(label)
        );
    }
    (cx, cy, radius)
}

#[allow(clippy::too_many_arguments)]
fn polygon(out: &mut String, class: &str, colour: &str, cx: f64, cy: f64, values: &[f64], max: f64, radius: f64) {
    let pts = scaled_points(values, max, radius);
    let mut points = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{:.2},{:.2}", cx + p.x, cy - p.y);
    }
    let _ = writeln!(
        out,
        "<polygon class=\"{class}\" points=\"{points}\" fill=\"{colour}\" fill-opacity=\"0.15\" stroke=\"{colour}\" stroke-width=\"2\"/>"
    );
}

/// Category radar with one polygon per series and grid rings at 3, 6 and 9.
pub fn render_radar_svg(series: &[RadarSeries], size: u32) -> Result<String, SvgError> {
    if series.is_empty() {
        return Err(SvgError::NoSeries);
    }
    let size = f64::from(size);
    let height = size + 20.0 * series.len() as f64;
    let mut out = String::new();
    header(&mut out, size, height, "Readiness by infrastructure category");

    let labels: Vec<&str> = series[0].axes.iter().map(|a| a.category.label()).collect();
    let absent: Vec<bool> = (0..labels.len())
        .map(|k| series.iter().all(|s| s.axes.get(k).is_none_or(|a| a.absent)))
        .collect();
    let frame = RadarFrame {
        labels: &labels,
        max: SCORE_MAX,
        rings: &[3.0, 6.0, 9.0],
    };
    let (cx, cy, radius) = radar_frame(&mut out, size, &frame, &absent);

    for (i, s) in series.iter().enumerate() {
        let colour = palette(&s.style, i);
        let class = alloc::format!("series series-{}", escape(&s.style));
        polygon(&mut out, &class, colour, cx, cy, &s.values(), SCORE_MAX, radius);
        for axis in s.axes.iter().filter(|a| a.absent) {
            let _ = writeln!(
                out,
                "<circle class=\"absent-marker\" data-category=\"{}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3\" fill=\"none\" stroke=\"{colour}\"/>",
                axis.category
            );
        }
    }

    let _ = writeln!(out, "<g class=\"legend\">");
    for (i, s) in series.iter().enumerate() {
        let y = size + 20.0 * i as f64;
        let _ = writeln!(
            out,
            "<rect x=\"10\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            y,
            palette(&s.style, i)
        );
        let _ = writeln!(out, "<text class=\"legend-label\" x=\"28\" y=\"{:.2}\">{}</text>", y + 10.0, escape(&s.label));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Five-factor impact chart on a 0..3 scale. `values` follow
/// [`ImpactFactor::ALL`].
pub fn render_impact_svg(values: [f64; 5], size: u32, chart: ImpactChart) -> String {
    let size = f64::from(size);
    let labels = ImpactFactor::ALL.map(ImpactFactor::label);
    let mut out = String::new();
    header(&mut out, size, size, "Use case impact");
    match chart {
        ImpactChart::Radar => {
            let frame = RadarFrame {
                labels: &labels,
                max: 3.0,
                rings: &[1.0, 2.0, 3.0],
            };
            let (cx, cy, radius) = radar_frame(&mut out, size, &frame, &[]);
            polygon(&mut out, "series series-impact", palette("impact", 0), cx, cy, &values, 3.0, radius);
        }
        ImpactChart::Bars => {
            let base = size - 40.0;
            let plot_h = (size - 80.0).max(1.0);
            let slot = (size - 40.0) / 5.0;
            let _ = writeln!(out, "<g class=\"grid\" stroke=\"#cccccc\">");
            for level in [1.0, 2.0, 3.0] {
                let y = base - level / 3.0 * plot_h;
                let _ = writeln!(out, "<line class=\"ring\" x1=\"20.00\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\"/>", size - 20.0);
            }
            let _ = writeln!(out, "</g>");
            for (k, (label, v)) in labels.iter().zip(values).enumerate() {
                let h = v / 3.0 * plot_h;
                let x = 20.0 + slot * k as f64 + slot * 0.15;
                let _ = writeln!(
                    out,
                    "<rect class=\"bar\" x=\"{x:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" fill=\"{}\"/>",
                    base - h,
                    slot * 0.7,
                    palette("impact", 0)
                );
                let _ = writeln!(
                    out,
                    "<text class=\"axis-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                    x + slot * 0.35,
                    base + 16.0,
                    escape(label)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Horizontal progress bars: one per use case of the service, then the
/// service bar.
pub fn render_progress_svg(report: &ProgressReport, width: u32) -> String {
    let width = f64::from(width);
    let row = 28.0;
    let label_w = 180.0;
    let bar_w = (width - label_w - 70.0).max(1.0);
    let height = 20.0 + row * (report.bars.len() as f64 + 1.0) + 10.0;
    let mut out = String::new();
    header(&mut out, width, height, &alloc::format!("{} service progress", report.service_name));

    let draw = |out: &mut String, i: usize, class: &str, label: &str, value: Option<f64>| {
        let y = 20.0 + row * i as f64;
        let _ = writeln!(out, "<text class=\"bar-label\" x=\"10\" y=\"{:.2}\">{}</text>", y + 14.0, escape(label));
        let _ = writeln!(
            out,
            "<rect class=\"track\" x=\"{label_w:.2}\" y=\"{y:.2}\" width=\"{bar_w:.2}\" height=\"18\" fill=\"#eeeeee\"/>"
        );
        match value {
            Some(p) => {
                let _ = writeln!(
                    out,
                    "<rect class=\"{class}\" x=\"{label_w:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"18\" fill=\"#1f77b4\"/>",
                    p.clamp(0.0, 1.0) * bar_w
                );
                let _ = writeln!(
                    out,
                    "<text class=\"bar-value\" x=\"{:.2}\" y=\"{:.2}\">{:.0}%</text>",
                    label_w + bar_w + 8.0,
                    y + 14.0,
                    libm::round(p * 100.0)
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "<text class=\"bar-value\" x=\"{:.2}\" y=\"{:.2}\">n/a</text>",
                    label_w + bar_w + 8.0,
                    y + 14.0
                );
            }
        }
    };

    for (i, bar) in report.bars.iter().enumerate() {
        let label = alloc::format!("{} {}", bar.use_case_id, bar.name);
        draw(&mut out, i, "bar", &label, bar.progress);
    }
    draw(&mut out, report.bars.len(), "bar service", &report.service_id, report.service);
    out.push_str("</svg>\n");
    out
}
