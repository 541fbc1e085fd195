//! Chart data: radar series over the five category spokes, their planar
//! geometry, and per-service progress bars.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::aggregation::{CategoryScores, Dimensions};
use crate::catalog::Category;

/// Upper end of every weighted score.
pub const SCORE_MAX: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarAxis {
    pub category: Category,
    pub value: f64,
    pub absent: bool,
}

/// One closed polygon on the category radar. Axes are always the five
/// categories in [`Category::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarSeries {
    pub label: String,
    /// Styling hint for renderers, e.g. `"readiness"`.
    pub style: String,
    pub axes: Vec<RadarAxis>,
}

impl RadarSeries {
    pub fn from_categories(
        label: &str,
        style: &str,
        categories: &CategoryScores,
        pick: fn(&Dimensions) -> f64,
    ) -> Self {
        let axes = Category::ALL
            .into_iter()
            .map(|category| match categories.get(category) {
                Some(d) => RadarAxis {
                    category,
                    value: pick(&d),
                    absent: false,
                },
                None => RadarAxis {
                    category,
                    value: 0.0,
                    absent: true,
                },
            })
            .collect();
        RadarSeries {
            label: label.into(),
            style: style.into(),
            axes,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.value).collect()
    }
}

/// Readiness, aspiration and threshold series, in that order.
pub fn radar_series(categories: &CategoryScores) -> Vec<RadarSeries> {
    alloc::vec![
        RadarSeries::from_categories("Readiness", "readiness", categories, |d| d.readiness),
        RadarSeries::from_categories("Aspiration", "aspiration", categories, |d| d.aspiration),
        RadarSeries::from_categories("Feasibility threshold", "threshold", categories, |d| d.threshold),
    ]
}

/// Planar point, y pointing up, origin at the chart centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Unit direction of spoke `k` of `n`: the first points up and the rest
/// follow clockwise.
pub fn spoke_direction(k: usize, n: usize) -> Point {
    let angle = core::f64::consts::FRAC_PI_2 - (k as f64) * 2.0 * core::f64::consts::PI / n as f64;
    Point {
        x: libm::cos(angle),
        y: libm::sin(angle),
    }
}

/// Vertex `k` sits at 90° − k·72° and `(value / 9) · radius` from the centre.
pub fn radar_geometry(series: &RadarSeries, radius_px: f64) -> Vec<Point> {
    scaled_points(&series.values(), SCORE_MAX, radius_px)
}

pub(crate) fn scaled_points(values: &[f64], max: f64, radius: f64) -> Vec<Point> {
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let dir = spoke_direction(k, n);
            let d = v / max * radius;
            Point {
                x: dir.x * d,
                y: dir.y * d,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressBar {
    pub use_case_id: String,
    pub name: String,
    /// `None` when the use case is not considered or not yet assessed.
    pub progress: Option<f64>,
    pub considered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressReport {
    pub service_id: String,
    pub service_name: String,
    pub bars: Vec<ProgressBar>,
    pub service: Option<f64>,
}
