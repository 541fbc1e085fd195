//! Core model and arithmetic for C-ITS infrastructure readiness assessment.
//!
//! The crate is `no_std` (with `alloc`). It holds the service / use case /
//! enabler taxonomy, Likert scoring, category and use-case rollups,
//! feasibility blockers, what-if overlays, snapshot diffs, and the radar,
//! impact and progress chart renderers. File formats, persistence, the CLI
//! and the HTTP API live in the `crf` crate.

#![no_std]

extern crate alloc;

pub mod aggregation;
pub mod builtin;
pub mod bundle;
pub mod catalog;
pub mod diff;
pub mod feasibility;
pub mod project;
pub mod reporting;
pub mod scoring;
pub mod svg;
pub mod whatif;

pub use aggregation::{
    category_rollup, overall_rollup, service_impact, service_progress, use_case_progress,
    use_case_rollup, AggregationError, CategoryScores, Dimensions, ImpactFactor, ImpactLevel,
    ImpactMeans, ImpactProfile, OverallScores, ServiceProgress, UseCaseScores,
};
pub use builtin::{builtin_croads_catalog, demo_assessments, demo_project};
pub use bundle::{ReportBundle, ScoreSheet, UseCaseReport, SCHEMA_VERSION};
pub use catalog::{
    resolve_scenario, trace_enablers, validate_catalog, Catalog, CatalogError, Category, Enabler,
    FlowStep, MessageFlow, Provider, Scenario, Service, UseCase, ValidationError, ValidationReport,
};
pub use diff::{diff_projects, DiffError, DiffReport};
pub use feasibility::{find_blockers, Blocker, FeasibilityError, FeasibilityVerdict};
pub use project::{Project, ProjectError};
pub use reporting::{radar_geometry, radar_series, Point, ProgressBar, ProgressReport, RadarSeries};
pub use scoring::{
    level_points, score_enabler, weighted_score, CostLevel, EnablerAssessment, EnablerScores,
    Importance, LikertLevel, ScoringError,
};
pub use whatif::{apply_overrides, Dimension, Override, WhatIfError, WhatIfRequest};

/// Rounds to one decimal place, halves away from zero. Used for every
/// `display` value; computation always keeps full precision.
pub fn round1(value: f64) -> f64 {
    libm::round(value * 10.0) / 10.0
}
