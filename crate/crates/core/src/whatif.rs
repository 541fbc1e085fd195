//! What-if overlays: level overrides applied to a copy of the assessments.
//! Nothing here touches the stored project.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bundle::{use_case_report, ReportError, UseCaseReport};
use crate::catalog::Catalog;
use crate::project::Project;
use crate::scoring::{EnablerAssessment, LikertLevel, ScoringError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Importance,
    Readiness,
    Aspiration,
    Threshold,
    Cost,
}

impl Dimension {
    pub const ALL: [Dimension; 5] = [
        Dimension::Importance,
        Dimension::Readiness,
        Dimension::Aspiration,
        Dimension::Threshold,
        Dimension::Cost,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Importance => "importance",
            Dimension::Readiness => "readiness",
            Dimension::Aspiration => "aspiration",
            Dimension::Threshold => "threshold",
            Dimension::Cost => "cost",
        }
    }

    /// Current level of this dimension in an assessment.
    pub fn get(self, a: &EnablerAssessment) -> LikertLevel {
        match self {
            Dimension::Importance => a.importance.level(),
            Dimension::Readiness => a.readiness,
            Dimension::Aspiration => a.aspiration,
            Dimension::Threshold => a.threshold,
            Dimension::Cost => a.cost,
        }
    }

    pub fn set(self, a: &mut EnablerAssessment, level: LikertLevel) -> Result<(), ScoringError> {
        match self {
            Dimension::Importance => a.importance = level.try_into()?,
            Dimension::Readiness => a.readiness = level,
            Dimension::Aspiration => a.aspiration = level,
            Dimension::Threshold => a.threshold = level,
            Dimension::Cost => a.cost = level,
        }
        Ok(())
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = WhatIfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| WhatIfError::UnknownDimension(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Override {
    pub enabler_id: String,
    pub dimension: Dimension,
    pub level: LikertLevel,
}

impl Override {
    /// Parses `dimension=level`, e.g. `readiness=high`.
    pub fn parse(enabler_id: &str, assignment: &str) -> Result<Self, WhatIfError> {
        let (dim, level) = assignment
            .split_once('=')
            .ok_or_else(|| WhatIfError::Syntax(assignment.into()))?;
        Ok(Override {
            enabler_id: enabler_id.into(),
            dimension: dim.parse()?,
            level: level.parse()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIfRequest {
    pub use_case_id: String,
    #[serde(default)]
    pub overrides: Vec<Override>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WhatIfError {
    #[error("override '{0}' is not of the form dimension=level")]
    Syntax(String),
    #[error("unknown dimension '{0}'")]
    UnknownDimension(String),
    #[error("enabler '{0}' has no assessment to override")]
    UnknownEnabler(String),
    #[error(transparent)]
    Level(#[from] ScoringError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl WhatIfError {
    pub fn code(&self) -> &'static str {
        match self {
            WhatIfError::Syntax(_) => "override-syntax",
            WhatIfError::UnknownDimension(_) => "unknown-dimension",
            WhatIfError::UnknownEnabler(_) => "unknown-enabler",
            WhatIfError::Level(ScoringError::ImportanceNone) => "importance-none-forbidden",
            WhatIfError::Level(_) => "invalid-level",
            WhatIfError::Report(_) => "report",
        }
    }
}

/// Returns a copy of `assessments` with every override applied in order.
pub fn apply_overrides(
    assessments: &[EnablerAssessment],
    overrides: &[Override],
) -> Result<Vec<EnablerAssessment>, WhatIfError> {
    let mut out = assessments.to_vec();
    for o in overrides {
        let target = out
            .iter_mut()
            .find(|a| a.enabler_id == o.enabler_id)
            .ok_or_else(|| WhatIfError::UnknownEnabler(o.enabler_id.clone()))?;
        o.dimension.set(target, o.level)?;
    }
    Ok(out)
}

/// Use-case report computed on an overlaid copy of the project.
pub fn what_if(project: &Project, catalog: &Catalog, request: &WhatIfRequest) -> Result<UseCaseReport, WhatIfError> {
    let uc = project
        .resolve_use_case(catalog, &request.use_case_id)
        .map_err(ReportError::from)?;
    let mut overlay = project.clone();
    let changed = apply_overrides(project.assessments_for(&uc.id), &request.overrides)?;
    overlay.assessments.insert(uc.id.clone(), changed);
    Ok(use_case_report(&overlay, catalog, &uc.id)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin_croads_catalog, demo_assessments, demo_project, ids};

    #[test]
    fn parse_assignment() {
        let o = Override::parse(ids::RESPONSE_PLAN, "readiness=high").unwrap();
        assert_eq!(o.dimension, Dimension::Readiness);
        assert_eq!(o.level, LikertLevel::High);
        assert!(matches!(Override::parse("x", "readiness"), Err(WhatIfError::Syntax(_))));
        assert!(matches!(Override::parse("x", "speed=high"), Err(WhatIfError::UnknownDimension(_))));
    }

    #[test]
    fn empty_overlay_is_identity() {
        let a = demo_assessments();
        assert_eq!(apply_overrides(&a, &[]).unwrap(), a);
    }

    #[test]
    fn importance_none_forbidden() {
        let o = Override {
            enabler_id: ids::CELLULAR.into(),
            dimension: Dimension::Importance,
            level: LikertLevel::None,
        };
        let err = apply_overrides(&demo_assessments(), &[o]).unwrap_err();
        assert_eq!(err.code(), "importance-none-forbidden");
    }

    #[test]
    fn response_plan_raise() {
        let catalog = builtin_croads_catalog();
        let project = demo_project();
        let before = project.clone();
        let req = WhatIfRequest {
            use_case_id: ids::DEMO_SCENARIO.into(),
            overrides: alloc::vec![Override::parse(ids::RESPONSE_PLAN, "readiness=high").unwrap()],
        };
        let r = what_if(&project, &catalog, &req).unwrap();
        assert_eq!(r.scores.categories.operation.unwrap().readiness, 9.0);
        // (6 + 9 + 4.5 + 6.5 + 9) / 5
        assert!((r.scores.total_readiness - 7.0).abs() < 1e-12);
        assert_eq!(project, before);
    }

    #[test]
    fn override_unknown_enabler() {
        let o = Override {
            enabler_id: "ghost".into(),
            dimension: Dimension::Cost,
            level: LikertLevel::Low,
        };
        assert_eq!(
            apply_overrides(&demo_assessments(), &[o]),
            Err(WhatIfError::UnknownEnabler("ghost".into()))
        );
    }
}
