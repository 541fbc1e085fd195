//! Likert scoring of individual enablers.
//!
//! Levels map to points none=0, low=1, medium=2, high=3. Readiness,
//! aspiration and threshold are weighted by the enabler's importance
//! (low=1, medium=2, high=3), so each weighted score lands in
//! {0, 1, 2, 3, 4, 6, 9}. Cost is reported as bare points.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Category};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LikertLevel {
    None,
    Low,
    Medium,
    High,
}

/// Cost uses the same four-step scale and point mapping.
pub type CostLevel = LikertLevel;

impl LikertLevel {
    pub const ALL: [LikertLevel; 4] = [
        LikertLevel::None,
        LikertLevel::Low,
        LikertLevel::Medium,
        LikertLevel::High,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LikertLevel::None => "none",
            LikertLevel::Low => "low",
            LikertLevel::Medium => "medium",
            LikertLevel::High => "high",
        }
    }

    /// The next level up, saturating at `High`.
    pub fn raised(self) -> LikertLevel {
        match self {
            LikertLevel::None => LikertLevel::Low,
            LikertLevel::Low => LikertLevel::Medium,
            _ => LikertLevel::High,
        }
    }
}

impl fmt::Display for LikertLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LikertLevel {
    type Err = ScoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LikertLevel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ScoringError::UnknownLevel(s.into()))
    }
}

/// Importance weighting. There is no `None`: every listed enabler is
/// required by its use case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Importance {
    Low,
    Medium,
    High,
}

impl Importance {
    pub const ALL: [Importance; 3] = [Importance::Low, Importance::Medium, Importance::High];

    pub fn weight(self) -> u8 {
        match self {
            Importance::Low => 1,
            Importance::Medium => 2,
            Importance::High => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        self.level().as_str()
    }

    pub fn level(self) -> LikertLevel {
        match self {
            Importance::Low => LikertLevel::Low,
            Importance::Medium => LikertLevel::Medium,
            Importance::High => LikertLevel::High,
        }
    }
}

impl TryFrom<LikertLevel> for Importance {
    type Error = ScoringError;

    fn try_from(level: LikertLevel) -> Result<Self, Self::Error> {
        match level {
            LikertLevel::None => Err(ScoringError::ImportanceNone),
            LikertLevel::Low => Ok(Importance::Low),
            LikertLevel::Medium => Ok(Importance::Medium),
            LikertLevel::High => Ok(Importance::High),
        }
    }
}

impl FromStr for Importance {
    type Err = ScoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<LikertLevel>()?.try_into()
    }
}

impl fmt::Display for Importance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoringError {
    #[error("unknown enabler '{0}'")]
    UnknownEnabler(String),
    #[error("unknown level '{0}' (expected none, low, medium or high)")]
    UnknownLevel(String),
    #[error("importance may not be 'none'")]
    ImportanceNone,
}

/// One analyst's Likert inputs for one enabler of one use case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnablerAssessment {
    pub enabler_id: String,
    pub importance: Importance,
    pub readiness: LikertLevel,
    pub aspiration: LikertLevel,
    pub threshold: LikertLevel,
    pub cost: CostLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl EnablerAssessment {
    pub fn new(
        enabler_id: impl Into<String>,
        importance: Importance,
        readiness: LikertLevel,
        aspiration: LikertLevel,
        threshold: LikertLevel,
        cost: CostLevel,
    ) -> Self {
        Self {
            enabler_id: enabler_id.into(),
            importance,
            readiness,
            aspiration,
            threshold,
            cost,
            note: None,
        }
    }
}

/// Wire form of an assessment where importance is still an unchecked
/// Likert level, so that `"none"` can be reported as a rule violation
/// rather than a parse failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessmentInput {
    pub enabler_id: String,
    pub importance: LikertLevel,
    pub readiness: LikertLevel,
    pub aspiration: LikertLevel,
    pub threshold: LikertLevel,
    pub cost: CostLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TryFrom<AssessmentInput> for EnablerAssessment {
    type Error = ScoringError;

    fn try_from(input: AssessmentInput) -> Result<Self, Self::Error> {
        Ok(EnablerAssessment {
            importance: input.importance.try_into()?,
            enabler_id: input.enabler_id,
            readiness: input.readiness,
            aspiration: input.aspiration,
            threshold: input.threshold,
            cost: input.cost,
            note: input.note,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnablerScores {
    pub enabler_id: String,
    pub category: Category,
    pub importance: Importance,
    pub readiness_score: u8,
    pub aspiration_score: u8,
    pub threshold_score: u8,
    pub cost_points: u8,
}

pub fn level_points(level: LikertLevel) -> u8 {
    match level {
        LikertLevel::None => 0,
        LikertLevel::Low => 1,
        LikertLevel::Medium => 2,
        LikertLevel::High => 3,
    }
}

pub fn weighted_score(importance: Importance, level: LikertLevel) -> u8 {
    importance.weight() * level_points(level)
}

pub fn score_enabler(
    assessment: &EnablerAssessment,
    catalog: &Catalog,
) -> Result<EnablerScores, ScoringError> {
    let enabler = catalog
        .enabler(&assessment.enabler_id)
        .ok_or_else(|| ScoringError::UnknownEnabler(assessment.enabler_id.clone()))?;
    let importance = assessment.importance;
    Ok(EnablerScores {
        enabler_id: assessment.enabler_id.clone(),
        category: enabler.category,
        importance,
        readiness_score: weighted_score(importance, assessment.readiness),
        aspiration_score: weighted_score(importance, assessment.aspiration),
        threshold_score: weighted_score(importance, assessment.threshold),
        cost_points: level_points(assessment.cost),
    })
}

pub fn score_all(
    assessments: &[EnablerAssessment],
    catalog: &Catalog,
) -> Result<Vec<EnablerScores>, ScoringError> {
    assessments.iter().map(|a| score_enabler(a, catalog)).collect()
}
