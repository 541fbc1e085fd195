//! Feasibility check: which enablers sit below their threshold.
//!
//! An enabler blocks when its weighted readiness score is strictly below
//! its weighted threshold score; equality is feasible.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::catalog::Category;
use crate::scoring::{EnablerScores, Importance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeasibilityError {
    #[error("no enabler scores to check")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocker {
    pub enabler_id: String,
    pub category: Category,
    pub readiness_score: u8,
    pub threshold_score: u8,
    /// `threshold_score - readiness_score`, always positive.
    pub gap: u8,
    pub importance: Importance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub use_case_id: String,
    pub feasible: bool,
    /// Largest gap first, then higher importance, then enabler id.
    pub blockers: Vec<Blocker>,
    /// Minimum of `readiness_score - threshold_score` over all enablers.
    pub margin: i16,
}

pub fn find_blockers(
    use_case_id: &str,
    scores: &[EnablerScores],
) -> Result<FeasibilityVerdict, FeasibilityError> {
    let margin = scores
        .iter()
        .map(|s| i16::from(s.readiness_score) - i16::from(s.threshold_score))
        .min()
        .ok_or(FeasibilityError::Empty)?;

    let mut blockers: Vec<Blocker> = scores
        .iter()
        .filter(|s| s.readiness_score < s.threshold_score)
        .map(|s| Blocker {
            enabler_id: s.enabler_id.clone(),
            category: s.category,
            readiness_score: s.readiness_score,
            threshold_score: s.threshold_score,
            gap: s.threshold_score - s.readiness_score,
            importance: s.importance,
        })
        .collect();
    blockers.sort_by(|a, b| {
        (Reverse(a.gap), Reverse(a.importance), &a.enabler_id)
            .cmp(&(Reverse(b.gap), Reverse(b.importance), &b.enabler_id))
    });

    Ok(FeasibilityVerdict {
        use_case_id: use_case_id.into(),
        feasible: blockers.is_empty(),
        blockers,
        margin,
    })
}
