//! Differences between two states of a project: level changes per enabler
//! and the resulting movement of category values, use-case totals and the
//! overall gap.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::aggregation::{overall_rollup, Dimensions, UseCaseScores};
use crate::bundle::use_case_report;
use crate::catalog::{Catalog, Category};
use crate::project::Project;
use crate::scoring::{level_points, weighted_score, EnablerAssessment, LikertLevel};
use crate::whatif::Dimension;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffError {
    #[error("snapshots use different catalogs ('{a}' vs '{b}')")]
    Incomparable { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelChange {
    pub dimension: Dimension,
    pub from: Option<LikertLevel>,
    pub to: Option<LikertLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Added,
    Removed,
    Changed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnablerChange {
    pub use_case_id: String,
    pub enabler_id: String,
    pub kind: ChangeKind,
    pub changes: Vec<LevelChange>,
    pub readiness_score_delta: i16,
    pub aspiration_score_delta: i16,
    pub threshold_score_delta: i16,
    pub cost_delta: i16,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryDelta {
    pub category: Category,
    /// `None` on a side where the category has no enablers.
    pub before: Option<Dimensions>,
    pub after: Option<Dimensions>,
    /// `after - before`, present only when both sides are.
    pub delta: Option<Dimensions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseDelta {
    pub use_case_id: String,
    pub categories: Vec<CategoryDelta>,
    pub total_readiness_delta: Option<f64>,
    pub total_aspiration_delta: Option<f64>,
    pub total_threshold_delta: Option<f64>,
    pub deployment_cost_delta: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallDelta {
    pub total_readiness_delta: f64,
    pub total_aspiration_delta: f64,
    pub gap_before: f64,
    pub gap_after: f64,
    pub gap_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffReport {
    pub use_cases_added: Vec<String>,
    pub use_cases_removed: Vec<String>,
    /// use case id -> (before, after) scenario id
    pub scenario_changes: BTreeMap<String, (Option<String>, Option<String>)>,
    pub enablers: Vec<EnablerChange>,
    pub use_cases: Vec<UseCaseDelta>,
    pub overall: Option<OverallDelta>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.use_cases_added.is_empty()
            && self.use_cases_removed.is_empty()
            && self.scenario_changes.is_empty()
            && self.enablers.is_empty()
            && self.use_cases.is_empty()
    }
}

const LEVEL_DIMENSIONS: [Dimension; 5] = Dimension::ALL;

fn scores_of(a: &EnablerAssessment) -> [i16; 4] {
    [
        i16::from(weighted_score(a.importance, a.readiness)),
        i16::from(weighted_score(a.importance, a.aspiration)),
        i16::from(weighted_score(a.importance, a.threshold)),
        i16::from(level_points(a.cost)),
    ]
}

fn enabler_change(
    use_case_id: &str,
    enabler_id: &str,
    before: Option<&EnablerAssessment>,
    after: Option<&EnablerAssessment>,
) -> Option<EnablerChange> {
    let kind = match (before, after) {
        (None, None) => return None,
        (None, Some(_)) => ChangeKind::Added,
        (Some(_), None) => ChangeKind::Removed,
        (Some(_), Some(_)) => ChangeKind::Changed,
    };
    let changes: Vec<LevelChange> = LEVEL_DIMENSIONS
        .into_iter()
        .filter_map(|d| {
            let from = before.map(|a| d.get(a));
            let to = after.map(|a| d.get(a));
            (from != to).then_some(LevelChange { dimension: d, from, to })
        })
        .collect();
    if changes.is_empty() {
        return None;
    }
    let b = before.map_or([0; 4], scores_of);
    let a = after.map_or([0; 4], scores_of);
    Some(EnablerChange {
        use_case_id: use_case_id.into(),
        enabler_id: enabler_id.into(),
        kind,
        changes,
        readiness_score_delta: a[0] - b[0],
        aspiration_score_delta: a[1] - b[1],
        threshold_score_delta: a[2] - b[2],
        cost_delta: a[3] - b[3],
    })
}

fn sub(a: Dimensions, b: Dimensions) -> Dimensions {
    Dimensions {
        readiness: a.readiness - b.readiness,
        aspiration: a.aspiration - b.aspiration,
        threshold: a.threshold - b.threshold,
    }
}

fn use_case_delta(id: &str, before: Option<&UseCaseScores>, after: Option<&UseCaseScores>) -> Option<UseCaseDelta> {
    if before == after {
        return None;
    }
    let categories = Category::ALL
        .into_iter()
        .filter_map(|c| {
            let b = before.and_then(|s| s.categories.get(c));
            let a = after.and_then(|s| s.categories.get(c));
            (b != a).then(|| CategoryDelta {
                category: c,
                before: b,
                after: a,
                delta: b.zip(a).map(|(b, a)| sub(a, b)),
            })
        })
        .collect();
    let both = before.zip(after);
    Some(UseCaseDelta {
        use_case_id: id.into(),
        categories,
        total_readiness_delta: both.map(|(b, a)| a.total_readiness - b.total_readiness),
        total_aspiration_delta: both.map(|(b, a)| a.total_aspiration - b.total_aspiration),
        total_threshold_delta: both.map(|(b, a)| a.total_threshold - b.total_threshold),
        deployment_cost_delta: both.map(|(b, a)| i64::from(a.deployment_cost) - i64::from(b.deployment_cost)),
    })
}

/// Evaluable use cases of a project, keyed by id. Use cases whose
/// assessments cannot be scored are left out.
fn evaluate(project: &Project, catalog: &Catalog) -> BTreeMap<String, UseCaseScores> {
    project
        .considered_use_cases
        .iter()
        .filter(|id| !project.assessments_for(id).is_empty())
        .filter_map(|id| use_case_report(project, catalog, id).ok())
        .map(|r| (r.use_case_id, r.scores))
        .collect()
}

/// Compares two states of the same project. Both must target the same
/// catalog version.
pub fn diff_projects(a: &Project, b: &Project, catalog: &Catalog) -> Result<DiffReport, DiffError> {
    if a.catalog_version != b.catalog_version {
        return Err(DiffError::Incomparable {
            a: a.catalog_version.clone(),
            b: b.catalog_version.clone(),
        });
    }

    let set_a: BTreeSet<&str> = a.considered_use_cases.iter().map(String::as_str).collect();
    let set_b: BTreeSet<&str> = b.considered_use_cases.iter().map(String::as_str).collect();
    let use_cases_added = set_b.difference(&set_a).map(|s| String::from(*s)).collect();
    let use_cases_removed = set_a.difference(&set_b).map(|s| String::from(*s)).collect();

    let mut scenario_changes = BTreeMap::new();
    let keys: BTreeSet<&String> = a.active_scenarios.keys().chain(b.active_scenarios.keys()).collect();
    for key in keys {
        let (x, y) = (a.active_scenarios.get(key), b.active_scenarios.get(key));
        if x != y {
            scenario_changes.insert(key.clone(), (x.cloned(), y.cloned()));
        }
    }

    let mut enablers = Vec::new();
    let ucs: BTreeSet<&String> = a.assessments.keys().chain(b.assessments.keys()).collect();
    for uc in ucs {
        let (la, lb) = (a.assessments_for(uc), b.assessments_for(uc));
        let mut ids: Vec<&str> = Vec::new();
        for x in la.iter().chain(lb) {
            if !ids.contains(&x.enabler_id.as_str()) {
                ids.push(&x.enabler_id);
            }
        }
        for id in ids {
            let before = la.iter().find(|x| x.enabler_id == id);
            let after = lb.iter().find(|x| x.enabler_id == id);
            enablers.extend(enabler_change(uc, id, before, after));
        }
    }

    let (eval_a, eval_b) = (evaluate(a, catalog), evaluate(b, catalog));
    let all: BTreeSet<&String> = eval_a.keys().chain(eval_b.keys()).collect();
    let use_cases = all
        .into_iter()
        .filter_map(|id| use_case_delta(id, eval_a.get(id), eval_b.get(id)))
        .collect();

    let overall_of = |m: &BTreeMap<String, UseCaseScores>| {
        let v: Vec<UseCaseScores> = m.values().cloned().collect();
        overall_rollup(&v).ok()
    };
    let overall = overall_of(&eval_a).zip(overall_of(&eval_b)).map(|(x, y)| OverallDelta {
        total_readiness_delta: y.total_readiness - x.total_readiness,
        total_aspiration_delta: y.total_aspiration - x.total_aspiration,
        gap_before: x.gap,
        gap_after: y.gap,
        gap_delta: y.gap - x.gap,
    });

    Ok(DiffReport {
        use_cases_added,
        use_cases_removed,
        scenario_changes,
        enablers,
        use_cases,
        overall,
    })
}
