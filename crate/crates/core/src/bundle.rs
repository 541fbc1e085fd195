//! Evaluation of a project into score sheets, use-case reports and the
//! aggregated [`ReportBundle`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::aggregation::{
    category_rollup, overall_rollup, service_progress, use_case_progress, use_case_rollup,
    AggregationError, ImpactProfile, OverallScores, ServiceProgress, UseCaseProgress, UseCaseScores,
};
use crate::catalog::Catalog;
use crate::feasibility::{find_blockers, FeasibilityError, FeasibilityVerdict};
use crate::project::{Project, ProjectError};
use crate::reporting::{radar_series, ProgressBar, ProgressReport, RadarSeries};
use crate::scoring::{score_all, EnablerScores, ScoringError};

/// Version tag carried by every JSON document the tool emits.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Project(#[from] ProjectError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Aggregation(#[from] AggregationError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error("unknown service '{0}'")]
    UnknownService(String),
}

/// Per-enabler and rolled-up scores of one use case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSheet {
    pub use_case_id: String,
    pub scenario_id: Option<String>,
    pub enablers: Vec<EnablerScores>,
    pub scores: UseCaseScores,
    /// Enablers of the use case without an assessment yet.
    pub unassessed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCaseReport {
    pub use_case_id: String,
    pub scenario_id: Option<String>,
    pub enablers: Vec<EnablerScores>,
    pub scores: UseCaseScores,
    pub unassessed: Vec<String>,
    pub progress: f64,
    pub feasibility: FeasibilityVerdict,
    pub radar: Vec<RadarSeries>,
}

impl UseCaseReport {
    pub fn sheet(&self) -> ScoreSheet {
        ScoreSheet {
            use_case_id: self.use_case_id.clone(),
            scenario_id: self.scenario_id.clone(),
            enablers: self.enablers.clone(),
            scores: self.scores.clone(),
            unassessed: self.unassessed.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Usecase,
    Service,
    Overall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema_version: String,
    pub scope: Scope,
    pub use_case_scores: BTreeMap<String, UseCaseScores>,
    pub enabler_scores: BTreeMap<String, Vec<EnablerScores>>,
    pub service_progress: BTreeMap<String, ServiceProgress>,
    pub overall: Option<OverallScores>,
    pub impacts: BTreeMap<String, ImpactProfile>,
    pub feasibility: BTreeMap<String, FeasibilityVerdict>,
    /// Considered use cases left out because nothing is assessed yet.
    pub unassessed_use_cases: Vec<String>,
    /// Rendered documents (SVG, CSV) keyed by name, when requested.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attachments: BTreeMap<String, String>,
}

impl ReportBundle {
    fn empty(scope: Scope) -> Self {
        ReportBundle {
            schema_version: SCHEMA_VERSION.into(),
            scope,
            use_case_scores: BTreeMap::new(),
            enabler_scores: BTreeMap::new(),
            service_progress: BTreeMap::new(),
            overall: None,
            impacts: BTreeMap::new(),
            feasibility: BTreeMap::new(),
            unassessed_use_cases: Vec::new(),
            attachments: BTreeMap::new(),
        }
    }

    fn add(&mut self, project: &Project, report: UseCaseReport) {
        let id = report.use_case_id.clone();
        if let Some(impact) = project.impacts.get(&id) {
            self.impacts.insert(id.clone(), *impact);
        }
        self.use_case_scores.insert(id.clone(), report.scores);
        self.enabler_scores.insert(id.clone(), report.enablers);
        self.feasibility.insert(id, report.feasibility);
    }
}

/// Scores, rollups, feasibility and radar series for one use case. The
/// reference may be a use case id or a scenario id.
pub fn use_case_report(project: &Project, catalog: &Catalog, reference: &str) -> Result<UseCaseReport, ReportError> {
    let uc = project.resolve_use_case(catalog, reference)?;
    let assessments = project.assessments_for(&uc.id);
    if assessments.is_empty() {
        return Err(ProjectError::NotAssessed { use_case: uc.id.clone() }.into());
    }
    let scenario = project.active_scenario(catalog, &uc.id);
    let enablers = score_all(assessments, catalog)?;
    let categories = category_rollup(&enablers)?;
    let scores = use_case_rollup(&uc.id, categories, &enablers)?;
    let feasibility = find_blockers(&uc.id, &enablers)?;
    let unassessed = catalog
        .allowed_enablers(uc, scenario)
        .into_iter()
        .filter(|id| !assessments.iter().any(|a| a.enabler_id == *id))
        .map(String::from)
        .collect();
    // Without a scenario or defaults every catalog enabler is allowed, so
    // the unassessed list is only meaningful when one of them exists.
    let unassessed = if scenario.is_none() && uc.default_enablers.is_empty() {
        Vec::new()
    } else {
        unassessed
    };
    Ok(UseCaseReport {
        use_case_id: uc.id.clone(),
        scenario_id: scenario.map(|s| s.id.clone()),
        radar: radar_series(&scores.categories),
        progress: use_case_progress(&scores),
        enablers,
        scores,
        unassessed,
        feasibility,
    })
}

/// Bundle restricted to a single use case.
pub fn use_case_bundle(project: &Project, catalog: &Catalog, reference: &str) -> Result<ReportBundle, ReportError> {
    let report = use_case_report(project, catalog, reference)?;
    let mut bundle = ReportBundle::empty(Scope::Usecase);
    bundle.add(project, report);
    Ok(bundle)
}

/// Reports for the considered use cases matching `filter`, plus the ids
/// of those that have no assessments.
fn considered_reports(
    project: &Project,
    catalog: &Catalog,
    filter: impl Fn(&str) -> bool,
) -> Result<(Vec<UseCaseReport>, Vec<String>), ReportError> {
    let mut reports = Vec::new();
    let mut unassessed = Vec::new();
    for id in &project.considered_use_cases {
        let Some(uc) = catalog.use_case(id) else {
            return Err(ProjectError::UnknownUseCase { use_case: id.clone() }.into());
        };
        if !filter(&uc.service_id) {
            continue;
        }
        if project.assessments_for(id).is_empty() {
            unassessed.push(id.clone());
        } else {
            reports.push(use_case_report(project, catalog, id)?);
        }
    }
    Ok((reports, unassessed))
}

fn progress_of(service_id: &str, reports: &[&UseCaseReport]) -> Result<ServiceProgress, ReportError> {
    let per = reports
        .iter()
        .map(|r| UseCaseProgress {
            use_case_id: r.use_case_id.clone(),
            progress: r.progress,
        })
        .collect();
    Ok(service_progress(service_id, per)?)
}

pub fn service_bundle(project: &Project, catalog: &Catalog, service_id: &str) -> Result<ReportBundle, ReportError> {
    if catalog.service(service_id).is_none() {
        return Err(ReportError::UnknownService(service_id.into()));
    }
    let (reports, unassessed) = considered_reports(project, catalog, |s| s == service_id)?;
    let refs: Vec<&UseCaseReport> = reports.iter().collect();
    let progress = progress_of(service_id, &refs)?;
    let mut bundle = ReportBundle::empty(Scope::Service);
    bundle.service_progress.insert(service_id.into(), progress);
    bundle.unassessed_use_cases = unassessed;
    for r in reports {
        bundle.add(project, r);
    }
    Ok(bundle)
}

pub fn overall_bundle(project: &Project, catalog: &Catalog) -> Result<ReportBundle, ReportError> {
    if project.considered_use_cases.is_empty() {
        return Err(ProjectError::NothingConsidered.into());
    }
    let (reports, unassessed) = considered_reports(project, catalog, |_| true)?;
    let mut bundle = ReportBundle::empty(Scope::Overall);
    bundle.unassessed_use_cases = unassessed;
    if reports.is_empty() {
        return Ok(bundle);
    }
    let scores: Vec<UseCaseScores> = reports.iter().map(|r| r.scores.clone()).collect();
    bundle.overall = Some(overall_rollup(&scores)?);

    let mut by_service: BTreeMap<&str, Vec<&UseCaseReport>> = BTreeMap::new();
    for r in &reports {
        if let Some(uc) = catalog.use_case(&r.use_case_id) {
            by_service.entry(uc.service_id.as_str()).or_default().push(r);
        }
    }
    for (service, rs) in by_service {
        bundle.service_progress.insert(service.into(), progress_of(service, &rs)?);
    }
    for r in reports {
        bundle.add(project, r);
    }
    Ok(bundle)
}

/// Progress bars for every use case of a service, considered or not.
pub fn progress_report(project: &Project, catalog: &Catalog, service_id: &str) -> Result<ProgressReport, ReportError> {
    let service = catalog
        .service(service_id)
        .ok_or_else(|| ReportError::UnknownService(service_id.into()))?;
    let mut bars = Vec::new();
    let mut done = Vec::new();
    for id in &service.use_cases {
        let name = catalog.use_case(id).map(|u| u.name.clone()).unwrap_or_default();
        let considered = project.is_considered(id);
        let progress = if considered && !project.assessments_for(id).is_empty() {
            let r = use_case_report(project, catalog, id)?;
            done.push(r.progress);
            Some(r.progress)
        } else {
            None
        };
        bars.push(ProgressBar {
            use_case_id: id.clone(),
            name,
            progress,
            considered,
        });
    }
    let service_value = if done.is_empty() {
        None
    } else {
        let per = bars
            .iter()
            .filter_map(|b| b.progress.map(|p| UseCaseProgress { use_case_id: b.use_case_id.clone(), progress: p }))
            .collect();
        Some(service_progress(service_id, per)?.progress)
    };
    Ok(ProgressReport {
        service_id: service.id.clone(),
        service_name: service.name.clone(),
        bars,
        service: service_value,
    })
}
