//! An analyst's project: which use cases are considered, which scenario is
//! active for each, and the assessments entered so far.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::aggregation::ImpactProfile;
use crate::catalog::{Catalog, Scenario, UseCase};
use crate::scoring::EnablerAssessment;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub id: String,
    pub name: String,
    pub catalog_version: String,
    #[serde(default)]
    pub considered_use_cases: Vec<String>,
    /// use case id -> scenario id
    #[serde(default)]
    pub active_scenarios: BTreeMap<String, String>,
    /// use case id -> assessments, in entry order
    #[serde(default)]
    pub assessments: BTreeMap<String, Vec<EnablerAssessment>>,
    #[serde(default)]
    pub impacts: BTreeMap<String, ImpactProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum ProjectError {
    #[error("project targets catalog '{found}' but catalog is '{expected}'")]
    CatalogVersion { expected: String, found: String },
    #[error("unknown use case '{use_case}'")]
    UnknownUseCase { use_case: String },
    #[error("use case '{use_case}' is listed twice")]
    DuplicateUseCase { use_case: String },
    #[error("use case '{use_case}' has {field} but is not considered")]
    NotConsidered { use_case: String, field: &'static str },
    #[error("unknown scenario '{scenario}' for use case '{use_case}'")]
    UnknownScenario { use_case: String, scenario: String },
    #[error("scenario '{scenario}' belongs to another use case than '{use_case}'")]
    ScenarioMismatch { use_case: String, scenario: String },
    #[error("enabler '{enabler}' is not part of use case '{use_case}'")]
    EnablerNotAllowed { use_case: String, enabler: String },
    #[error("enabler '{enabler}' is assessed twice in use case '{use_case}'")]
    DuplicateAssessment { use_case: String, enabler: String },
    #[error("use case '{use_case}' has no assessments")]
    NotAssessed { use_case: String },
    #[error("no use cases are considered")]
    NothingConsidered,
}

impl ProjectError {
    pub fn code(&self) -> &'static str {
        match self {
            ProjectError::CatalogVersion { .. } => "catalog-version",
            ProjectError::UnknownUseCase { .. } => "unknown-use-case",
            ProjectError::DuplicateUseCase { .. } => "duplicate-use-case",
            ProjectError::NotConsidered { .. } => "not-considered",
            ProjectError::UnknownScenario { .. } => "unknown-scenario",
            ProjectError::ScenarioMismatch { .. } => "scenario-mismatch",
            ProjectError::EnablerNotAllowed { .. } => "enabler-not-allowed",
            ProjectError::DuplicateAssessment { .. } => "duplicate-assessment",
            ProjectError::NotAssessed { .. } => "not-assessed",
            ProjectError::NothingConsidered => "nothing-considered",
        }
    }
}

impl Project {
    pub fn new(id: impl Into<String>, name: impl Into<String>, catalog_version: impl Into<String>) -> Self {
        Project {
            id: id.into(),
            name: name.into(),
            catalog_version: catalog_version.into(),
            considered_use_cases: Vec::new(),
            active_scenarios: BTreeMap::new(),
            assessments: BTreeMap::new(),
            impacts: BTreeMap::new(),
        }
    }

    pub fn is_considered(&self, use_case_id: &str) -> bool {
        self.considered_use_cases.iter().any(|u| u == use_case_id)
    }

    /// Accepts a use case id, or the id of a catalog scenario standing for
    /// its use case.
    pub fn resolve_use_case<'c>(&self, catalog: &'c Catalog, reference: &str) -> Result<&'c UseCase, ProjectError> {
        if let Some(uc) = catalog.use_case(reference) {
            return Ok(uc);
        }
        catalog
            .scenario(reference)
            .and_then(|s| catalog.use_case(&s.use_case_id))
            .ok_or_else(|| ProjectError::UnknownUseCase {
                use_case: reference.into(),
            })
    }

    pub fn active_scenario<'c>(&self, catalog: &'c Catalog, use_case_id: &str) -> Option<&'c Scenario> {
        self.active_scenarios
            .get(use_case_id)
            .and_then(|id| catalog.scenario(id))
    }

    pub fn assessments_for(&self, use_case_id: &str) -> &[EnablerAssessment] {
        self.assessments.get(use_case_id).map_or(&[], Vec::as_slice)
    }

    /// Replaces the assessment for the same enabler, or appends.
    pub fn set_assessment(&mut self, use_case_id: &str, assessment: EnablerAssessment) {
        let list = self.assessments.entry(use_case_id.into()).or_default();
        match list.iter_mut().find(|a| a.enabler_id == assessment.enabler_id) {
            Some(slot) => *slot = assessment,
            None => list.push(assessment),
        }
    }

    /// Adds use cases to the considered list, skipping ones already there.
    pub fn consider<'a>(&mut self, use_case_ids: impl IntoIterator<Item = &'a str>) {
        for id in use_case_ids {
            if !self.is_considered(id) {
                self.considered_use_cases.push(id.into());
            }
        }
    }

    /// Every rule a persisted project must satisfy against its catalog.
    /// An empty result means the project is valid.
    pub fn validate(&self, catalog: &Catalog) -> Vec<ProjectError> {
        let mut errors = Vec::new();
        if self.catalog_version != catalog.version {
            errors.push(ProjectError::CatalogVersion {
                expected: catalog.version.clone(),
                found: self.catalog_version.clone(),
            });
        }

        let mut seen = BTreeSet::new();
        for uc in &self.considered_use_cases {
            if !seen.insert(uc.as_str()) {
                errors.push(ProjectError::DuplicateUseCase { use_case: uc.clone() });
            }
            if catalog.use_case(uc).is_none() {
                errors.push(ProjectError::UnknownUseCase { use_case: uc.clone() });
            }
        }

        for (uc, scenario_id) in &self.active_scenarios {
            if !self.is_considered(uc) {
                errors.push(ProjectError::NotConsidered {
                    use_case: uc.clone(),
                    field: "an active scenario",
                });
            }
            match catalog.scenario(scenario_id) {
                None => errors.push(ProjectError::UnknownScenario {
                    use_case: uc.clone(),
                    scenario: scenario_id.clone(),
                }),
                Some(s) if s.use_case_id != *uc => errors.push(ProjectError::ScenarioMismatch {
                    use_case: uc.clone(),
                    scenario: scenario_id.clone(),
                }),
                Some(_) => {}
            }
        }

        for (uc_id, list) in &self.assessments {
            if !self.is_considered(uc_id) {
                errors.push(ProjectError::NotConsidered {
                    use_case: uc_id.clone(),
                    field: "assessments",
                });
            }
            let Some(uc) = catalog.use_case(uc_id) else {
                errors.push(ProjectError::UnknownUseCase { use_case: uc_id.clone() });
                continue;
            };
            let allowed = catalog.allowed_enablers(uc, self.active_scenario(catalog, uc_id));
            let mut seen = BTreeSet::new();
            for a in list {
                if !seen.insert(a.enabler_id.as_str()) {
                    errors.push(ProjectError::DuplicateAssessment {
                        use_case: uc_id.clone(),
                        enabler: a.enabler_id.clone(),
                    });
                }
                if !allowed.contains(&a.enabler_id.as_str()) {
                    errors.push(ProjectError::EnablerNotAllowed {
                        use_case: uc_id.clone(),
                        enabler: a.enabler_id.clone(),
                    });
                }
            }
        }

        for uc in self.impacts.keys() {
            if !self.is_considered(uc) {
                errors.push(ProjectError::NotConsidered {
                    use_case: uc.clone(),
                    field: "an impact profile",
                });
            }
        }
        errors
    }
}
