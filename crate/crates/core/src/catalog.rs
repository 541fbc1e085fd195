//! The service / use case / enabler taxonomy.
//!
//! A [`Catalog`] is plain data: ordered lists of services, use cases,
//! enablers, scenarios and message flows, cross-referenced by string id.
//! Lists (rather than id-keyed maps) keep the on-disk order stable and let
//! [`validate_catalog`] report duplicate ids instead of silently dropping
//! one of them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// Infrastructure category of an enabler. The set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Physical,
    Operation,
    Digital,
    Connectivity,
    Standard,
}

impl Category {
    /// Fixed axis order used by every rollup and chart.
    pub const ALL: [Category; 5] = [
        Category::Physical,
        Category::Operation,
        Category::Digital,
        Category::Connectivity,
        Category::Standard,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Physical => "physical",
            Category::Operation => "operation",
            Category::Digital => "digital",
            Category::Connectivity => "connectivity",
            Category::Standard => "standard",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Category::Physical => "Physical",
            Category::Operation => "Operation",
            Category::Digital => "Digital",
            Category::Connectivity => "Connectivity",
            Category::Standard => "Standard",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| alloc::format!("unknown category '{s}'"))
    }
}

/// A cluster of use cases sharing an objective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Service {
    pub id: String,
    pub name: String,
    pub use_cases: Vec<String>,
    /// Set for services whose use cases have not been enumerated yet.
    #[serde(default)]
    pub incomplete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UseCase {
    pub id: String,
    pub service_id: String,
    pub name: String,
    /// Ids of the message flows describing this use case.
    #[serde(default)]
    pub flows: Vec<String>,
    #[serde(default)]
    pub default_enablers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enabler {
    pub id: String,
    pub name: String,
    pub description: String,
    pub category: Category,
}

/// One hop of a message from the triggering event towards the end user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowStep {
    pub index: u32,
    pub actor: String,
    pub action: String,
    pub required_enablers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageFlow {
    pub id: String,
    pub description: String,
    pub steps: Vec<FlowStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provider {
    Public,
    Private,
}

/// An implementation variant of a use case. The provider map is metadata
/// and does not enter any score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub use_case_id: String,
    pub name: String,
    pub enabler_ids: Vec<String>,
    #[serde(default)]
    pub provider_map: BTreeMap<String, Provider>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: String,
    pub services: Vec<Service>,
    pub use_cases: Vec<UseCase>,
    pub enablers: Vec<Enabler>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
    #[serde(default)]
    pub flows: Vec<MessageFlow>,
}

impl Catalog {
    pub fn service(&self, id: &str) -> Option<&Service> {
        self.services.iter().find(|s| s.id == id)
    }

    pub fn use_case(&self, id: &str) -> Option<&UseCase> {
        self.use_cases.iter().find(|u| u.id == id)
    }

    pub fn enabler(&self, id: &str) -> Option<&Enabler> {
        self.enablers.iter().find(|e| e.id == id)
    }

    pub fn scenario(&self, id: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    pub fn flow(&self, id: &str) -> Option<&MessageFlow> {
        self.flows.iter().find(|f| f.id == id)
    }

    /// Enablers a use case may be assessed against.
    ///
    /// The scenario's list wins when one is given. Without a scenario the
    /// use case's default enablers apply; a use case with no defaults (no
    /// flow described yet) accepts any catalog enabler.
    pub fn allowed_enablers<'a>(
        &'a self,
        use_case: &'a UseCase,
        scenario: Option<&'a Scenario>,
    ) -> Vec<&'a str> {
        if let Some(scenario) = scenario {
            scenario.enabler_ids.iter().map(String::as_str).collect()
        } else if !use_case.default_enablers.is_empty() {
            use_case.default_enablers.iter().map(String::as_str).collect()
        } else {
            self.enablers.iter().map(|e| e.id.as_str()).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntityKind {
    Service,
    UseCase,
    Enabler,
    Scenario,
    Flow,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Service => "service",
            EntityKind::UseCase => "use case",
            EntityKind::Enabler => "enabler",
            EntityKind::Scenario => "scenario",
            EntityKind::Flow => "flow",
        })
    }
}

/// One violated catalog invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ValidationError {
    DuplicateId {
        kind: EntityKind,
        id: String,
    },
    DanglingReference {
        from: String,
        kind: EntityKind,
        target: String,
    },
    Empty {
        id: String,
        field: &'static str,
    },
    DuplicateMember {
        owner: String,
        member: String,
    },
    StepIndex {
        flow: String,
        expected: u32,
        found: u32,
    },
    Ownership {
        use_case: String,
        service: String,
    },
    DefaultEnablers {
        use_case: String,
    },
    ProviderOutsideScenario {
        scenario: String,
        enabler: String,
    },
}

impl ValidationError {
    pub fn rule(&self) -> &'static str {
        match self {
            ValidationError::DuplicateId { .. } => "duplicate-id",
            ValidationError::DanglingReference { .. } => "dangling-reference",
            ValidationError::Empty { .. } => "empty",
            ValidationError::DuplicateMember { .. } => "duplicate-member",
            ValidationError::StepIndex { .. } => "step-index",
            ValidationError::Ownership { .. } => "ownership",
            ValidationError::DefaultEnablers { .. } => "default-enablers",
            ValidationError::ProviderOutsideScenario { .. } => "provider-outside-scenario",
        }
    }

    /// The id the error is about. For dangling references this is the
    /// missing target.
    pub fn subject(&self) -> &str {
        match self {
            ValidationError::DuplicateId { id, .. } | ValidationError::Empty { id, .. } => id,
            ValidationError::DanglingReference { target, .. } => target,
            ValidationError::DuplicateMember { member, .. } => member,
            ValidationError::StepIndex { flow, .. } => flow,
            ValidationError::Ownership { use_case, .. }
            | ValidationError::DefaultEnablers { use_case } => use_case,
            ValidationError::ProviderOutsideScenario { enabler, .. } => enabler,
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::DuplicateId { kind, id } => write!(f, "duplicate {kind} id '{id}'"),
            ValidationError::DanglingReference { from, kind, target } => {
                write!(f, "'{from}' references unknown {kind} '{target}'")
            }
            ValidationError::Empty { id, field } => write!(f, "'{id}' has empty {field}"),
            ValidationError::DuplicateMember { owner, member } => {
                write!(f, "'{owner}' lists '{member}' more than once")
            }
            ValidationError::StepIndex {
                flow,
                expected,
                found,
            } => write!(f, "flow '{flow}' step index {found}, expected {expected}"),
            ValidationError::Ownership { use_case, service } => {
                write!(f, "use case '{use_case}' is not owned by exactly service '{service}'")
            }
            ValidationError::DefaultEnablers { use_case } => {
                write!(f, "use case '{use_case}' default enablers differ from its traced flows")
            }
            ValidationError::ProviderOutsideScenario { scenario, enabler } => {
                write!(f, "scenario '{scenario}' attributes provider to non-member enabler '{enabler}'")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    fn push(&mut self, error: ValidationError) {
        self.errors.push(error);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid: {0}")]
    Invalid(ValidationReport),
    #[error("unknown enabler '{0}'")]
    UnknownEnabler(String),
    #[error("unknown use case '{0}'")]
    UnknownUseCase(String),
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
}

fn duplicates<'a, I>(ids: I, kind: EntityKind, report: &mut ValidationReport)
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = BTreeSet::new();
    let mut reported = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) && reported.insert(id) {
            report.push(ValidationError::DuplicateId {
                kind,
                id: id.into(),
            });
        }
    }
}

fn check_flow(flow: &MessageFlow, catalog: &Catalog, report: &mut ValidationReport) {
    if flow.steps.is_empty() {
        report.push(ValidationError::Empty {
            id: flow.id.clone(),
            field: "steps",
        });
    }
    for (expected, step) in (1u32..).zip(&flow.steps) {
        if step.index != expected {
            report.push(ValidationError::StepIndex {
                flow: flow.id.clone(),
                expected,
                found: step.index,
            });
            break;
        }
    }
    for step in &flow.steps {
        for id in &step.required_enablers {
            if catalog.enabler(id).is_none() {
                report.push(ValidationError::DanglingReference {
                    from: flow.id.clone(),
                    kind: EntityKind::Enabler,
                    target: id.clone(),
                });
            }
        }
    }
}

/// Checks every referential and structural invariant of the catalog.
/// The report is empty iff the catalog is well formed.
pub fn validate_catalog(catalog: &Catalog) -> ValidationReport {
    let mut report = ValidationReport::default();

    duplicates(catalog.services.iter().map(|s| s.id.as_str()), EntityKind::Service, &mut report);
    duplicates(catalog.use_cases.iter().map(|u| u.id.as_str()), EntityKind::UseCase, &mut report);
    duplicates(catalog.enablers.iter().map(|e| e.id.as_str()), EntityKind::Enabler, &mut report);
    duplicates(catalog.scenarios.iter().map(|s| s.id.as_str()), EntityKind::Scenario, &mut report);
    duplicates(catalog.flows.iter().map(|f| f.id.as_str()), EntityKind::Flow, &mut report);

    for service in &catalog.services {
        if service.use_cases.is_empty() && !service.incomplete {
            report.push(ValidationError::Empty {
                id: service.id.clone(),
                field: "use_cases",
            });
        }
        let mut seen = BTreeSet::new();
        for uc in &service.use_cases {
            if !seen.insert(uc.as_str()) {
                report.push(ValidationError::DuplicateMember {
                    owner: service.id.clone(),
                    member: uc.clone(),
                });
            }
            if catalog.use_case(uc).is_none() {
                report.push(ValidationError::DanglingReference {
                    from: service.id.clone(),
                    kind: EntityKind::UseCase,
                    target: uc.clone(),
                });
            }
        }
    }

    for use_case in &catalog.use_cases {
        if catalog.service(&use_case.service_id).is_none() {
            report.push(ValidationError::DanglingReference {
                from: use_case.id.clone(),
                kind: EntityKind::Service,
                target: use_case.service_id.clone(),
            });
        } else {
            let owners: Vec<&Service> = catalog
                .services
                .iter()
                .filter(|s| s.use_cases.contains(&use_case.id))
                .collect();
            if owners.len() != 1 || owners[0].id != use_case.service_id {
                report.push(ValidationError::Ownership {
                    use_case: use_case.id.clone(),
                    service: use_case.service_id.clone(),
                });
            }
        }

        let mut flows_resolve = true;
        for flow_id in &use_case.flows {
            if catalog.flow(flow_id).is_none() {
                flows_resolve = false;
                report.push(ValidationError::DanglingReference {
                    from: use_case.id.clone(),
                    kind: EntityKind::Flow,
                    target: flow_id.clone(),
                });
            }
        }

        let mut defaults_resolve = true;
        for id in &use_case.default_enablers {
            if catalog.enabler(id).is_none() {
                defaults_resolve = false;
                report.push(ValidationError::DanglingReference {
                    from: use_case.id.clone(),
                    kind: EntityKind::Enabler,
                    target: id.clone(),
                });
            }
        }

        // A dangling reference already explains any mismatch.
        if !use_case.flows.is_empty() && flows_resolve && defaults_resolve {
            let steps = use_case
                .flows
                .iter()
                .filter_map(|id| catalog.flow(id))
                .flat_map(|f| f.steps.iter());
            if dedup_in_order(steps) != use_case.default_enablers {
                report.push(ValidationError::DefaultEnablers {
                    use_case: use_case.id.clone(),
                });
            }
        }
    }

    for flow in &catalog.flows {
        check_flow(flow, catalog, &mut report);
    }

    for scenario in &catalog.scenarios {
        if catalog.use_case(&scenario.use_case_id).is_none() {
            report.push(ValidationError::DanglingReference {
                from: scenario.id.clone(),
                kind: EntityKind::UseCase,
                target: scenario.use_case_id.clone(),
            });
        }
        if scenario.enabler_ids.is_empty() {
            report.push(ValidationError::Empty {
                id: scenario.id.clone(),
                field: "enabler_ids",
            });
        }
        let mut seen = BTreeSet::new();
        for id in &scenario.enabler_ids {
            if !seen.insert(id.as_str()) {
                report.push(ValidationError::DuplicateMember {
                    owner: scenario.id.clone(),
                    member: id.clone(),
                });
            }
            if catalog.enabler(id).is_none() {
                report.push(ValidationError::DanglingReference {
                    from: scenario.id.clone(),
                    kind: EntityKind::Enabler,
                    target: id.clone(),
                });
            }
        }
        for id in scenario.provider_map.keys() {
            if !seen.contains(id.as_str()) {
                report.push(ValidationError::ProviderOutsideScenario {
                    scenario: scenario.id.clone(),
                    enabler: id.clone(),
                });
            }
        }
    }

    report
}

fn dedup_in_order<'a, I>(steps: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a FlowStep>,
{
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for step in steps {
        for id in &step.required_enablers {
            if seen.insert(id.as_str()) {
                out.push(id.clone());
            }
        }
    }
    out
}

/// Enabler set of a message flow: the union of every step's required
/// enablers, in order of first occurrence.
pub fn trace_enablers(flow: &MessageFlow, catalog: &Catalog) -> Result<Vec<String>, CatalogError> {
    let mut report = ValidationReport::default();
    check_flow(flow, catalog, &mut report);
    if !report.is_valid() {
        return Err(CatalogError::Invalid(report));
    }
    Ok(dedup_in_order(&flow.steps))
}

/// Traces all flows of a use case as one concatenated flow.
pub fn trace_use_case(use_case: &UseCase, catalog: &Catalog) -> Result<Vec<String>, CatalogError> {
    let mut flows = Vec::with_capacity(use_case.flows.len());
    for id in &use_case.flows {
        let flow = catalog
            .flow(id)
            .ok_or_else(|| CatalogError::Invalid(ValidationReport {
                errors: alloc::vec![ValidationError::DanglingReference {
                    from: use_case.id.clone(),
                    kind: EntityKind::Flow,
                    target: id.clone(),
                }],
            }))?;
        trace_enablers(flow, catalog)?;
        flows.push(flow);
    }
    Ok(dedup_in_order(flows.iter().flat_map(|f| f.steps.iter())))
}

/// Full enabler records of a scenario, in scenario order.
pub fn resolve_scenario<'a>(
    scenario: &Scenario,
    catalog: &'a Catalog,
) -> Result<Vec<&'a Enabler>, CatalogError> {
    scenario
        .enabler_ids
        .iter()
        .map(|id| {
            catalog
                .enabler(id)
                .ok_or_else(|| CatalogError::UnknownEnabler(id.clone()))
        })
        .collect()
}
