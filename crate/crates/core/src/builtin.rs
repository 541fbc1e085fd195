//! Built-in C-ROADS taxonomy and the Road Works Warning demo project.
//!
//! Only the RWW service has enumerated use cases. The other five services
//! are present as empty stubs marked `incomplete`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::{
    Catalog, Category, Enabler, FlowStep, MessageFlow, Provider, Scenario, Service, UseCase,
};
use crate::project::Project;
use crate::scoring::{EnablerAssessment, Importance, LikertLevel};

pub const CATALOG_VERSION: &str = "croads-builtin-1";

/// Stable ids used by the built-in catalog.
pub mod ids {
    pub const RWW: &str = "RWW";
    pub const RWW_LC: &str = "RWW-LC";
    pub const RWW_RC: &str = "RWW-RC";
    pub const RWW_RM: &str = "RWW-RM";
    pub const RWW_WM: &str = "RWW-WM";

    pub const ETSI_DENM: &str = "etsi-en-302-637-3";
    pub const ETSI_CDD: &str = "etsi-ts-102-894-2";
    pub const STATIONARY_RSU: &str = "stationary-rsu";
    pub const MOBILE_RSU: &str = "mobile-rsu";
    pub const RESPONSE_PLAN: &str = "response-plan";
    pub const R_ITS_S_PROFILE: &str = "r-its-s-system-profile";
    pub const V_ITS_S_PROFILE: &str = "v-its-s-system-profile";
    pub const CELLULAR: &str = "cellular-connectivity";
    pub const ITS_G5: &str = "short-range-its-g5";

    pub const NORDIC_WAY_FLOW: &str = "rww-nordic-way";
    pub const DEMO_SCENARIO: &str = "RWW-demo";
    pub const DEMO_PROJECT: &str = "rww-demo";
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn enabler(id: &str, name: &str, description: &str, category: Category) -> Enabler {
    Enabler {
        id: id.into(),
        name: name.into(),
        description: description.into(),
        category,
    }
}

fn step(index: u32, actor: &str, action: &str, enablers: &[&str]) -> FlowStep {
    FlowStep {
        index,
        actor: actor.into(),
        action: action.into(),
        required_enablers: strings(enablers),
    }
}

/// The nine RWW enablers in table order.
pub const RWW_ENABLERS: [&str; 9] = [
    ids::ETSI_DENM,
    ids::ETSI_CDD,
    ids::STATIONARY_RSU,
    ids::MOBILE_RSU,
    ids::RESPONSE_PLAN,
    ids::R_ITS_S_PROFILE,
    ids::V_ITS_S_PROFILE,
    ids::CELLULAR,
    ids::ITS_G5,
];

fn nordic_way_flow() -> MessageFlow {
    use ids::*;
    MessageFlow {
        id: NORDIC_WAY_FLOW.into(),
        description: "Mobile road works warning from a TMA vehicle to connected vehicles via the OEM cloud".into(),
        steps: vec![
            step(
                1,
                "Traffic Authority",
                "Road operator triggers the information exchange for the road works",
                &[RESPONSE_PLAN],
            ),
            step(
                2,
                "TMA vehicle",
                "RWW unit on the truck mounted attenuator generates the warning as a DENM",
                &[MOBILE_RSU, V_ITS_S_PROFILE, ETSI_DENM, ETSI_CDD],
            ),
            step(
                3,
                "TMA vehicle",
                "Warning is broadcast to the nearby roadside unit",
                &[ITS_G5, MOBILE_RSU],
            ),
            step(
                4,
                "RSU",
                "Roadside unit forwards the warning in DENM and DATEX II format through the interchange node",
                &[STATIONARY_RSU, R_ITS_S_PROFILE, CELLULAR, ETSI_DENM],
            ),
            step(
                5,
                "OEM cloud",
                "OEM cloud merges the warning with road works information from the Traffic Authority",
                &[CELLULAR],
            ),
            step(6, "Vehicle", "Vehicle receives the warning from the OEM cloud", &[CELLULAR]),
        ],
    }
}

pub fn builtin_croads_catalog() -> Catalog {
    use ids::*;

    let stub = |id: &str, name: &str| Service {
        id: id.into(),
        name: name.into(),
        use_cases: Vec::new(),
        incomplete: true,
    };

    let services = vec![
        stub("IVS", "In-Vehicle Signage"),
        stub("HLN", "Hazardous Location Notification"),
        Service {
            id: RWW.into(),
            name: "Road Works Warning".into(),
            use_cases: strings(&[RWW_LC, RWW_RC, RWW_RM, RWW_WM]),
            incomplete: false,
        },
        stub("SI", "Signalized Intersections"),
        stub("AVG", "Automated Vehicle Guidance"),
        stub("PVD", "Probe Vehicle Data"),
    ];

    let flow = nordic_way_flow();
    let traced = {
        let mut seen = Vec::<String>::new();
        for id in flow.steps.iter().flat_map(|s| s.required_enablers.iter()) {
            if !seen.contains(id) {
                seen.push(id.clone());
            }
        }
        seen
    };

    let plain = |id: &str, name: &str| UseCase {
        id: id.into(),
        service_id: RWW.into(),
        name: name.into(),
        flows: Vec::new(),
        default_enablers: Vec::new(),
    };
    let use_cases = vec![
        plain(RWW_LC, "Lane closure"),
        plain(RWW_RC, "Road closure"),
        UseCase {
            id: RWW_RM.into(),
            service_id: RWW.into(),
            name: "Road works - Mobile".into(),
            flows: vec![NORDIC_WAY_FLOW.into()],
            default_enablers: traced,
        },
        plain(RWW_WM, "Winter maintenance"),
    ];

    let enablers = vec![
        enabler(ETSI_DENM, "ETSI EN 302 637-3 for DENM messaging", "Standard for interoperability V2X LTE", Category::Standard),
        enabler(ETSI_CDD, "ETSI TS 102 894-2", "Standard for sharing", Category::Standard),
        enabler(STATIONARY_RSU, "Stationary RSU (R-ITS-S)", "Stationary roadside unit", Category::Physical),
        enabler(MOBILE_RSU, "Mobile RSU (V-ITS-S)", "TMA vehicle", Category::Physical),
        enabler(RESPONSE_PLAN, "Response plan", "NRA procedure for triggering information exchange", Category::Operation),
        enabler(R_ITS_S_PROFILE, "R-ITS-S System Profile", "System profile", Category::Digital),
        enabler(V_ITS_S_PROFILE, "V-ITS-S system profile", "System profile", Category::Digital),
        enabler(CELLULAR, "Cellular connectivity", "Information from RSU to cloud", Category::Connectivity),
        enabler(ITS_G5, "Short-range ITS-G5", "Information from TMA to RSU", Category::Connectivity),
    ];

    let mut provider_map = BTreeMap::new();
    provider_map.insert(RESPONSE_PLAN.to_string(), Provider::Public);
    let scenarios = vec![Scenario {
        id: DEMO_SCENARIO.into(),
        use_case_id: RWW_RM.into(),
        name: "Nordic Way pilot implementation".into(),
        enabler_ids: strings(&RWW_ENABLERS),
        provider_map,
    }];

    Catalog {
        version: CATALOG_VERSION.into(),
        services,
        use_cases,
        enablers,
        scenarios,
        flows: vec![flow],
    }
}

/// The nine demo assessments, in table order.
pub fn demo_assessments() -> Vec<EnablerAssessment> {
    use ids::*;
    use Importance as I;
    use LikertLevel::*;
    let rows: [(&str, Importance, LikertLevel, LikertLevel, LikertLevel, LikertLevel); 9] = [
        (ETSI_DENM, I::High, High, High, Medium, None),
        (ETSI_CDD, I::High, High, High, Low, None),
        (STATIONARY_RSU, I::High, Medium, High, Low, Medium),
        (MOBILE_RSU, I::High, Medium, High, Low, High),
        (RESPONSE_PLAN, I::High, Low, High, Low, Low),
        (R_ITS_S_PROFILE, I::High, Medium, High, Medium, Low),
        (V_ITS_S_PROFILE, I::High, Low, High, Low, Low),
        (CELLULAR, I::High, High, High, Low, Low),
        (ITS_G5, I::Medium, Medium, High, Low, Medium),
    ];
    rows.into_iter()
        .map(|(id, imp, r, a, t, c)| EnablerAssessment::new(id, imp, r, a, t, c))
        .collect()
}

/// A project considering only the mobile road works use case under the
/// Nordic Way scenario, fully assessed.
pub fn demo_project() -> Project {
    let mut project = Project::new(ids::DEMO_PROJECT, "RWW Nordic Way demo", CATALOG_VERSION);
    project.considered_use_cases.push(ids::RWW_RM.into());
    project
        .active_scenarios
        .insert(ids::RWW_RM.into(), ids::DEMO_SCENARIO.into());
    project
        .assessments
        .insert(ids::RWW_RM.into(), demo_assessments());
    project
}
