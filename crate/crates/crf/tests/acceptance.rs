//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::process::ExitCode;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use common::{demo_dir, dir_bytes, run_in};
use crf::api::{router, AppState, ServeOptions};
use crf::files::to_canonical_json;
use crf::store::Store;
use crf::tabular::{export_csv, parse_csv};
use crf_core::builtin::{builtin_croads_catalog, demo_assessments, demo_project, ids};
use crf_core::bundle::{overall_bundle, progress_report, use_case_report};
use crf_core::catalog::{Catalog, Category, Enabler};
use crf_core::scoring::{score_all, weighted_score, EnablerAssessment, Importance, LikertLevel};
use crf_core::svg::{render_impact_svg, render_progress_svg, ImpactChart};
use crf_core::{category_rollup, find_blockers, overall_rollup, round1, use_case_progress, use_case_rollup};
use http_body_util::BodyExt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::{json, Value};
use tower::ServiceExt;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn demo_enabler_scores() -> Check {
    let scores = score_all(&demo_assessments(), &builtin_croads_catalog()).map_err(|e| e.to_string())?;
    let col = |f: fn(&crf_core::EnablerScores) -> u8| scores.iter().map(f).collect::<Vec<u8>>();
    let readiness = col(|s| s.readiness_score);
    let aspiration = col(|s| s.aspiration_score);
    let threshold = col(|s| s.threshold_score);
    let cost = col(|s| s.cost_points);
    ensure!(readiness == [9, 9, 6, 6, 3, 6, 3, 9, 4], "readiness {readiness:?}");
    ensure!(aspiration == [9, 9, 9, 9, 9, 9, 9, 9, 6], "aspiration {aspiration:?}");
    ensure!(threshold == [6, 3, 3, 3, 3, 6, 3, 3, 2], "threshold {threshold:?}");
    ensure!(cost == [0, 0, 2, 3, 1, 1, 1, 1, 2], "cost {cost:?}");
    Ok(())
}

fn demo_category_rollup() -> Check {
    let r = use_case_report(&demo_project(), &builtin_croads_catalog(), ids::RWW_RM).map_err(|e| e.to_string())?;
    let s = &r.scores;
    let expected = [
        (Category::Physical, [6.0, 9.0, 3.0]),
        (Category::Operation, [3.0, 9.0, 3.0]),
        (Category::Digital, [4.5, 9.0, 4.5]),
        (Category::Connectivity, [6.5, 7.5, 2.5]),
        (Category::Standard, [9.0, 9.0, 4.5]),
    ];
    for (cat, want) in expected {
        let d = s.categories.get(cat).ok_or(format!("{cat:?} missing"))?;
        let d_show = s.display.categories.get(cat).ok_or(format!("{cat:?} display missing"))?;
        for (got, shown, want) in [
            (d.readiness, d_show.readiness, want[0]),
            (d.aspiration, d_show.aspiration, want[1]),
            (d.threshold, d_show.threshold, want[2]),
        ] {
            ensure!((got - want).abs() <= 0.001, "{cat:?}: {got} vs {want}");
            ensure!(shown == want, "{cat:?} display: {shown} vs {want}");
        }
    }
    // exact rationals 29/5, 87/10, 35/10
    for (got, exact, shown, printed) in [
        (s.total_readiness, 29.0 / 5.0, s.display.total_readiness, "5.8"),
        (s.total_aspiration, 87.0 / 10.0, s.display.total_aspiration, "8.7"),
        (s.total_threshold, 35.0 / 10.0, s.display.total_threshold, "3.5"),
    ] {
        ensure!((got - exact).abs() <= 0.001, "total {got} vs {exact}");
        ensure!(format!("{shown:.1}") == printed && shown == round1(got), "display {shown} vs {printed}");
    }
    ensure!(s.deployment_cost == 11, "deployment cost {}", s.deployment_cost);
    Ok(())
}

fn single_use_case_overall_identity() -> Check {
    let project = demo_project();
    let catalog = builtin_croads_catalog();
    let r = use_case_report(&project, &catalog, ids::RWW_RM).map_err(|e| e.to_string())?;
    let o = overall_rollup(std::slice::from_ref(&r.scores)).map_err(|e| e.to_string())?;
    ensure!(o.categories == r.scores.categories, "categories differ");
    ensure!(o.total_readiness == r.scores.total_readiness, "readiness differs");
    ensure!(o.total_aspiration == r.scores.total_aspiration, "aspiration differs");
    let bundle = overall_bundle(&project, &catalog).map_err(|e| e.to_string())?;
    let ob = bundle.overall.ok_or("no overall in bundle")?;
    ensure!(ob.categories == r.scores.categories, "bundle categories differ");
    ensure!(ob.gap == ob.total_aspiration - ob.total_readiness, "gap");
    Ok(())
}

fn row_strategy() -> impl Strategy<Value = Vec<(Category, EnablerAssessment)>> {
    let level = || prop::sample::select(LikertLevel::ALL.to_vec());
    prop::collection::vec(
        (
            prop::sample::select(Category::ALL.to_vec()),
            prop::sample::select(vec![Importance::Low, Importance::Medium, Importance::High]),
            level(),
            level(),
            level(),
            level(),
        ),
        1..=20,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (c, imp, r, a, t, k))| (c, EnablerAssessment::new(format!("e{i:02}"), imp, r, a, t, k)))
            .collect()
    })
}

fn synthetic_catalog(rows: &[(Category, EnablerAssessment)]) -> Catalog {
    Catalog {
        version: "synthetic".into(),
        services: vec![],
        use_cases: vec![],
        enablers: rows
            .iter()
            .map(|(c, a)| Enabler {
                id: a.enabler_id.clone(),
                name: a.enabler_id.clone(),
                description: String::new(),
                category: *c,
            })
            .collect(),
        scenarios: vec![],
        flows: vec![],
    }
}

fn oracle_total_readiness(rows: &[(Category, EnablerAssessment)]) -> f64 {
    let table = |i: Importance, l: LikertLevel| -> f64 {
        let w = [1.0, 2.0, 3.0][i as usize];
        let p = [0.0, 1.0, 2.0, 3.0][l as usize];
        w * p
    };
    let means: Vec<f64> = Category::ALL
        .iter()
        .filter_map(|cat| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|(c, _)| c == cat)
                .map(|(_, a)| table(a.importance, a.readiness))
                .collect();
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        })
        .collect();
    means.iter().sum::<f64>() / means.len() as f64
}

fn property_suite() -> Check {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (row_strategy(), any::<prop::sample::Index>(), any::<u64>());
    runner
        .run(&strategy, |(rows, pick, seed)| {
            let catalog = synthetic_catalog(&rows);
            let list: Vec<EnablerAssessment> = rows.iter().map(|(_, a)| a.clone()).collect();
            let roll = |l: &[EnablerAssessment]| {
                let s = score_all(l, &catalog).unwrap();
                use_case_rollup("uc", category_rollup(&s).unwrap(), &s).unwrap()
            };
            let scores = score_all(&list, &catalog).unwrap();
            let u = roll(&list);

            // bounds
            for s in &scores {
                prop_assert!(s.readiness_score <= 9 && s.aspiration_score <= 9 && s.threshold_score <= 9);
            }
            for v in [u.total_readiness, u.total_aspiration, u.total_threshold] {
                prop_assert!((0.0..=9.0).contains(&v));
            }
            prop_assert!((0.0..=1.0).contains(&use_case_progress(&u)));

            // permutation invariance (deterministic shuffle from the seed)
            let mut shuffled = list.clone();
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                shuffled.swap(i, (state % (i as u64 + 1)) as usize);
            }
            prop_assert_eq!(&roll(&shuffled), &u);

            // mean of means
            prop_assert!((u.total_readiness - oracle_total_readiness(&rows)).abs() < 1e-9);

            // monotone under a single raise
            let i = pick.index(list.len());
            let next = list[i].readiness.raised();
            if next != list[i].readiness {
                let mut up = list.clone();
                up[i].readiness = next;
                prop_assert!(roll(&up).total_readiness > u.total_readiness);
            }

            // blockers against a scan
            let v = find_blockers("uc", &scores).unwrap();
            let mut want: Vec<&str> = scores
                .iter()
                .filter(|s| s.readiness_score < s.threshold_score)
                .map(|s| s.enabler_id.as_str())
                .collect();
            let mut got: Vec<&str> = v.blockers.iter().map(|b| b.enabler_id.as_str()).collect();
            want.sort_unstable();
            got.sort_unstable();
            prop_assert_eq!(got, want);
            prop_assert_eq!(v.feasible, v.blockers.is_empty());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn exhaustive_scoring() -> Check {
    let table = [
        (Importance::Low, [0, 1, 2, 3]),
        (Importance::Medium, [0, 2, 4, 6]),
        (Importance::High, [0, 3, 6, 9]),
    ];
    let mut pairs = 0;
    for (imp, row) in table {
        for (level, want) in LikertLevel::ALL.iter().zip(row) {
            let got = weighted_score(imp, *level);
            ensure!(got == want, "{imp:?} x {level:?}: {got} vs {want}");
            pairs += 1;
        }
    }
    ensure!(pairs == 12, "{pairs} pairs");
    Ok(())
}

fn feasibility() -> Check {
    let catalog = builtin_croads_catalog();
    let scores = score_all(&demo_assessments(), &catalog).map_err(|e| e.to_string())?;
    let v = find_blockers(ids::RWW_RM, &scores).map_err(|e| e.to_string())?;
    ensure!(v.feasible && v.blockers.is_empty(), "demo has blockers: {:?}", v.blockers);

    let mut synthetic = demo_assessments();
    synthetic[2] = EnablerAssessment::new(
        ids::STATIONARY_RSU,
        Importance::High,
        LikertLevel::Low,
        LikertLevel::High,
        LikertLevel::Medium,
        LikertLevel::Medium,
    );
    let scores = score_all(&synthetic, &catalog).map_err(|e| e.to_string())?;
    let v = find_blockers(ids::RWW_RM, &scores).map_err(|e| e.to_string())?;
    ensure!(!v.feasible && v.blockers.len() == 1, "blockers {:?}", v.blockers);
    ensure!(v.blockers[0].enabler_id == ids::STATIONARY_RSU && v.blockers[0].gap == 3, "{:?}", v.blockers[0]);
    ensure!(v.margin == -3, "margin {}", v.margin);
    Ok(())
}

fn round_trips() -> Check {
    let (_t, dir) = demo_dir();
    let store = Store::open(&dir).map_err(|e| e.to_string())?;
    let catalog = store.catalog().map_err(|e| e.to_string())?;
    let loaded = store.load_project(ids::DEMO_PROJECT).map_err(|e| e.to_string())?;
    ensure!(loaded == demo_project(), "project differs after load");

    let first = std::fs::read(store.project_path()).map_err(|e| e.to_string())?;
    store
        .writer()
        .and_then(|w| w.save_project(&loaded, &catalog))
        .map_err(|e| e.to_string())?;
    let second = std::fs::read(store.project_path()).map_err(|e| e.to_string())?;
    ensure!(first == second, "re-save changed bytes");
    ensure!(to_canonical_json(&loaded) == to_canonical_json(&demo_project()), "serialization differs");

    let csv = export_csv(&catalog, &demo_assessments());
    let parsed = parse_csv(&csv).map_err(|e| e.to_string())?;
    ensure!(parsed == demo_assessments(), "csv lost level inputs");
    ensure!(export_csv(&catalog, &parsed) == csv, "csv not byte-stable");
    Ok(())
}

async fn api_call(dir: &std::path::Path, method: Method, uri: &str, body: Option<Value>) -> Result<Value, String> {
    let app = router(AppState::open(dir).map_err(|e| e.to_string())?, &ServeOptions::default());
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |v| Body::from(v.to_string())))
        .map_err(|e| e.to_string())?;
    let res = app.oneshot(req).await.map_err(|e| e.to_string())?;
    if res.status() != StatusCode::OK {
        return Err(format!("{uri}: status {}", res.status()));
    }
    let bytes = res.into_body().collect().await.map_err(|e| e.to_string())?.to_bytes();
    serde_json::from_slice(&bytes).map_err(|e| e.to_string())
}

fn cli_api_contract() -> Check {
    let (_t, dir) = demo_dir();
    let totals = |v: &Value| {
        [
            v["display"]["total_readiness"].as_f64(),
            v["display"]["total_aspiration"].as_f64(),
            v["display"]["total_threshold"].as_f64(),
        ]
    };
    let want = [Some(5.8), Some(8.7), Some(3.5)];

    let (code, out, err) = run_in(&dir, &["report", "usecase", ids::DEMO_SCENARIO, "--format", "json"]);
    ensure!(code == 0, "cli report exit {code}: {err}");
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure!(totals(&v["use_case_scores"][ids::RWW_RM]) == want, "cli totals {:?}", totals(&v["use_case_scores"][ids::RWW_RM]));

    let rt = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .map_err(|e| e.to_string())?;
    let v = rt.block_on(api_call(&dir, Method::GET, "/api/reports/usecase/RWW-demo", None))?;
    ensure!(totals(&v["scores"]) == want, "api totals {:?}", totals(&v["scores"]));

    let before = dir_bytes(&dir);
    let (code, out, err) = run_in(&dir, &["whatif", ids::DEMO_SCENARIO, ids::RESPONSE_PLAN, "readiness=high", "--format", "json"]);
    ensure!(code == 0, "cli whatif exit {code}: {err}");
    ensure!(dir_bytes(&dir) == before, "cli whatif touched the project directory");
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure!(v["use_case_scores"][ids::RWW_RM]["display"]["total_readiness"] == 7.0, "cli whatif total");

    let req = json!({
        "use_case_id": ids::DEMO_SCENARIO,
        "overrides": [{"enabler_id": ids::RESPONSE_PLAN, "dimension": "readiness", "level": "high"}]
    });
    let v = rt.block_on(api_call(&dir, Method::POST, "/api/whatif", Some(req)))?;
    ensure!(v["scores"]["display"]["total_readiness"] == 7.0, "api whatif total");
    ensure!(dir_bytes(&dir) == before, "api whatif touched the project directory");
    Ok(())
}

fn illustrative_charts_structure() -> Check {
    let full = render_impact_svg([3.0; 5], 400, ImpactChart::Radar);
    ensure!(full.matches("<polygon").count() == 1, "impact radar polygons");
    ensure!(full.matches("class=\"axis-label\"").count() == 5, "impact radar labels");
    ensure!(full == render_impact_svg([3.0; 5], 400, ImpactChart::Radar), "impact svg not deterministic");
    let bars = render_impact_svg([1.0, 3.0, 2.0, 2.0, 1.0], 400, ImpactChart::Bars);
    ensure!(bars.matches("class=\"bar\"").count() == 5, "impact bars");

    let report = progress_report(&demo_project(), &builtin_croads_catalog(), "RWW").map_err(|e| e.to_string())?;
    for b in &report.bars {
        if let Some(p) = b.progress {
            ensure!((0.0..=1.0).contains(&p), "progress {p}");
        }
    }
    let svg = render_progress_svg(&report, 600);
    let with_value = report.bars.iter().filter(|b| b.progress.is_some()).count();
    ensure!(svg.matches("class=\"track\"").count() == report.bars.len() + 1, "progress tracks");
    ensure!(svg.matches("class=\"bar\"").count() == with_value, "progress bars");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("demo enabler scores exact", demo_enabler_scores),
        ("demo category rollup and totals (+-0.001, 1-decimal display)", demo_category_rollup),
        ("single use case overall equals use case values", single_use_case_overall_identity),
        ("property suite, 1000 cases of up to 20 enablers", property_suite),
        ("weighted score matches all 12 lookup pairs", exhaustive_scoring),
        ("feasibility: demo feasible, low-vs-medium gap 3", feasibility),
        ("round-trips: project, csv, byte-stable serialization", round_trips),
        ("cli/api totals 5.8/8.7/3.5 and read-only what-if", cli_api_contract),
        ("illustrative impact/progress charts: structure only", illustrative_charts_structure),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
