mod common;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use common::{demo_dir, dir_bytes};
use crf::api::{router, AppState, ServeOptions, JSON_CONTENT_TYPE};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app(dir: &std::path::Path) -> Router {
    router(AppState::open(dir).unwrap(), &ServeOptions::default())
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    assert_eq!(res.headers()["content-type"], JSON_CONTENT_TYPE);
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, Method::GET, uri, None).await
}

#[tokio::test]
async fn usecase_report_totals() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    let (status, v) = get(&app, "/api/reports/usecase/RWW-demo").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["scores"]["total_readiness"], 5.8);
    assert_eq!(v["scores"]["display"]["total_readiness"], 5.8);
    assert_eq!(v["scores"]["display"]["total_aspiration"], 8.7);
    assert_eq!(v["scores"]["display"]["total_threshold"], 3.5);
    assert_eq!(v["feasibility"]["feasible"], true);
    assert_eq!(v["radar"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn whatif_identity_and_no_writes() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    let before = dir_bytes(&dir);
    let (_, report) = get(&app, "/api/reports/usecase/RWW-RM").await;
    let (status, same) = call(&app, Method::POST, "/api/whatif", Some(json!({"use_case_id": "RWW-RM"}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(same, report);

    let req = json!({
        "use_case_id": "RWW-demo",
        "overrides": [{"enabler_id": "response-plan", "dimension": "readiness", "level": "high"}]
    });
    let (status, v) = call(&app, Method::POST, "/api/whatif", Some(req)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["scores"]["categories"]["operation"]["readiness"], 9.0);
    assert_eq!(v["scores"]["display"]["total_readiness"], 7.0);
    assert_eq!(dir_bytes(&dir), before);

    let bad = json!({
        "use_case_id": "RWW-RM",
        "overrides": [{"enabler_id": "response-plan", "dimension": "importance", "level": "none"}]
    });
    let (status, v) = call(&app, Method::POST, "/api/whatif", Some(bad)).await;
    assert_eq!((status, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("importance-none-forbidden")));
    assert_eq!(dir_bytes(&dir), before);
}

#[tokio::test]
async fn put_then_get_round_trips() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    let (_, current) = get(&app, "/api/assessments/RWW-RM").await;
    let mut list = current["assessments"].clone();
    list[4]["readiness"] = json!("medium");
    list[4]["note"] = json!("procedure drafted");
    let (status, sheet) = call(&app, Method::PUT, "/api/assessments/RWW-RM", Some(list.clone())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(sheet["enablers"][4]["readiness_score"], 6);
    assert_eq!(sheet["scores"]["categories"]["operation"]["readiness"], 6.0);
    let (_, after) = get(&app, "/api/assessments/RWW-RM").await;
    assert_eq!(after["assessments"], list);
    assert!(!dir.join(".crf.lock").exists());
}

#[tokio::test]
async fn put_rejections() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    let before = dir_bytes(&dir);
    let (_, current) = get(&app, "/api/assessments/RWW-RM").await;

    let mut list = current["assessments"].clone();
    list[0]["importance"] = json!("none");
    let (status, v) = call(&app, Method::PUT, "/api/assessments/RWW-RM", Some(list)).await;
    assert_eq!((status, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("importance-none-forbidden")));

    let mut list = current["assessments"].clone();
    list[0]["enabler_id"] = json!("no-such-enabler");
    let (status, v) = call(&app, Method::PUT, "/api/assessments/RWW-RM", Some(list)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["errors"][0]["code"], "enabler-not-allowed");

    let (status, _) = call(&app, Method::PUT, "/api/assessments/RWW-LC", Some(current["assessments"].clone())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, v) = call(&app, Method::PUT, "/api/assessments/RWW-RM", Some(json!({"x": 1}))).await;
    assert_eq!((status, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("bad-request")));

    std::fs::write(dir.join(".crf.lock"), "1").unwrap();
    let (status, v) = call(&app, Method::PUT, "/api/assessments/RWW-RM", Some(current["assessments"].clone())).await;
    assert_eq!((status, v["code"].as_str()), (StatusCode::CONFLICT, Some("locked")));
    std::fs::remove_file(dir.join(".crf.lock")).unwrap();
    assert_eq!(dir_bytes(&dir), before);
}

#[tokio::test]
async fn not_found_cases() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    for uri in [
        "/api/reports/usecase/NOPE",
        "/api/reports/service/NOPE",
        "/api/assessments/NOPE",
        "/api/nothing-here",
        "/elsewhere",
    ] {
        let (status, v) = get(&app, uri).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert!(v["detail"].is_string());
    }
}

#[tokio::test]
async fn other_reads() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    let (_, catalog) = get(&app, "/api/catalog").await;
    assert_eq!(catalog["enablers"].as_array().unwrap().len(), 9);
    let (_, project) = get(&app, "/api/project").await;
    assert_eq!(project["considered_use_cases"], json!(["RWW-RM"]));
    let (_, service) = get(&app, "/api/reports/service/RWW").await;
    assert_eq!(service["service_id"], "RWW");
    assert_eq!(service["bars"].as_array().unwrap().len(), 4);
    let (_, overall) = get(&app, "/api/reports/overall").await;
    assert_eq!(overall["display"]["total_readiness"], 5.8);
    assert_eq!(overall["display"]["gap"], 2.9);
}

#[tokio::test]
async fn snapshot_endpoints() {
    let (_t, dir) = demo_dir();
    let app = app(&dir);
    let (status, a) = call(&app, Method::POST, "/api/snapshots", Some(json!({"label": "q1"}))).await;
    assert_eq!(status, StatusCode::CREATED);
    let a = a["id"].as_str().unwrap().to_string();
    let (_, list) = get(&app, "/api/snapshots").await;
    assert_eq!(list["snapshots"][0]["id"], a.as_str());
    let (status, d) = get(&app, &format!("/api/snapshots/diff?a={a}&b={a}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(d["diff"]["enablers"], json!([]));
    let (status, _) = get(&app, &format!("/api/snapshots/diff?a={a}&b=zzz")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = get(&app, "/api/snapshots/diff?a=1").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn serves_over_tcp() {
    use tokio::io::{AsyncReadExt, AsyncWriteExt};

    let (_t, dir) = demo_dir();
    let state = AppState::open(&dir).unwrap();
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(crf::api::serve(listener, state, ServeOptions::default(), async {
        let _ = stopped.await;
    }));

    let mut conn = tokio::net::TcpStream::connect(addr).await.unwrap();
    conn.write_all(b"GET /api/reports/usecase/RWW-demo HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")
        .await
        .unwrap();
    let mut raw = String::new();
    conn.read_to_string(&mut raw).await.unwrap();
    assert!(raw.starts_with("HTTP/1.1 200"), "{raw}");
    assert!(raw.contains("content-type: application/json; charset=utf-8"));
    assert!(raw.contains("\"total_readiness\": 5.8"));

    stop.send(()).unwrap();
    server.await.unwrap().unwrap();
}
