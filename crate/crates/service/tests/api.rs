use std::collections::BTreeSet;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use taxunify::catalog::{load_project, save_project};
use taxunify::{fixtures, LoadMode};
use taxunify_service::{router, AppState, Workspace, WorkspaceError};
use tower::ServiceExt;

struct Harness {
    dir: tempfile::TempDir,
    app: Router,
}

fn harness(secret: Option<&str>) -> Harness {
    let dir = tempfile::tempdir().unwrap();
    for p in fixtures::all() {
        save_project(&p, &dir.path().join(format!("{}.project.json", p.id))).unwrap();
    }
    save_project(&fixtures::no_previous(), &dir.path().join("np.json")).unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let ws = Workspace::open(dir.path()).unwrap();
    Harness {
        app: router(AppState::new(ws, secret.map(String::from))),
        dir,
    }
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, body)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Vec<u8>) {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

fn put_mapping(id: &str, revision: Option<&str>, body: &Value) -> Request<Body> {
    let mut b = Request::put(format!("/api/projects/{id}/mapping"))
        .header("content-type", "application/json");
    if let Some(r) = revision {
        b = b.header("x-expected-revision", r);
    }
    b.body(Body::from(body.to_string())).unwrap()
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

fn fan_pairs() -> Value {
    json!({
        "projectId": "fan",
        "pairs": [
            {"unifiedNodeId": "c1", "previousSchemeId": "T1", "previousNodeId": "d1"},
            {"unifiedNodeId": "c2", "previousSchemeId": "T1", "previousNodeId": "d2"},
            {"unifiedNodeId": "c2", "previousSchemeId": "T1", "previousNodeId": "d3"}
        ]
    })
}

#[tokio::test]
async fn lists_projects_sorted() {
    let h = harness(None);
    let (status, body) = get(&h.app, "/api/projects").await;
    assert_eq!(status, StatusCode::OK);
    let ids: Vec<String> = json_of(&body)
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        ids,
        ["bijection", "fan", "identity", "no-previous", "two-scheme"]
    );
}

#[tokio::test]
async fn project_and_metrics_bytes() {
    let h = harness(None);
    let fan = fixtures::fan();
    let (status, body) = get(&h.app, "/api/projects/fan").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(String::from_utf8(body).unwrap(), fan.to_json());

    let (status, body) = get(&h.app, "/api/projects/fan/metrics").await;
    assert_eq!(status, StatusCode::OK);
    let expected = taxunify::report::metrics_json(&fan.metric_report().unwrap());
    assert_eq!(String::from_utf8(body).unwrap(), expected);
}

#[tokio::test]
async fn unknown_project_is_404() {
    let h = harness(None);
    for uri in [
        "/api/projects/nope",
        "/api/projects/nope/metrics",
        "/api/projects/nope/session",
    ] {
        assert_eq!(get(&h.app, uri).await.0, StatusCode::NOT_FOUND, "{uri}");
    }
    let (status, _) = send(&h.app, put_mapping("nope", Some("0"), &fan_pairs())).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn metrics_without_previous_schemes_is_422() {
    let h = harness(None);
    let (status, body) = get(&h.app, "/api/projects/no-previous/metrics").await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(json_of(&body)["error"].is_string());
}

#[tokio::test]
async fn commit_bumps_revision_and_persists() {
    let h = harness(None);
    let (status, body) = send(&h.app, put_mapping("fan", Some("0"), &fan_pairs())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(json_of(&body), json!({"revision": 1}));

    let on_disk = load_project(&h.dir.path().join("fan.project.json"), LoadMode::Strict).unwrap();
    assert_eq!(on_disk.revision, 1);
    assert_eq!(on_disk.mapping.len(), 3);

    let (_, body) = get(&h.app, "/api/projects/fan/metrics").await;
    let m = json_of(&body);
    assert_eq!(m["laconicity"]["value"]["decimal"], "1.0000");
    assert_eq!(m["completeness"]["value"]["decimal"], "1.0000");
    assert_eq!(m["lucidity"]["value"]["decimal"], "0.5000");
}

#[tokio::test]
async fn stale_revision_is_409() {
    let h = harness(None);
    assert_eq!(
        send(&h.app, put_mapping("fan", Some("0"), &fan_pairs()))
            .await
            .0,
        StatusCode::OK
    );
    let (status, body) = send(&h.app, put_mapping("fan", Some("0"), &fan_pairs())).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(json_of(&body)["currentRevision"], 1);
}

#[tokio::test]
async fn missing_revision_is_428_and_if_match_works() {
    let h = harness(None);
    let (status, _) = send(&h.app, put_mapping("fan", None, &fan_pairs())).await;
    assert_eq!(status, StatusCode::PRECONDITION_REQUIRED);

    let req = Request::put("/api/projects/fan/mapping")
        .header("if-match", "\"0\"")
        .body(Body::from(fan_pairs().to_string()))
        .unwrap();
    assert_eq!(send(&h.app, req).await.0, StatusCode::OK);

    let (status, _) = send(&h.app, put_mapping("fan", Some("one"), &fan_pairs())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn dangling_pair_is_422_and_nothing_changes() {
    let h = harness(None);
    let body = json!({
        "projectId": "fan",
        "pairs": [{"unifiedNodeId": "c9", "previousSchemeId": "T1", "previousNodeId": "d1"}]
    });
    let (status, resp) = send(&h.app, put_mapping("fan", Some("0"), &body)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(
        json_of(&resp)["violations"][0]["violation"],
        "unknownUnifiedNode"
    );
    let (_, project) = get(&h.app, "/api/projects/fan").await;
    assert_eq!(json_of(&project)["revision"], 0);
}

#[tokio::test]
async fn wrong_project_id_in_body_is_422() {
    let h = harness(None);
    let mut body = fan_pairs();
    body["projectId"] = json!("bijection");
    let (status, _) = send(&h.app, put_mapping("fan", Some("0"), &body)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn malformed_body_is_400() {
    let h = harness(None);
    let req = Request::put("/api/projects/fan/mapping")
        .header("x-expected-revision", "0")
        .body(Body::from("{not json"))
        .unwrap();
    assert_eq!(send(&h.app, req).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_commits_leave_no_gaps() {
    let h = harness(None);
    let mut tasks = Vec::new();
    for _ in 0..100 {
        let app = h.app.clone();
        tasks.push(tokio::spawn(async move {
            loop {
                let (_, body) = get(&app, "/api/projects/fan/session").await;
                let rev = json_of(&body)["revision"].as_u64().unwrap();
                let (status, body) = send(
                    &app,
                    put_mapping("fan", Some(&rev.to_string()), &fan_pairs()),
                )
                .await;
                match status {
                    StatusCode::OK => return json_of(&body)["revision"].as_u64().unwrap(),
                    StatusCode::CONFLICT => continue,
                    other => panic!("unexpected {other}"),
                }
            }
        }));
    }
    let mut seen = BTreeSet::new();
    for t in tasks {
        assert!(seen.insert(t.await.unwrap()));
    }
    assert_eq!(seen, (1..=100).collect());
    let on_disk = load_project(&h.dir.path().join("fan.project.json"), LoadMode::Strict).unwrap();
    assert_eq!(on_disk.revision, 100);
}

#[tokio::test]
async fn advisory_lock_lifecycle() {
    let h = harness(None);
    let lock = |method: &str, token: &str| {
        Request::builder()
            .method(method)
            .uri("/api/projects/fan/lock")
            .body(Body::from(json!({"clientToken": token}).to_string()))
            .unwrap()
    };
    let (status, body) = send(&h.app, lock("POST", "alice")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(json_of(&body)["lockHolder"]["clientToken"], "alice");

    assert_eq!(send(&h.app, lock("POST", "alice")).await.0, StatusCode::OK);
    assert_eq!(
        send(&h.app, lock("POST", "bob")).await.0,
        StatusCode::LOCKED
    );
    assert_eq!(
        send(&h.app, lock("DELETE", "bob")).await.0,
        StatusCode::LOCKED
    );
    assert_eq!(
        send(&h.app, lock("DELETE", "alice")).await.0,
        StatusCode::NO_CONTENT
    );

    let (_, body) = get(&h.app, "/api/projects/fan/session").await;
    assert_eq!(json_of(&body)["lockHolder"], Value::Null);
    assert_eq!(send(&h.app, lock("POST", "bob")).await.0, StatusCode::OK);
}

#[tokio::test]
async fn expired_lock_is_free() {
    let h = harness(None);
    let req = |token: &str, ttl: u64| {
        Request::post("/api/projects/fan/lock")
            .body(Body::from(
                json!({"clientToken": token, "ttlSeconds": ttl}).to_string(),
            ))
            .unwrap()
    };
    assert_eq!(send(&h.app, req("alice", 0)).await.0, StatusCode::OK);
    assert_eq!(send(&h.app, req("bob", 60)).await.0, StatusCode::OK);
}

#[tokio::test]
async fn shared_secret_guards_everything_but_health() {
    let h = harness(Some("s3cret"));
    assert_eq!(get(&h.app, "/api/health").await.0, StatusCode::OK);
    assert_eq!(
        get(&h.app, "/api/projects").await.0,
        StatusCode::UNAUTHORIZED
    );
    let req = Request::get("/api/projects")
        .header("x-taxunify-secret", "wrong")
        .body(Body::empty())
        .unwrap();
    assert_eq!(send(&h.app, req).await.0, StatusCode::UNAUTHORIZED);
    let req = Request::get("/api/projects")
        .header("x-taxunify-secret", "s3cret")
        .body(Body::empty())
        .unwrap();
    assert_eq!(send(&h.app, req).await.0, StatusCode::OK);
}

#[test]
fn duplicate_project_ids_refuse_to_open() {
    let dir = tempfile::tempdir().unwrap();
    let fan = fixtures::fan();
    save_project(&fan, &dir.path().join("a.json")).unwrap();
    save_project(&fan, &dir.path().join("b.json")).unwrap();
    assert!(matches!(
        Workspace::open(dir.path()),
        Err(WorkspaceError::DuplicateProject { .. })
    ));
}
