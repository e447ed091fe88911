use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use ai_footprint::data::DataBundle;
use ai_footprint::portfolio::PortfolioSpec;
use ai_footprint_server::api::{router, ServeOptions};

fn app() -> Router {
    router(DataBundle::embedded().unwrap(), &ServeOptions::default())
}

async fn call(app: Router, req: Request<Body>) -> (StatusCode, axum::http::HeaderMap, String) {
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, headers, String::from_utf8(bytes.to_vec()).unwrap())
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

fn post(uri: &str, body: impl Into<Body>) -> Request<Body> {
    Request::post(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.into())
        .unwrap()
}

#[tokio::test]
async fn clusters_lists_every_combination() {
    let (status, headers, body) = call(app(), get("/v1/clusters")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(headers[header::CONTENT_TYPE], "application/json");
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 192);
}

#[tokio::test]
async fn scenarios_returns_presets() {
    let (status, _, body) = call(app(), get("/v1/scenarios")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 5);
    assert!(names.contains(&"intermediate"));
}

#[tokio::test]
async fn project_intermediate_energy_index() {
    let (status, _, body) =
        call(app(), post("/v1/project", r#"{"scenario":"intermediate"}"#)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let v: Value = serde_json::from_str(&body).unwrap();
    let energy = v[0]["index"]["final_energy"].as_f64().unwrap();
    assert!((energy / 755.0 - 1.0).abs() < 0.2, "energy index {energy}");
}

#[tokio::test]
async fn project_without_body_runs_all_presets() {
    let (status, _, body) = call(app(), post("/v1/project", "")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[tokio::test]
async fn project_accepts_inline_params() {
    let bundle = DataBundle::embedded().unwrap();
    let mut p = bundle.scenarios[4].clone();
    p.name = "custom".into();
    p.grid_reduction = 0.5;
    let (status, _, body) = call(
        app(),
        post("/v1/project", json!({ "scenario": p }).to_string()),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v[0]["scenario"], "custom");
}

#[tokio::test]
async fn project_does_not_read_files() {
    let (status, _, body) = call(app(), post("/v1/project", r#"{"scenario":"/etc/passwd"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body.contains("unknown"), "{body}");
}

#[tokio::test]
async fn score_grades_energy() {
    let (status, _, body) = call(app(), get("/v1/score?kwh=3.46e-8")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["grade"], "B");
}

#[tokio::test]
async fn score_rejects_bad_query() {
    for uri in ["/v1/score", "/v1/score?kwh=abc", "/v1/score?kwh=-1"] {
        let (status, _, body) = call(app(), get(uri)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}");
        let v: Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["field"], "kwh");
    }
}

#[tokio::test]
async fn portfolio_body_matches_default() {
    let spec = serde_json::to_string(&PortfolioSpec::default()).unwrap();
    let (s1, _, empty) = call(app(), post("/v1/portfolio", "")).await;
    let (s2, _, explicit) = call(app(), post("/v1/portfolio", spec)).await;
    assert_eq!(s1, StatusCode::OK);
    assert_eq!(s2, StatusCode::OK);
    assert_eq!(empty, explicit);
    let v: Value = serde_json::from_str(&empty).unwrap();
    let kwh = v["total"]["final_energy"].as_f64().unwrap();
    assert!((kwh / 3.466e6 - 1.0).abs() < 0.01, "{kwh}");
}

#[tokio::test]
async fn malformed_body_is_400() {
    let (status, _, body) = call(app(), post("/v1/portfolio", "{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["error"], "bad_request");

    let (status, _, body) =
        call(app(), post("/v1/project", r#"{"scenaryo":"intermediate"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["field"], "scenaryo");
}

#[tokio::test]
async fn out_of_range_share_is_400_with_field() {
    let mut spec = serde_json::to_value(PortfolioSpec::default()).unwrap();
    spec["genai_share"] = json!(1.3);
    let (status, _, body) = call(app(), post("/v1/portfolio", spec.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["field"], "genai_share");
}

#[tokio::test]
async fn sweep_returns_points() {
    let req = json!({"param": "agents_cagr", "values": [0.25, 0.35, 0.45, 0.55, 0.65]});
    let (status, _, body) = call(app(), post("/v1/sweep", req.to_string())).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 5);

    let (status, _, _) = call(app(), post("/v1/sweep", r#"{"param":"agents_cagr"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _, _) = call(
        app(),
        post("/v1/sweep", r#"{"param":"colour","range":"0:1:0.5"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn offset_solves_and_reports_unreachable() {
    let (status, _, body) = call(app(), post("/v1/offset", r#"{"scenario":"intermediate"}"#)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let v: Value = serde_json::from_str(&body).unwrap();
    assert!((v["ghg_index"].as_f64().unwrap() - 10.0).abs() < 1e-6);

    // Embodied impacts alone exceed a 99.99% cut.
    let (status, _, body) = call(app(), post("/v1/offset", r#"{"target":0.9999}"#)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["error"], "unreachable");
}

#[tokio::test]
async fn unknown_route_is_404_json() {
    let (status, _, body) = call(app(), get("/v1/nothing")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(serde_json::from_str::<Value>(&body).is_ok());
}

#[tokio::test]
async fn cors_headers() {
    let req = Request::get("/v1/scenarios")
        .header(header::ORIGIN, "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let (_, headers, _) = call(app(), req).await;
    assert_eq!(headers[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");

    let preflight = Request::builder()
        .method("OPTIONS")
        .uri("/v1/portfolio")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .header(header::ACCESS_CONTROL_REQUEST_HEADERS, "content-type")
        .body(Body::empty())
        .unwrap();
    let (status, headers, _) = call(app(), preflight).await;
    assert!(status.is_success());
    assert!(headers[header::ACCESS_CONTROL_ALLOW_METHODS]
        .to_str()
        .unwrap()
        .contains("POST"));
}

#[tokio::test]
async fn cors_origin_list() {
    let opts = ServeOptions {
        origins: vec!["http://ui.example".into()],
        static_dir: None,
    };
    let app = router(DataBundle::embedded().unwrap(), &opts);
    let req = Request::get("/v1/scenarios")
        .header(header::ORIGIN, "http://ui.example")
        .body(Body::empty())
        .unwrap();
    let (_, headers, _) = call(app.clone(), req).await;
    assert_eq!(
        headers[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://ui.example"
    );
    let req = Request::get("/v1/scenarios")
        .header(header::ORIGIN, "http://other.example")
        .body(Body::empty())
        .unwrap();
    let (_, headers, _) = call(app, req).await;
    assert!(headers.get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_requests_agree() {
    let app = app();
    let body = r#"{"scenario":"high_adoption"}"#;
    let tasks: Vec<_> = (0..16)
        .map(|_| {
            let app = app.clone();
            tokio::spawn(async move { call(app, post("/v1/project", body)).await.2 })
        })
        .collect();
    let mut out = Vec::new();
    for t in tasks {
        out.push(t.await.unwrap());
    }
    assert!(out.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn static_dir_is_served() {
    let dir = std::env::temp_dir().join(format!("aif-static-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<p>ui</p>").unwrap();
    let opts = ServeOptions {
        origins: vec![],
        static_dir: Some(dir.clone()),
    };
    let app = router(DataBundle::embedded().unwrap(), &opts);
    let (status, _, body) = call(app, get("/index.html")).await;
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, "<p>ui</p>");
}
