use std::path::PathBuf;
use std::process::{Command, Output};

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use tower::ServiceExt;

use ai_footprint::data::{DataBundle, DATA_DIR_ENV};
use ai_footprint_server::api::{router, ServeOptions};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ai-footprint"));
    c.env_remove(DATA_DIR_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aif-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[tokio::test]
async fn portfolio_json_matches_http() {
    let o = run(&["portfolio", "--format", "json"]);
    assert!(o.status.success());
    let app = router(DataBundle::embedded().unwrap(), &ServeOptions::default());
    let res = app
        .oneshot(Request::post("/v1/portfolio").body(Body::empty()).unwrap())
        .await
        .unwrap();
    let http = res.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(o.stdout, http.to_vec());
}

#[test]
fn clusters_csv_has_header_and_192_rows() {
    let o = run(&["clusters", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 193);
}

#[test]
fn score_prints_grade() {
    let o = run(&["score", "3.46e-8"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("-> B"), "{}", stdout(&o));
}

#[test]
fn project_positional_and_flag_agree() {
    let a = run(&["project", "intermediate", "--format", "json"]);
    let b = run(&["project", "--scenario", "intermediate", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn project_reads_scenario_file() {
    let dir = scratch("scenario");
    let path = dir.join("mine.json");
    let bundle = DataBundle::embedded().unwrap();
    let mut p = bundle.scenarios[0].clone();
    p.name = "mine".into();
    let doc = serde_json::json!({ "version": 1, "scenario": p });
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = run(&["project", path.to_str().unwrap(), "--format", "csv"]);
    std::fs::remove_dir_all(&dir).ok();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("mine"));
}

#[test]
fn sweep_and_offset_run() {
    let o = run(&[
        "sweep",
        "agents_cagr",
        "--range",
        "0.25:0.65:0.1",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = run(&["offset", "--scenario", "tech_breakthrough"]);
    assert!(o.status.success());
}

#[test]
fn out_flag_writes_file() {
    let dir = scratch("out");
    let path = dir.join("s.json");
    let o = run(&[
        "scenarios",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn region_override_changes_result() {
    let base = run(&["portfolio", "--format", "json"]);
    let eu = run(&["portfolio", "--format", "json", "--region", "EU-27=1"]);
    assert!(eu.status.success());
    assert_ne!(base.stdout, eu.stdout);
    let bad = run(&["portfolio", "--region", "US=0.5"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn data_dir_from_env_is_validated() {
    let dir = scratch("data");
    let mut spec = serde_json::to_value(ai_footprint::portfolio::PortfolioSpec::default()).unwrap();
    spec["genai_share"] = serde_json::json!(1.3);
    let doc = serde_json::json!({ "version": 1, "portfolio": spec });
    std::fs::write(dir.join("portfolio.json"), doc.to_string()).unwrap();
    let o = bin()
        .env(DATA_DIR_ENV, &dir)
        .arg("portfolio")
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("genai_share"), "{err}");
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        &["project", "nope"][..],
        &["score", "-1"],
        &["offset", "--target", "0.9999"],
        &["portfolio", "--format", "xml"],
        &["sweep", "agents_cagr"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).starts_with("error:"),
            "{args:?}"
        );
    }
    assert!(!run(&["bogus"]).status.success());
}
