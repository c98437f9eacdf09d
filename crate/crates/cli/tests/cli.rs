//! End-to-end runs of the `geodrg` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use geodrg_core::filters::report_for_geometric;
use geodrg_core::GeometricArray;
use serde_json::Value;

fn geodrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geodrg")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no {name}"))
}

#[test]
fn build_writes_fixture_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = geodrg(&["build", "johnson", "8", "3", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=56 k=15 D=3\n");
    for ext in ["graph", "cover"] {
        let built = fs::read(dir.path().join(format!("johnson-8-3.{ext}"))).unwrap();
        assert_eq!(built, fs::read(fixture(&format!("johnson-8-3.{ext}"))).unwrap(), "{ext}");
    }
}

#[test]
fn build_grassmann_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = geodrg(&["build", "grassmann", "2", "6", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "n=1395 k=98 D=3\n");
}

#[test]
fn build_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let o = geodrg(&["build", "johnson", "5", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 2D"));
    assert_eq!(geodrg(&["build", "petersen"]).status.code(), Some(2));
}

#[test]
fn verify_matches_golden_reports() {
    for stem in ["johnson-8-3", "hamming-3-3"] {
        let g = fixture(&format!("{stem}.graph"));
        let c = fixture(&format!("{stem}.cover"));
        let o = geodrg(&["verify", g.to_str().unwrap(), c.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{stem}");
        let golden = fs::read_to_string(fixture(&format!("{stem}.report.json"))).unwrap();
        assert_eq!(stdout(&o), golden, "{stem}");
    }
}

#[test]
fn verify_reports_branches() {
    let g = fixture("johnson-8-3.graph");
    let c = fixture("johnson-8-3.cover");
    let r = json(&geodrg(&["verify", g.to_str().unwrap(), c.to_str().unwrap(), "--exhaustive"]));
    assert_eq!(r["branch"]["branch"], "B2");
    assert_eq!(check(&r, "sigma_srg")["lhs"], "(21,10,5,4)");
    assert_eq!(check(&r, "sigma_unique")["witness"]["values"]["pairs"], "840");
    let r = json(&geodrg(&["verify", fixture("hamming-3-3.graph").to_str().unwrap()]));
    assert_eq!(r["branch"]["branch"], "B1");
    assert_eq!(r["input"]["cover"], "search");
    assert_eq!(r["overall"], "pass");
}

#[test]
fn verify_deleted_edge_fails_with_witness() {
    let text = fs::read_to_string(fixture("hamming-3-3.graph")).unwrap();
    let broken: String = text
        .lines()
        .map(|l| match l {
            "0: 1 2 3 6 9 18" => "0: 2 3 6 9 18".to_string(),
            "1: 0 2 4 7 10 19" => "1: 2 4 7 10 19".to_string(),
            _ => l.to_string(),
        })
        .map(|l| l + "\n")
        .collect();
    assert_ne!(broken, text);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.graph");
    fs::write(&p, broken).unwrap();
    let o = geodrg(&["verify", p.to_str().unwrap(), fixture("hamming-3-3.cover").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    let v = check(&r, "distance_regular");
    assert_eq!(v["status"], "fail");
    assert!(v["witness"]["values"]["x"].is_string());
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.graph");
    fs::write(&p, "n 3\n0: 1\n1: 0 7\n").unwrap();
    let o = geodrg(&["verify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(geodrg(&["verify", "/nonexistent.graph"]).status.code(), Some(2));
}

#[test]
fn spectrum_and_conversions() {
    let r = json(&geodrg(&["spectrum", "--array", "{9,4,1;1,4,9}"]));
    assert_eq!(r["eigenvalues"], serde_json::json!(["9", "3", "-1", "-3"]));
    assert_eq!(r["multiplicities"], serde_json::json!(["1", "5", "9", "5"]));
    let r = json(&geodrg(&["spectrum", "--classical", "3,1,1,5"]));
    assert_eq!(r["source"], "classical-closed-form");
    assert_eq!(r["eigenvalues"], serde_json::json!(["15", "7", "1", "-3"]));

    let o = geodrg(&["geo2array", "--phi", "1,2,3", "--tau", "1,2,3", "--beta", "5"]);
    assert_eq!(stdout(&o), "{15,8,3;1,4,9}\n");
    let o = geodrg(&["array2geo", "{49,36,16;1,6,28}"]);
    assert_eq!(stdout(&o), "phi=(1,2,4) tau=(1,3,7) beta=7\n");
    assert_eq!(geodrg(&["array2geo", "{49,36,16;1,6,28}", "--r", "5"]).status.code(), Some(2));
    assert_eq!(geodrg(&["spectrum", "--array", "{1,2"]).status.code(), Some(2));
}

#[test]
fn filter_and_classify() {
    let o = geodrg(&["filter", "--phi", "1,2,3", "--tau", "1,4,6", "--beta", "30"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(check(&json(&o), "main1")["status"], "fail");
    let o = geodrg(&["filter", "--classical", "3,2,2,14"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = geodrg(&["filter", "--array", "{15,8,3;1,4,9}"]);
    assert_eq!(json(&o)["branch"]["branch"], "B2");

    let o = geodrg(&["classify", "--phi", "1,2,4", "--tau", "1,3,7", "--beta", "7"]);
    assert_eq!(json(&o)["branch"], "B4-or-B5");
    let o = geodrg(&["classify", "--phi", "1,3,7", "--tau", "1,3,7", "--beta", "14"]);
    assert_eq!(json(&o)["branch"], "B3");
}

fn enumerate(args: &[&str]) -> Output {
    let mut all = vec!["enumerate"];
    all.extend_from_slice(args);
    geodrg(&all)
}

#[test]
fn enumerate_is_deterministic_and_contains_families() {
    let one = enumerate(&["--tau-d", "2..3", "--beta", "1..6", "--workers", "1"]);
    let four = enumerate(&["--tau-d", "2..3", "--beta", "1..6", "--workers", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let recs: Vec<Value> = stdout(&one).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let has = |phi: Value, tau: Value, beta: i64| {
        recs.iter().any(|r| r["geometric"]["phi"] == phi && r["geometric"]["tau"] == tau && r["geometric"]["beta"] == beta)
    };
    assert!(has(serde_json::json!([1, 1, 1]), serde_json::json!([1, 2, 3]), 2));
    for beta in 3..=6 {
        assert!(has(serde_json::json!([1, 2, 3]), serde_json::json!([1, 2, 3]), beta));
    }

    let grass = enumerate(&["--tau-d", "7", "--beta", "7..14"]);
    let recs: Vec<Value> = stdout(&grass).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let at = |phi: Value, beta: i64| recs.iter().any(|r| r["geometric"]["phi"] == phi && r["geometric"]["beta"] == beta);
    assert!(at(serde_json::json!([1, 3, 7]), 14));
    assert!(at(serde_json::json!([1, 2, 4]), 7));
}

#[test]
fn enumerated_records_reproduce_their_verdicts() {
    let o = enumerate(&["--tau-d", "3", "--beta", "2..5"]);
    for line in stdout(&o).lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        let ints = |v: &Value| v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect::<Vec<_>>();
        let g = &r["geometric"];
        let geo = GeometricArray::new(ints(&g["phi"]), ints(&g["tau"]), g["beta"].as_i64().unwrap()).unwrap();
        let again = serde_json::to_value(report_for_geometric(&geo).checks).unwrap();
        assert_eq!(r["checks"], again);
    }
}

#[test]
fn enumerate_edge_cases() {
    let o = enumerate(&["--tau-d", "5..4", "--beta", "1..3"]);
    assert_eq!((o.status.code(), o.stdout.len()), (Some(0), 0));
    assert_eq!(enumerate(&["--diameter", "2", "--tau-d", "3", "--beta", "1..3"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.jsonl");
    let o = enumerate(&["--tau-d", "3", "--beta", "2", "--phi-prefix", "1,1", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(p).unwrap();
    assert!(text.lines().all(|l| l.contains("\"phi\":[1,1,")));
    assert!(!text.is_empty());
}
