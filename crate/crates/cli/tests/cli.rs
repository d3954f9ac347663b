use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    stderr: String,
}

fn graphsa(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_graphsa"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRAPHSA_THREADS")
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().expect("exited normally"),
        json: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn corollary_on_a_thousand_rows_passes() {
    let d = tmp();
    let r = graphsa(d.path(), &["certify", "corollary", "--family", "triangular", "--rows", "1000", "--b1", "1", "--b2", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["verdict"], "pass");
    assert_eq!(r.json["c2"], 36.0);
    assert_eq!(r.json["certificates"][0]["scope"], "rows:1..1000");
}

#[test]
fn exit_codes_follow_the_contract() {
    let d = tmp();
    // malformed input
    assert_eq!(graphsa(d.path(), &["metric", "rho", "--graph", "missing.json", "--from", "1", "--to", "2"]).code, 1);
    std::fs::write(d.path().join("bad.json"), "{\"vertices\": [").unwrap();
    assert_eq!(graphsa(d.path(), &["metric", "intrinsic-check", "--graph", "bad.json"]).code, 1);
    assert_eq!(graphsa(d.path(), &["no-such-command"]).code, 1);
    assert_eq!(graphsa(d.path(), &["metric", "intrinsic-check", "--scope", "rows:4..2"]).code, 1);
    // failing certificate
    let fail = graphsa(d.path(), &["certify", "corollary", "--rows", "20", "--b1", "0", "--b2", "0"]);
    assert_eq!(fail.code, 2);
    assert_eq!(fail.json["verdict"], "fail");
    // search budget exhausted
    let short = graphsa(d.path(), &["metric", "rho", "--from", "1,1", "--to", "9,9", "--budget", "10"]);
    assert_eq!(short.code, 3);
    assert_eq!(short.json["exact"], false);
    assert_eq!(short.json["rho"], Value::Null);
    // help is not an error
    assert_eq!(graphsa(d.path(), &["--help"]).code, 0);
}

#[test]
fn asymmetric_graph_file_is_rejected() {
    let d = tmp();
    let doc = r#"{"vertices":[{"id":"a","mu":1},{"id":"b","mu":1}],
                  "edges":[{"u":"a","v":"b","b":1},{"u":"b","v":"a","b":2}]}"#;
    std::fs::write(d.path().join("g.json"), doc).unwrap();
    let r = graphsa(d.path(), &["metric", "intrinsic-check", "--graph", "g.json"]);
    assert_eq!(r.code, 1);
    assert!(!r.stderr.is_empty());
}

#[test]
fn rho_output_matches_the_closed_form() {
    let d = tmp();
    let r = graphsa(d.path(), &["metric", "rho", "--from", "1,1", "--to", "5,3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["exact"], true);
    let rho = r.json["rho"].as_f64().unwrap();
    let closed: f64 = (1..5).map(|j| ((j + 1) as f64).powf(-0.25)).sum();
    assert!((rho - closed).abs() <= 1e-12 * closed);
}

#[test]
fn built_truncation_round_trips_through_graph_files() {
    let d = tmp();
    let b = graphsa(d.path(), &["zoo", "build", "--family", "triangular", "--rows", "8", "--out", "g.json"]);
    assert_eq!(b.code, 0);
    assert_eq!(b.json["vertices"], 36);
    for cmd in [&["metric", "intrinsic-check", "--graph", "g.json"][..], &["metric", "jump-size", "--graph", "g.json"], &["op", "green-check", "--graph", "g.json", "--trials", "50"]] {
        let r = graphsa(d.path(), cmd);
        assert_eq!(r.code, 0, "{cmd:?}: {}", r.stderr);
    }
}

#[test]
fn op_apply_reads_cc_functions() {
    let d = tmp();
    std::fs::write(d.path().join("f.json"), r#"{"values":{"3,2":[1,0]}}"#).unwrap();
    // Deg + V = 0, so L δ_x vanishes at x and is -b/μ at the neighbors
    let at = graphsa(d.path(), &["op", "apply", "--f", "f.json", "--at", "3,2"]);
    assert_eq!(at.code, 0);
    assert!(at.json["value"][0].as_f64().unwrap().abs() < 1e-14);
    let all = graphsa(d.path(), &["op", "apply", "--f", "f.json"]);
    let up = all.json["values"]["4,2"][0].as_f64().unwrap();
    assert!((up + 1.0 / 4.0).abs() < 1e-14, "{up}");
    std::fs::write(d.path().join("bad.json"), r#"{"values":{"3,2":"x"}}"#).unwrap();
    assert_eq!(graphsa(d.path(), &["op", "apply", "--f", "bad.json"]).code, 1);
}

#[test]
fn green_check_on_random_graphs_passes() {
    let d = tmp();
    let r = graphsa(d.path(), &["op", "green-check", "--trials", "300", "--seed", "7"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["seed"], 7);
    // tolerances below the floor are raised, not honored
    let tight = graphsa(d.path(), &["op", "green-check", "--trials", "5", "--rel-tol", "0"]);
    assert!(tight.stderr.contains("floor"));
    assert!(tight.json["tolerance"]["rel"].as_f64().unwrap() > 0.0);
}

#[test]
fn theorem_and_audit_on_the_example() {
    let d = tmp();
    let t = graphsa(d.path(), &["certify", "theorem", "--rows", "25", "--ball", "1,1@4.5"]);
    assert_eq!(t.code, 0, "{}", t.stderr);
    let a = graphsa(d.path(), &["certify", "audit", "--rows", "15", "--samples", "200", "--seed", "42"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.json["audit"]["real_violations"], 0);
    assert_eq!(a.json["audit"]["imag_violations"], 0);
}

#[test]
fn user_split_for_theorem_check() {
    let d = tmp();
    assert_eq!(graphsa(d.path(), &["zoo", "build", "--family", r#"{"family":"path","n":4}"#, "--out", "p.json"]).code, 0);
    std::fs::write(d.path().join("split.json"), r#"{"u":{"values":{},"default":1},"w":{"values":{},"default":1}}"#).unwrap();
    let ok = graphsa(d.path(), &["certify", "theorem", "--graph", "p.json", "--split", "split.json", "--c1", "0", "--c2", "1"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    std::fs::write(d.path().join("neg.json"), r#"{"u":{"values":{"0":-1},"default":1},"w":{"values":{},"default":1}}"#).unwrap();
    assert_eq!(graphsa(d.path(), &["certify", "theorem", "--graph", "p.json", "--split", "neg.json"]).code, 2);
    assert_eq!(graphsa(d.path(), &["certify", "theorem", "--graph", "p.json"]).code, 1);
}

#[test]
fn golenia_spine_stabilizes() {
    let d = tmp();
    let r = graphsa(d.path(), &["golenia", "run", "--family", "triangular", "--spine", "column:1", "--delta", "1", "--lambda", "1", "--n", "100"]);
    assert_eq!(r.code, 0);
    let s = r.json["S_N"].as_f64().unwrap();
    assert!((s - 24.8695504869571).abs() < 1e-12, "{s}");
    assert_eq!(r.json["a"][2], 2.0);
    assert!(r.json["trend"].as_str().unwrap().contains("heuristic"));
    // λ = 0 cancels Deg + V on the spine
    assert_eq!(graphsa(d.path(), &["golenia", "run", "--lambda", "0", "--n", "10"]).code, 2);
}

#[test]
fn probes_carry_the_banner_and_write_plots() {
    let d = tmp();
    let e = graphsa(d.path(), &["probe", "eig", "--rows", "30", "--bottom", "3", "--trend", "10,20", "--plot-dir", "plots"]);
    assert_eq!(e.code, 0, "{}", e.stderr);
    assert_eq!(e.json["banner"], "HEURISTIC — not a self-adjointness proof");
    let lmin = e.json["eigenvalues"][0].as_f64().unwrap();
    assert!((lmin + 4.8997).abs() < 1e-4, "{lmin}");
    let f = graphsa(d.path(), &["probe", "deficiency", "--z", "0+1i", "--rows", "400", "--plot-dir", "plots"]);
    assert_eq!(f.code, 0);
    assert_eq!(f.json["log10_partial_norms"].as_array().unwrap().len(), 400);
    assert!(f.json["label"].as_str().unwrap().contains("heuristic"));
    for name in ["eigenvalues.csv", "lambda_min.csv", "lambda_min.svg", "partial_norms.csv", "partial_norms.svg"] {
        assert!(d.path().join("plots").join(name).is_file(), "{name}");
    }
    assert_eq!(graphsa(d.path(), &["probe", "deficiency", "--z", "2", "--rows", "50"]).code, 1);
}

#[test]
fn reproduce_example_is_deterministic() {
    let d = tmp();
    let run = |out: &str| graphsa(d.path(), &["reproduce-example", "--out", out, "--rows", "6", "--seed", "5", "--no-timestamp"]);
    let (a, b) = (run("a"), run("b"));
    assert_eq!((a.code, b.code), (0, 0), "{}", a.stderr);
    assert_eq!(a.json["failing_stages"], serde_json::json!([]));
    let read = |dir: &str| std::fs::read(d.path().join(dir).join("report.json")).unwrap();
    assert_eq!(read("a"), read("b"));
    let report: Value = serde_json::from_slice(&read("a")).unwrap();
    assert_eq!(report["schema"], "graphsa/example-report/1");
    assert_eq!(report["config"]["seed"], 5);
    assert!(report.get("timestamp").is_none());
    for f in ["rayleigh.csv", "rayleigh.svg", "golenia.csv", "golenia.svg", "rho.csv"] {
        assert!(d.path().join("a").join(f).is_file(), "{f}");
    }
    let stamped = graphsa(d.path(), &["reproduce-example", "--out", "c", "--rows", "3"]);
    assert!(stamped.json["timestamp"].is_string());
    let report: Value = serde_json::from_slice(&read("c")).unwrap();
    assert!(report["timestamp"].is_string());
}

#[test]
fn every_report_echoes_config_and_seed() {
    let d = tmp();
    std::fs::write(d.path().join("f.json"), r#"{"values":{"1,1":[1,0]}}"#).unwrap();
    let cmds: [&[&str]; 5] = [
        &["zoo", "info", "--row", "3", "--seed", "11"],
        &["metric", "jump-size", "--rows", "10", "--seed", "11"],
        &["op", "apply", "--f", "f.json", "--seed", "11"],
        &["golenia", "run", "--n", "5", "--seed", "11"],
        &["--seed", "11", "probe", "eig", "--rows", "5", "--threads", "1"],
    ];
    for cmd in cmds {
        let r = graphsa(d.path(), cmd);
        assert_eq!(r.code, 0, "{cmd:?}: {}", r.stderr);
        assert_eq!(r.json["seed"], 11, "{cmd:?}");
        assert_eq!(r.json["config"]["seed"], 11);
        assert_eq!(r.json["schema"], "graphsa/cli-report/1");
        assert!(r.json["version"].is_string());
    }
    let report = d.path().join("out.json");
    let r = graphsa(d.path(), &["zoo", "info", "--row", "2", "--report", report.to_str().unwrap(), "--no-timestamp"]);
    let written: Value = serde_json::from_slice(&std::fs::read(report).unwrap()).unwrap();
    assert_eq!(written, r.json);
}

#[test]
fn thread_count_from_the_environment() {
    let d = tmp();
    let out = Command::new(env!("CARGO_BIN_EXE_graphsa"))
        .args(["metric", "intrinsic-check", "--rows", "40"])
        .current_dir(d.path())
        .env("GRAPHSA_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["threads"], 2);
}
