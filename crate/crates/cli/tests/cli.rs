use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

const X: &str = "TMGD 1\nV a 0 0\nV b 2 2\nV c 0 2\nV d 2 0\nE e1 a b\nE e2 c d\n";

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tmgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::File::create(&p).unwrap().write_all(text.as_bytes()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmgraph")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn stats_of_a_single_crossing() {
    let p = tmp("x.txt", X);
    let o = run(&["stats", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n=4 e=2 cr=1"), "{}", stdout(&o));
}

#[test]
fn validate_exit_codes() {
    let good = tmp("good.txt", X);
    assert_eq!(run(&["validate", good.to_str().unwrap()]).status.code(), Some(0));
    // three collinear vertices on an edge
    let bad = tmp("collinear.txt", "TMGD 1\nV a 0 0\nV b 2 0\nV c 1 0\nE e a b\n");
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(1));
    let garbage = tmp("garbage.txt", "not a drawing\n");
    let o = run(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn parse_error_reports_line() {
    let p = tmp("badnum.txt", "TMGD 1\nV a 0 0\nV b 1/0 1\n");
    let o = run(&["stats", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn style_check_flags_empty_lens() {
    let out = std::env::temp_dir().join(format!("tmgraph-cli-{}-fpp.txt", std::process::id()));
    let o = run(&["construct", "--family", "gadget-full-parallel-pair", "--n", "2", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["style-check", out.to_str().unwrap(), "--style", "separated"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let sep = std::env::temp_dir().join(format!("tmgraph-cli-{}-sep.txt", std::process::id()));
    run(&["construct", "--family", "gadget-separated", "--n", "2", "-o", sep.to_str().unwrap()]);
    assert_eq!(run(&["style-check", sep.to_str().unwrap(), "--style", "separated"]).status.code(), Some(0));
}

#[test]
fn report_over_arc_family() {
    let o = run(&["--format", "json", "report", "--family", "separated-arc", "--n-range", "4..8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let verdict = v["columns"].as_array().unwrap().iter().position(|c| c == "verdict").unwrap();
    for r in rows {
        assert_ne!(r[verdict], "violated");
    }
}

#[test]
fn construct_transform_render_roundtrip() {
    let dir = std::env::temp_dir().join(format!("tmgraph-cli-{}-rt", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let k5 = dir.join("k5.txt");
    let planar = dir.join("p.txt");
    let split = dir.join("s.txt");
    let svg = dir.join("k5.svg");
    assert!(run(&["construct", "--family", "convex-complete", "--n", "5", "-o", k5.to_str().unwrap()]).status.success());
    assert!(run(&["transform", "planarize", k5.to_str().unwrap(), "-o", planar.to_str().unwrap()]).status.success());
    let s = stdout(&run(&["stats", planar.to_str().unwrap()]));
    assert!(s.starts_with("n=10 e=20 cr=0"), "{s}");
    assert!(run(&["transform", "split", k5.to_str().unwrap(), "--max-degree", "2", "-o", split.to_str().unwrap()]).status.success());
    let s = stdout(&run(&["stats", split.to_str().unwrap()]));
    assert!(s.contains("cr=5") && s.contains("max_degree=2"), "{s}");
    assert!(run(&["render", k5.to_str().unwrap(), "-o", svg.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"edge\"").count(), 10);
    assert!(text.contains("source sha256"));
}

#[test]
fn bisect_and_decompose_run() {
    let dir = std::env::temp_dir().join(format!("tmgraph-cli-{}-bd", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let k6 = dir.join("k6.txt");
    run(&["construct", "--family", "convex-complete", "--n", "6", "-o", k6.to_str().unwrap()]);
    let o = run(&["bisect", k6.to_str().unwrap(), "--style", "separated", "--oracle"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("width=8"), "{}", stdout(&o));
    let o = run(&["decompose", k6.to_str().unwrap(), "--style", "separated", "--heuristic"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("stop=true"));
}
