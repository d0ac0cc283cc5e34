mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pythcolor::{Coloring, UpperBound};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pythcolor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PYTHCOLOR_SOLVER").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_then_encode_is_the_reference_listing() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    assert_eq!(code(&run(&["gen", "--bound", "10", "--out", p(&t)])), 0);
    let o = run(&["encode", "--triples", p(&t)]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "c 10\np cnf 6 4\n1 2 3 0\n-1 -2 -3 0\n4 5 6 0\n-4 -5 -6 0\n"
    );
}

#[test]
fn pipeline_at_1000() {
    let dir = tempfile::tempdir().unwrap();
    let rd = dir.path().join("run");
    let o = run(&[
        "pipeline", "--bound", "1000", "--reduce", "--m", "2", "--method", "bfs", "--pool", "4",
        "--solver", "embedded", "--run-dir", p(&rd),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "manifest.json", "triples.json", "reduced.json", "trace.json", "formula.cnf", "remap.json",
        "plan.json", "campaign.json", "campaign.log.jsonl", "coloring.json", "violations.json",
        "coloring.ppm",
    ] {
        assert!(rd.join(f).exists(), "{f} missing");
    }
    assert_eq!(fs::read_dir(rd.join("cubes")).unwrap().count(), 4);
    let c = Coloring::load(rd.join("coloring.json")).unwrap();
    assert!(pythcolor::verify::verify(UpperBound::new(1000).unwrap(), &c).is_empty());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(rd.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["bound"], 1000);
    assert_eq!(manifest["config"]["m"], 2);
    assert_eq!(manifest["verdict"], "SAT");
    assert_eq!(manifest["exit_code"], 0);

    // The image has one cell per integer and a P6 header.
    let img = fs::read(rd.join("coloring.ppm")).unwrap();
    assert!(img.starts_with(b"P6\n"));

    let o = run(&["verify", "--bound", "1000", "--coloring", p(&rd.join("coloring.json"))]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let all_true: Coloring = (1..=10).map(|k| (k, true)).collect();
    all_true.save(&c).unwrap();
    let rep = dir.path().join("v.json");
    let o = run(&["verify", "--bound", "10", "--coloring", p(&c), "--report", p(&rep)]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(rep).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn sub_sts_none_found() {
    let o = run(&["analyze", "sub-sts", "--bound", "200", "--order", "7"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("none found"));
}

#[test]
fn analyze_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("levels.csv");
    assert_eq!(code(&run(&["analyze", "sum", "--bound", "500"])), 0);
    assert_eq!(code(&run(&["analyze", "bicycles", "--bound", "2000", "--max-k", "3"])), 0);
    assert_eq!(code(&run(&["analyze", "bfs", "--bound", "1000", "--reduce", "--csv", p(&csv)])), 0);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("level,"));
    let o = run(&[
        "analyze", "independence", "--bound", "1000", "--reduce", "--m", "1", "--trials", "3",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variance"], 0.0);
}

#[test]
fn usage_and_config_errors() {
    assert_eq!(code(&run(&[])), 3);
    assert_eq!(code(&run(&["pipeline"])), 3);
    assert_eq!(code(&run(&["gen", "--bound", "x"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let rd = dir.path().join("run");
    // External solver without a path.
    assert_eq!(
        code(&run(&["pipeline", "--bound", "100", "--solver", "external", "--run-dir", p(&rd)])),
        3
    );
    assert!(!rd.exists(), "config errors must be caught before any stage runs");
    assert_eq!(
        code(&run(&[
            "pipeline", "--bound", "100", "--solver", "external", "--solver-path", "/nonexistent/solver",
            "--run-dir", p(&rd),
        ])),
        3
    );
}

#[test]
fn expectation_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let rd = dir.path().join("run");
    let o = run(&["pipeline", "--bound", "200", "--reduce", "--expect", "unsat", "--run-dir", p(&rd)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn indeterminate_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("php.cnf");
    // Pigeonhole 7 into 6 needs many conflicts.
    let (n, h) = (7, 6);
    let var = |i: usize, j: usize| (i * h + j + 1) as i32;
    let mut clauses = Vec::new();
    for i in 0..n {
        clauses.push((0..h).map(|j| var(i, j)).collect::<Vec<_>>());
    }
    for j in 0..h {
        for a in 0..n {
            for b in a + 1..n {
                clauses.push(vec![-var(a, j), -var(b, j)]);
            }
        }
    }
    let doc = pythcolor::cnf::CnfDocument::new(vec![], (n * h) as u32, clauses).unwrap();
    pythcolor::cnf::write_file(&doc, &f).unwrap();
    let o = run(&["solve", p(&f), "--max-conflicts", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("s UNKNOWN"));
    let o = run(&["solve", p(&f)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("s UNSATISFIABLE"));
}

#[test]
fn external_path_through_own_solve() {
    // The binary's `solve` speaks the competition format, so it can stand in
    // for an external solver.
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("solver.sh");
    fs::write(&script, format!("#!/bin/sh\nexec {} solve \"$@\"\n", env!("CARGO_BIN_EXE_pythcolor"))).unwrap();
    use std::os::unix::fs::PermissionsExt;
    fs::set_permissions(&script, fs::Permissions::from_mode(0o755)).unwrap();
    let rd = dir.path().join("run");
    let o = bin()
        .args([
            "pipeline", "--bound", "1000", "--reduce", "--m", "2", "--pool", "2", "--solver", "external",
            "--run-dir", p(&rd), "--expect", "sat",
        ])
        .env("PYTHCOLOR_SOLVER", &script)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c = Coloring::load(rd.join("coloring.json")).unwrap();
    assert!(pythcolor::verify::verify(UpperBound::new(1000).unwrap(), &c).is_empty());
}

#[test]
fn campaign_through_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let bd = dir.path().join("bridge");
    let col = dir.path().join("c.json");
    let out = dir.path().join("campaign.json");
    let o = run(&[
        "campaign", "--bound", "1500", "--reduce", "--m", "2", "--pool", "2", "--bridge-dir", p(&bd),
        "--coloring", p(&col), "--out", p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(bd.join("cube_0.cnf").exists());
    let c = Coloring::load(&col).unwrap();
    assert!(pythcolor::verify::verify(UpperBound::new(1500).unwrap(), &c).is_empty());
}

#[test]
fn split_writes_cubes_and_plan() {
    let dir = tempfile::tempdir().unwrap();
    let od = dir.path().join("cubes");
    let o = run(&["split", "--bound", "500", "--reduce", "--method", "random", "--m", "3", "--plan-seed", "4", "--out-dir", p(&od)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_dir(&od).unwrap().count(), 9);
    let plan: serde_json::Value = serde_json::from_str(&fs::read_to_string(od.join("plan.json")).unwrap()).unwrap();
    assert_eq!(plan["method"], "random");
    assert_eq!(plan["specials"].as_array().unwrap().len(), 3);
}

#[test]
fn render_counts_match_scope() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let img = dir.path().join("i.ppm");
    let coloring: Coloring = (1..=100).map(|k| (k, k % 2 == 0)).collect();
    coloring.save(&c).unwrap();
    assert_eq!(code(&run(&["render", "--bound", "100", "--coloring", p(&c), "--out", p(&img), "--height", "10"])), 0);
    let bytes = fs::read(&img).unwrap();
    let header = b"P6\n10 10\n255\n";
    assert!(bytes.starts_with(header));
    let px = &bytes[header.len()..];
    let white = px.chunks(3).filter(|c| c == &[255, 255, 255]).count();
    assert_eq!(white, 100 - common::brute_scope(100).len());
}
