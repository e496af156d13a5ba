use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn geochrom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geochrom")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad stdout ({e}): {} / {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let file = path(dir, name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", s(&file)]);
    let out = geochrom(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn figure6_numbers() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "f6.json", &["figure6"]);
    let px = stdout_json(&geochrom(&["px", s(&g)]));
    assert_eq!(px["px"], 5);
    let chi = stdout_json(&geochrom(&["chi", s(&g)]));
    assert_eq!(chi["chi"], 3);
    let bound = stdout_json(&geochrom(&["bound", "lower", s(&g)]));
    assert_eq!(bound["lower_bound"], 6);

    let out = geochrom(&["x", s(&g), "--max-n", "7"]);
    assert!(out.status.success());
    let x = stdout_json(&out);
    assert_eq!(x["x"], 6);

    // the reported target and map check out independently
    let x_file = path(&dir, "x.json");
    std::fs::write(&x_file, &out.stdout).unwrap();
    let verified = stdout_json(&geochrom(&["verify", s(&g), s(&x_file), s(&x_file)]));
    assert_eq!(verified["geometric_hom"], true);
}

#[test]
fn star_map_verifies() {
    let dir = TempDir::new().unwrap();
    let map = path(&dir, "map.json");
    let star = gen(&dir, "star3.json", &["star", "--k", "3", "--map-out", s(&path(&dir, "map.json"))]);
    let k4 = gen(&dir, "k4.json", &["convex", "--n", "4"]);
    let out = geochrom(&["verify", s(&star), s(&k4), s(&map)]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["graph_hom"], true);
    assert_eq!(v["geometric_hom"], true);

    // a constant map is neither
    std::fs::write(&map, "[0,0,0,0,0,0]").unwrap();
    let out = geochrom(&["verify", s(&star), s(&k4), s(&map)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["graph_hom"], false);
}

#[test]
fn lift_output_verifies() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "f3.json", &["figure3-left"]);
    for method in ["dist2", "indep2n", "indep3n", "smallchi"] {
        let out = geochrom(&["lift", "--method", method, s(&g)]);
        assert!(out.status.success(), "{method}: {}", String::from_utf8_lossy(&out.stderr));
        let report = stdout_json(&out);
        let size = report["target_size"].as_u64().unwrap().to_string();
        let target = gen(&dir, "target.json", &["convex", "--n", &size]);
        let report_file = path(&dir, "report.json");
        std::fs::write(&report_file, &out.stdout).unwrap();
        let v = stdout_json(&geochrom(&["verify", s(&g), s(&target), s(&report_file)]));
        assert_eq!(v["geometric_hom"], true, "{method}");
    }
    let close = gen(&dir, "close.json", &["figure3-right"]);
    let out = geochrom(&["lift", "--method", "dist2", s(&close)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    // three collinear points
    std::fs::write(&bad, r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":1},{"id":2,"x":2,"y":2}],"edges":[]}"#)
        .unwrap();
    let out = geochrom(&["chi", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "graph");
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);

    let out = geochrom(&["chi", s(&path(&dir, "missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = geochrom(&["gen", "figure9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = geochrom(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unresolved_x_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "f6.json", &["figure6"]);
    let out = geochrom(&["x", s(&g), "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "unresolved");
    assert_eq!(v["searched_to"], 5);
}

#[test]
fn gen_round_trips_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["random", "--vertices", "11", "--p", "0.3", "--min-dist", "1", "--seed", "9"];
    let a = gen(&dir, "a.json", &args);
    let b = gen(&dir, "b.json", &args);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let parsed = geochrom::GeometricGraph::from_json(&text).unwrap();
    assert_eq!(parsed.to_json(), text);

    let first = geochrom(&["px", s(&a)]);
    let second = geochrom(&["px", s(&a)]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn catalog_directory_feeds_x() {
    let dir = TempDir::new().unwrap();
    let out = geochrom(&["catalog", "--n", "4", "--out", s(dir.path())]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["count"], 2);
    assert!(dir.path().join("k4.catalog.json").exists());

    let g = gen(&dir, "star.json", &["star", "--k", "2"]);
    let x = stdout_json(&geochrom(&["x", s(&g), "--max-n", "4", "--catalog", s(dir.path())]));
    assert_eq!(x["x"], 4);
}

#[test]
fn render_writes_svg() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "f6.json", &["figure6"]);
    let svg = path(&dir, "f6.svg");
    let out = geochrom(&["render", s(&g), "-o", s(&svg)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<line").count(), 5);
    assert_eq!(text.matches("fill=\"red\"").count(), 4);
}
