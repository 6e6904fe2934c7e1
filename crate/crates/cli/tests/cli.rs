use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn dng(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dng"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_line_middle() {
    let o = dng(&["solve", &fixture("line-middle.json"), "--method", "brute,quotient"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("brute: 1\n"), "{out}");
    assert!(out.contains("quotient: 1\n"));
    assert!(out.contains("brute vs quotient: agree"));
}

#[test]
fn solve_triangle_interior_all_methods() {
    let o = dng(&["solve", &fixture("triangle-interior.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let methods = v["methods"].as_array().unwrap();
    assert_eq!(methods[0]["nim"], 1);
    assert_eq!(methods[1]["nim"], 1);
    assert_eq!(methods[2]["status"], "not_applicable");
}

#[test]
fn solve_spider_disagrees() {
    let o = dng(&["solve", &fixture("spider-tree.json"), "--method", "brute,formula"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("brute: 2\n"), "{out}");
    assert!(out.contains("formula: 3 [vertex.w1.e+o+]"));
    assert!(out.contains("errata: vertex.w1.e+o+"));
}

#[test]
fn solve_reports_table_gap_with_fallback() {
    let o = dng(&["solve", &fixture("edge-gap-tree.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("table gap [edge.w1.gap] (signature (0,2)); quotient fallback 1"));
}

#[test]
fn solve_writes_dot() {
    let dir = std::env::temp_dir().join(format!("dng-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("triangle.dot");
    let o = dng(&["solve", &fixture("triangle-interior.json"), "--dot-out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph structure {"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_errors_exit_1_and_name_the_field() {
    let dir = std::env::temp_dir().join(format!("dng-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"kind":"tree_vertex","ground":[1,2],"data":{"edges":[[1]]},"winning":[1]}"#).unwrap();
    let o = dng(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("data.edges[0]"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();

    let o = dng(&["solve", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn axiom_violation_exits_2() {
    let o = dng(&["solve", &fixture("bad-axiom.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("axiom 2"));
}

#[test]
fn diagrams() {
    let o = dng(&["diagram", &fixture("triangle-interior.json")]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 7);
    assert_eq!(dot.matches(" -> ").count(), 9);

    let o = dng(&["diagram", &fixture("spider-tree.json")]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 5);
    assert_eq!(dot.matches(" -> ").count(), 4);

    let o = dng(&["diagram", &fixture("single-point.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degenerate game"));
}

#[test]
fn diagram_is_deterministic() {
    let a = dng(&["diagram", &fixture("two-branch-tree.json")]);
    let b = dng(&["diagram", &fixture("two-branch-tree.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sums() {
    let line = fixture("line-middle.json");
    let triangle = fixture("triangle-interior.json");
    let o = dng(&["sum", &line, &line]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sum: 0"));

    let o = dng(&["sum", &line, &triangle, "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check passed"));

    let o = dng(&["sum", &fixture("spider-tree.json")]);
    assert!(stdout(&o).contains("sum: 2"));

    let o = dng(&["sum", &line, &triangle, "--check", "--budget", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_small_families() {
    let o = dng(&["verify", "--family", "affine_1d", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("unexplained: 0"));
    assert!(!out.contains("disagree=1"), "{out}");

    let o = dng(&["verify", "--family", "tree_edge", "--max-n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("edge_table_gap"));
    assert!(out.contains("signatures=(0,2) (2,0)"));
}

#[test]
fn bad_flags_exit_1() {
    assert_eq!(dng(&["verify", "--family", "cycle", "--max-n", "4"]).status.code(), Some(1));
    assert_eq!(dng(&["verify", "--max-n", "4"]).status.code(), Some(1));
    assert_eq!(dng(&["verify", "--family", "tree_vertex", "--max-n", "0"]).status.code(), Some(1));
    assert_eq!(dng(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dng(&["--help"]).status.code(), Some(0));
}

#[test]
fn spectrum_output() {
    let o = dng(&["spectrum", "--family", "affine_1d", "--max-n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "spectrum affine_1d max_n=1 instances=1\n  0: affine_1d points=1:0 W={1}\n");
    let o = dng(&["spectrum", "--family", "tree_vertex", "--max-n", "6", "--method", "quotient", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"].as_object().unwrap().len(), 4);
}
