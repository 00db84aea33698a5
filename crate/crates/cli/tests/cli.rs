use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copytree")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn oracle_on_path() {
    let v = json(&run(&["oracle", "--problem", "gst", "--graph", &data("path.json"), "--input", &data("path_stream.json")]));
    assert_eq!(v["cost"], 3.0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["problem"], "gst");
}

#[test]
fn embed_two_vertex() {
    let v = json(&run(&["embed", "--graph", &data("two_vertex.json"), "--epsilon", "0.25"]));
    assert!(v["embedding"]["chi"].as_u64().unwrap() <= 45);
    assert_eq!(v["verify"]["passed"], true);
}

#[test]
fn missing_file_exits_one() {
    let out = run(&["embed", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_flags_exit_nonzero() {
    assert_ne!(run(&["embed"]).status.code(), Some(0));
    let out = run(&["embed", "--graph", &data("two_vertex.json"), "--epsilon", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let cases: Vec<Vec<String>> = vec![
        vec!["embed".into(), "--graph".into(), data("hexagon.json")],
        vec!["online-gst".into(), "--graph".into(), data("hexagon.json"), "--stream".into(), data("hexagon_groups.json")],
        vec!["robust-gst".into(), "--graph".into(), data("hexagon.json"), "--scenarios".into(), data("hexagon_scenarios.json")],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (run(&args), run(&args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn robust_star_matches_oracle() {
    let v = json(&run(&[
        "robust-gsf",
        "--graph",
        &data("star.json"),
        "--scenarios",
        &data("star_pair_scenarios.json"),
        "--oracle",
    ]));
    assert_eq!(v["run"]["evaluation"]["worst_case"], 2.0);
    assert_eq!(v["oracle"], 2.0);
    assert_eq!(v["ratio"]["value"], 1.0);
}
