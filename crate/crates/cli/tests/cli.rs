use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semitheory"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compose_grafts_terms() {
    let o = run(&[
        "compose",
        "--theory",
        &data("magma.th"),
        "--left",
        "(mu_1(p2_1,p2_2))",
        "--right",
        "(p3_1; p3_3)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(mu_1(p3_1,p3_3))");
}

#[test]
fn lemma_sweep_passes() {
    let o = run(&[
        "check-lemma",
        "--lemma",
        "l1",
        "--theory",
        &data("magma.th"),
        "--max-nodes",
        "7",
        "--max-word-len",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("counterexamples: 0"));
}

#[test]
fn resolve_checks_identities() {
    let o = run(&[
        "resolve",
        "--table",
        &data("p2.tbl"),
        "--level",
        "2",
        "--check-identities",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("verdict: pass"));
}

#[test]
fn resolve_level_cap_is_a_bound() {
    let o = run(&["resolve", "--table", &data("p2.tbl"), "--level", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_lines_reports() {
    let o = run(&[
        "check-pullback",
        "--theory",
        &data("magma.th"),
        "--algebra",
        &data("xor.alg"),
        "--source",
        "2",
        "--level",
        "1",
        "--format",
        "json-lines",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let line: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(line["check"], "pullback");
    assert_eq!(line["verdict"], "pass");
    for key in ["bounds", "cases", "counterexamples"] {
        assert!(line.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn usage_and_input_errors_exit_3() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["parse", "--theory", "/nonexistent/x.th"]).status.code(), Some(3));
    assert_eq!(
        run(&[
            "check-lemma",
            "--lemma",
            "l1",
            "--theory",
            &data("magma.th"),
            "--max-nodes",
            "seven"
        ])
        .status
        .code(),
        Some(3)
    );
    let o = run(&[
        "compose",
        "--theory",
        &data("magma.th"),
        "--left",
        "(nu_1(p2_1,p2_2))",
        "--right",
        "(p2_1; p2_2)",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dot_export_writes_one_graph_per_component() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.dot");
    let o = run(&[
        "export-dot",
        "--theory",
        &data("magma.th"),
        "--term",
        "(mu_1(p2_1,p2_2); p2_2)",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot.matches("digraph").count(), 2);
    assert!(dot.contains("label=\"mu_1\""));
}

#[test]
fn printed_terms_reparse() {
    let o = run(&[
        "enumerate",
        "--theory",
        &data("two_gen.th"),
        "--source",
        "2",
        "--max-nodes",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let trees: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert!(trees.len() > 10);
    for t in &trees {
        let term = format!("({t})");
        let o = run(&["normalize", "--theory", &data("two_gen.th"), "--term", &term]);
        assert_eq!(stdout(&o).trim(), term);
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "enumerate",
        "--theory",
        &data("magma.th"),
        "--source",
        "2",
        "--target",
        "2",
        "--max-nodes",
        "5",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
