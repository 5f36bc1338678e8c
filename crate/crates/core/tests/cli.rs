//! Exit-code and output contract of the command-line binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twindragon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn automaton_normalizes_and_prints_graph() {
    let out = run(&["automaton", "1", "0", "-1/5", "--format", "graph"]);
    assert_eq!(code(&out), 0);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("Δ_{5,0,-1}"), "banner missing: {stderr}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 5); // 1 state + 4 loops
    assert!(stdout.contains("1 -> 1 [label=\"1+3i\"]"));
}

#[test]
fn automaton_boundary_json_parses() {
    let out = run(&["automaton", "5", "0", "-1", "--boundary", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 2);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn degenerate_line_is_exit_3() {
    let out = run(&["automaton", "0", "0", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_are_exit_2() {
    assert_eq!(code(&run(&["automaton", "1", "0"])), 2);
    assert_eq!(code(&run(&["dim", "1", "0", "0.5"])), 2);
    assert_eq!(code(&run(&["dim", "1", "0", "1/0"])), 2);
    assert_eq!(code(&run(&["nonsense"])), 2);
}

#[test]
fn empty_intersection_is_exit_4() {
    let out = run(&["dim", "1", "0", "10"]);
    assert_eq!(code(&out), 4);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["empty"], serde_json::json!(true));
}

#[test]
fn dim_reports_figure5_constants() {
    let out = run(&["dim", "5", "0", "-1", "--boundary"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["beta"], serde_json::json!(3.0));
    assert_eq!(doc["dimension"], serde_json::json!(0.792481250361));
    assert_eq!(doc["cardinality"], serde_json::json!("Uncountable"));
    assert_eq!(
        doc["not_s_minus_1_certificate"]["ok"],
        serde_json::json!(true)
    );
}

#[test]
fn intervals_prints_exact_union() {
    let out = run(&["intervals", "4", "0", "-1"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[-9/10, -13/20] ∪ [-2/5, 1/10] ∪ [7/20, 3/5]"));
    // Non-vertical lines are rejected as usage errors.
    assert_eq!(code(&run(&["intervals", "1", "1", "0"])), 2);
    // Lines beyond the extremes are empty.
    assert_eq!(code(&run(&["intervals", "1", "0", "10"])), 4);
}

#[test]
fn render_is_deterministic_and_disjoint_runs_agree() {
    let dir = std::env::temp_dir();
    let f1 = dir.join("td_render_test_1.ppm");
    let f2 = dir.join("td_render_test_2.ppm");
    for f in [&f1, &f2] {
        let out = run(&[
            "render",
            "--depth",
            "5",
            "--line",
            "1,0,-1/5",
            "--size",
            "64x64",
            "--out",
            f.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let b1 = std::fs::read(&f1).unwrap();
    let b2 = std::fs::read(&f2).unwrap();
    assert_eq!(b1, b2);
    assert!(b1.starts_with(b"P3\n64 64\n255\n"));
    std::fs::remove_file(f1).ok();
    std::fs::remove_file(f2).ok();
}

#[test]
fn render_io_error_is_exit_5() {
    let out = run(&[
        "render",
        "--depth",
        "1",
        "--out",
        "/nonexistent-dir/out.ppm",
    ]);
    assert_eq!(code(&out), 5);
}
