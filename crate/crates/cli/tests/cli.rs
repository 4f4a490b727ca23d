//! Exit codes, failure reports and output stability.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-mirror"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn error_code(args: &[&str]) -> String {
    let out = run(args);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    json["error"]["code"].as_str().unwrap().to_string()
}

fn input_file(doc: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(doc.as_bytes()).unwrap();
    f
}

#[test]
fn successful_commands_exit_zero() {
    assert_eq!(code(&["analyze", "--fixture", "simplex"]), 0);
    assert_eq!(
        code(&["slab", "--fixture", "simplex", "--format", "text"]),
        0
    );
    assert_eq!(
        code(&[
            "mirror",
            "--fixture",
            "star-square",
            "--order",
            "2",
            "--q-choice",
            "1,1"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "trees",
            "--fixture",
            "local-p2",
            "--target",
            "t^2",
            "--order",
            "2",
            "--dot"
        ]),
        0
    );
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(code(&["analyze", "--fixture", "nonexistent"]), 2);
    assert_eq!(
        error_code(&["analyze", "--fixture", "nonexistent"]),
        "MALFORMED_INPUT"
    );
    assert_eq!(code(&["analyze"]), 2);
    assert_eq!(
        code(&["slab", "--fixture", "local-p2", "--vertex", "7,7"]),
        2
    );
    assert_eq!(
        error_code(&["slab", "--fixture", "local-p2", "--vertex", "7,7"]),
        "UNKNOWN_VERTEX"
    );
    assert_eq!(
        error_code(&["expand", "--fixture", "local-p2", "--vertex", "1,0"]),
        "VERTEX_NOT_INTERIOR"
    );
    assert_eq!(
        code(&["mirror", "--fixture", "local-p2", "--q-choice", "-1"]),
        2
    );
    assert_eq!(code(&["slab", "--fixture", "local-p2", "--order", "x"]), 2);

    let overlapping = input_file(
        r#"{"dim": 1, "vertices": [[0], [1], [2]], "maximal_cells": [[0, 2], [0, 1]], "base_cell": 1}"#,
    );
    let path = overlapping.path().to_str().unwrap();
    assert_eq!(code(&["analyze", "--input", path]), 2);
    let garbage = input_file("not json");
    assert_eq!(
        error_code(&["analyze", "--input", garbage.path().to_str().unwrap()]),
        "MALFORMED_INPUT"
    );
}

#[test]
fn unsupported_scope_exits_three() {
    assert_eq!(code(&["mirror", "--fixture", "simplex"]), 3);
    assert_eq!(
        error_code(&["mirror", "--fixture", "simplex"]),
        "RANK_ZERO_Q"
    );
}

#[test]
fn input_file_matches_fixture() {
    let doc = toric_mirror::fixtures::document("local-p2").unwrap();
    let f = input_file(doc);
    let from_file = run(&[
        "slab",
        "--input",
        f.path().to_str().unwrap(),
        "--order",
        "3",
        "--format",
        "text",
    ]);
    let from_fixture = run(&[
        "slab",
        "--fixture",
        "local-p2",
        "--order",
        "3",
        "--format",
        "text",
    ]);
    assert_eq!(from_file.stdout, from_fixture.stdout);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["analyze", "--fixture", "star-square"][..],
        &["slab", "--fixture", "star-square", "--order", "3"],
        &["expand", "--fixture", "local-p2", "--order", "3"],
        &["trees", "--fixture", "local-p2", "--target", "x2y2"],
        &["broken-lines", "--fixture", "local-p2", "--order", "2"],
        &["mirror", "--fixture", "local-p2", "--order", "3"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn text_output_shows_the_equation() {
    let out = run(&[
        "mirror",
        "--fixture",
        "local-p2",
        "--order",
        "2",
        "--format",
        "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("u*w = t * (1 + y + x + x^-1*y^-1*t - 2*t + 5*t^2)"),
        "{text}"
    );
}
