//! End-to-end contract tests for the `guarded` binary: exit statuses,
//! output bytes, and replay determinism, one spawned process per case.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::tempdir;

const WORKED_SYSTEM: &str = "sig: *:2, c:0; vars: x1,x2; params: y1,y2\n\
                             x1 = *( x2, y1 )\n\
                             x2 = *( *( x1, y2 ), c )\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_guarded"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

/// Write `body` into a fresh temp dir and return the file's path.
fn temp_system(body: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempdir().expect("tempdir");
    let path = dir.path().join("system.eq");
    fs::write(&path, body).expect("write system file");
    (dir, path)
}

#[test]
fn laws_presheaf_conway_and_trace_pass() {
    let out = run(&[
        "laws", "--model", "presheaf", "--laws", "conway,trace", "--trials", "200", "--seed", "7",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("0 scored failure(s)"));
}

#[test]
fn laws_cpolift_conway_passes() {
    let out = run(&[
        "laws", "--model", "cpolift", "--laws", "conway", "--trials", "200", "--seed", "7",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn laws_rejects_bad_config_with_usage_exit() {
    for args in [
        vec!["laws", "--trials", "0"],
        vec!["laws", "--depth", "0"],
        vec!["laws", "--laws", "nosuchlaw"],
        vec!["laws", "--model", "nosuchmodel"],
        vec!["laws", "--sizes", "gigantic"],
        vec!["laws", "--format", "xml"],
        vec!["laws", "--bogus-flag"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "args {args:?} should be a usage error");
    }
}

#[test]
fn laws_out_file_mirrors_stdout_bytes() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "laws", "--model", "cms", "--laws", "fix,y", "--trials", "20", "--seed", "3",
        "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let file_bytes = fs::read(&path).unwrap();
    assert_eq!(file_bytes, out.stdout, "file and stdout must carry the same bytes");
    let parsed: serde_json::Value = serde_json::from_slice(&file_bytes).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 2);
}

#[test]
fn laws_json_replays_byte_identically() {
    let args = [
        "laws", "--model", "citm", "--laws", "fix,dd", "--trials", "25", "--seed", "42",
        "--depth", "6", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_prints_the_worked_solution_at_depth_four() {
    let (_dir, path) = temp_system(WORKED_SYSTEM);
    let out = run(&["solve", path.to_str().unwrap(), "--depth", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "x1 = *(*(*(□,y2),c),y1)\nx2 = *(*(*(□,y1),y2),c)\n"
    );
}

#[test]
fn solve_check_verifies_the_square() {
    let (_dir, path) = temp_system(WORKED_SYSTEM);
    let out = run(&["solve", path.to_str().unwrap(), "--depth", "8", "--check"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).ends_with("square: ok (depth 8)\n"));
}

#[test]
fn solve_emits_json_when_asked() {
    let (_dir, path) = temp_system(WORKED_SYSTEM);
    let out = run(&[
        "solve", path.to_str().unwrap(), "--depth", "4", "--check", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["depth"], 4);
    assert_eq!(v["check"], true);
    assert_eq!(v["vars"][0]["name"], "x1");
    assert_eq!(v["vars"][0]["value"], "*(*(*(□,y2),c),y1)");
}

#[test]
fn solve_accepts_a_bare_parameter_body() {
    let (_dir, path) = temp_system("sig: s:1; vars: x; params: y\nx = y\n");
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "x = y\n");
}

#[test]
fn solve_rejects_unguarded_systems_naming_the_variable() {
    let (_dir, path) = temp_system("sig: s:1; vars: x\nx = x\n");
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("`x`"), "stderr should name the variable: {err}");
    assert!(err.contains("unguarded"));
}

#[test]
fn solve_treats_parse_and_io_errors_as_usage_errors() {
    let (_dir, path) = temp_system("sig: s:1; vars: x\nx = t(x)\n");
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "unknown operation is a parse error");

    let out = run(&["solve", "/definitely/not/a/file.eq"]);
    assert_eq!(code(&out), 2);

    let (_dir2, path2) = temp_system(WORKED_SYSTEM);
    let out = run(&["solve", path2.to_str().unwrap(), "--depth", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn search_exits_zero_and_replays_byte_identically() {
    let args = [
        "search", "dd-in-lift-variants", "--trials", "6", "--seed", "5", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "findings are data, not failures");
    assert_eq!(a.stdout, b.stdout);

    let empty = run(&["search", "d2-from-conway", "--trials", "0"]);
    assert_eq!(code(&empty), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&empty)).unwrap();
    assert_eq!(v["findings"].as_array().unwrap().len(), 0);
}

#[test]
fn search_rejects_unknown_targets() {
    let out = run(&["search", "nosuchtarget"]);
    assert_eq!(code(&out), 2);
}
