//! Exit codes and the diff subcommand, through the binary.

use std::process::{Command, Output};

fn rforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rforms"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    rforms(args).status.code().unwrap()
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&["verify", "--series", "e", "--n", "8"]), 2);
    assert_eq!(
        code(&["verify", "--series", "o", "--n", "3", "--degree", "9"]),
        2
    );
    assert_eq!(
        code(&["verify", "--series", "o", "--n", "3", "--z", "2"]),
        2
    );
    assert_eq!(
        code(&["verify", "--series", "sl", "--n", "3", "--zeta", "-1"]),
        2
    );
    assert_eq!(
        code(&["verify", "--series", "gl", "--n", "2", "--suites", "toys"]),
        2
    );
    assert_eq!(
        code(&["verify", "--series", "gl", "--n", "2", "--t0", "1/0"]),
        2
    );
    assert_eq!(code(&["verify", "--series", "sp", "--n", "3"]), 2);
}

#[test]
fn passing_run_exits_0_and_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("rforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.jsonl");
    let b = dir.join("b.jsonl");
    let args = |p: &std::path::Path| {
        vec![
            "verify",
            "--series",
            "gl",
            "--n",
            "3",
            "--suites",
            "axioms,modular",
            "--out",
        ]
        .into_iter()
        .map(String::from)
        .chain([p.display().to_string()])
        .collect::<Vec<_>>()
    };
    let run = |p: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_rforms"))
            .args(args(p))
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run(&a), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("{\"record\":\"header\",\"schema\":\"rforms-report\",\"version\":1"));
    assert_eq!(run(&b), Some(0));
    assert_eq!(code(&["diff", a.to_str().unwrap(), b.to_str().unwrap()]), 0);

    let edited = text.replace("\"status\":\"pass\"", "\"status\":\"fail\"");
    std::fs::write(&b, edited).unwrap();
    let out = rforms(&["diff", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("status Pass -> Fail"));

    std::fs::write(&b, text.replace("\"version\":1", "\"version\":99")).unwrap();
    assert_eq!(code(&["diff", a.to_str().unwrap(), b.to_str().unwrap()]), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_failure_exits_1() {
    assert_eq!(
        code(&["verify", "--series", "o", "--n", "3", "--suites", "classify"]),
        1
    );
}

#[test]
fn resource_bound_exits_3() {
    let out = rforms(&[
        "verify", "--series", "sp", "--n", "6", "--degree", "3", "--suites", "yd",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"resource_bound\":true"));
}
