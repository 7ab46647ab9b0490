use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinlab")).args(args).env_remove("KLEINLAB_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let o = run(&[flag]);
        assert_eq!(o.status.code(), Some(0));
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["witt"]).status.code(), Some(1));
    assert_eq!(run(&["witt", "0"]).status.code(), Some(1));
    assert_eq!(run(&["twist-survey", "-n", "0", "-k", "4"]).status.code(), Some(1));
    assert_eq!(run(&["pq", "/nonexistent/file", "-p", "3"]).status.code(), Some(1));
}

#[test]
fn witt_and_kummer() {
    let o = run(&["witt", "5"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "14\n".to_string()));
    let o = run(&["kummer"]);
    assert!(stdout(&o).contains("residues,\"4,5\""));
}

#[test]
fn volume_digits() {
    let o = run(&["volume"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2.00768200668"), "{}", stdout(&o));
}

#[test]
fn survey_reports_exceptional_norms() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["twist-survey", "-n", "4", "-k", "4", "--qmax", "500", "--cache-dir", cache];
    let cold = run(&args);
    assert_eq!(cold.status.code(), Some(0));
    let text = stdout(&cold);
    assert!(text.contains("4,4,500,46,3,6.52,\"23,103\""), "{text}");
    assert!(text.lines().any(|l| l == "23,103"));
    let warm = run(&args);
    assert_eq!(warm.stdout, cold.stdout);
    let threaded = run(&["--tasks", "2", "twist-survey", "-n", "4", "-k", "4", "--qmax", "500"]);
    assert_eq!(threaded.stdout, cold.stdout);
}

#[test]
fn json_and_pq() {
    let o = run(&["--format", "json", "exhaust", "@quat", "-p", "3", "-n", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hypotheses"]["h1_coprime"], false);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f2.txt");
    std::fs::write(&f, "2\n").unwrap();
    let o = run(&["pq", f.to_str().unwrap(), "-p", "3", "--class", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",3,2,3,5,8,growing,false"), "{}", stdout(&o));
}
