use std::process::Command;

fn serre(dir: &std::path::Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_serre")).current_dir(dir).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn emitted_example_pairs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(serre(d, &["example", "k", "--emit", "."]).0, 0);
    let (code, out) = serre(d, &["pairing", "k.dga", "k.twr"]);
    assert_eq!(code, 0);
    assert!(out.contains("HH 0 dim 1\n"));
    assert!(out.contains("size 1x1 nondegenerate yes\n  1\n"));
    assert!(out.ends_with("RESULT pass\n"));

    assert_eq!(serre(d, &["example", "dual-numbers", "--emit", "."]).0, 0);
    let (code, out) = serre(d, &["certify", "dual_numbers.dga", "naive.twr"]);
    assert_eq!(code, 1);
    assert!(out.contains("NOT_QUASI_ISO"));
    assert!(out.ends_with("RESULT fail\n"));
    let (code, out) = serre(d, &["hh-bar", "dual_numbers.dga", "--columns", "8", "--window", "-6..0"]);
    assert_eq!(code, 0);
    assert!(out.matches("HH -").count() >= 3, "{out}");

    std::fs::write(d.join("bad.dga"), "field Q\nbasis 1:0\nunit 1\nmul 1 1 = z\n").unwrap();
    let (code, out) = serre(d, &["validate", "bad.dga"]);
    assert_eq!(code, 2);
    assert!(out.contains("PARSE_ERROR line 4"), "{out}");
    assert_eq!(serre(d, &["hh-bar", "bad.dga"]).0, 2);
    assert_eq!(serre(d, &["--help"]).0, 0);
}
