//! Report texts are compared byte for byte with `tests/golden/*.txt`.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

mod common;

use std::fs;

use common::{cases, emit_examples, golden_dir, run_case};

#[test]
fn reports_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    emit_examples(dir.path());
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in cases() {
        let out = run_case(&args, dir.path());
        let text = format!("exit {}\n{}", out.exit_code(), out.report);
        let path = golden_dir().join(format!("{name}.txt"));
        if update {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}.txt"));
        if expected != text {
            mismatches.push(format!("{name}:\n--- expected\n{expected}--- got\n{text}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn reports_are_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    emit_examples(dir.path());
    for (name, args) in cases() {
        let a = run_case(&args, dir.path());
        let b = run_case(&args, dir.path());
        assert_eq!(a, b, "{name}");
    }
}
