//! Golden report cases shared by the golden-file and acceptance tests.

use std::fs;
use std::path::{Path, PathBuf};

use serre_cli::{example_files, run, Outcome};
use serre_core::examples::EXAMPLE_NAMES;
use serre_core::scalar::Field;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Writes every built-in example into `dir`.
pub fn emit_examples(dir: &Path) {
    for name in EXAMPLE_NAMES {
        let (dga, twr_name, twr) = example_files(Field::Rational, name).unwrap();
        let stem = serre_cli::example_stem(name);
        fs::write(dir.join(format!("{stem}.dga")), dga).unwrap();
        let twr_name = if twr_name == "naive.twr" { format!("{stem}_naive.twr") } else { twr_name };
        fs::write(dir.join(twr_name), twr).unwrap();
    }
}

/// `(golden file stem, arguments)`; `@x` is resolved against the example
/// directory and `%x` against the test data directory.
pub fn cases() -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    let mut add = |name: String, args: &[&str]| out.push((name, args.iter().map(|s| s.to_string()).collect()));
    let smooth = ["k", "kxk", "kxk_split", "a2", "a3", "a2_dg"];
    for e in smooth {
        let (dga, twr) = (format!("@{e}.dga"), format!("@{e}.twr"));
        add(format!("validate_{e}"), &["validate", &dga]);
        for cmd in ["certify", "hh", "pairing", "invert-check"] {
            add(format!("{}_{e}", cmd.replace('-', "_")), &[cmd, &dga, &twr]);
        }
        add(format!("corollary_{e}"), &["corollary", &dga, &twr, "--columns", "5"]);
    }
    add("hh_classical_a3".into(), &["hh", "@a3.dga", "@a3.twr", "--classical-index"]);
    for e in ["dual_numbers", "exterior"] {
        let (dga, twr) = (format!("@{e}.dga"), format!("@{e}_naive.twr"));
        add(format!("certify_{e}"), &["certify", &dga, &twr]);
        add(format!("hh_bar_{e}"), &["hh-bar", &dga, "--columns", "8", "--window", "-6..0"]);
    }
    add("hh_bar_a2".into(), &["hh-bar", "@a2.dga", "--columns", "5", "--window", "-3..1"]);
    add("serre_a2".into(), &["serre", "@a2.dga", "@a2.twr", "--modules", "%a2_cone.twr,%a2_p1.twr"]);
    add("serre_a2_swapped".into(), &["serre", "@a2.dga", "@a2.twr", "--modules", "%a2_p1.twr,%a2_cone.twr"]);
    add("serre_kxk".into(), &["serre", "@kxk.dga", "@kxk.twr", "--modules", "%kxk_pair.twr,%kxk_cone.twr"]);
    add("example_a2".into(), &["example", "a2"]);
    add("example_exterior_f3".into(), &["example", "exterior", "--field", "F3"]);
    add("error_unknown_example".into(), &["example", "nope"]);
    add("error_missing_file".into(), &["validate", "%missing.dga"]);
    add("error_module_as_resolution".into(), &["corollary", "@a2.dga", "%a2_cone.twr"]);
    out
}

pub fn resolve(args: &[String], examples: &Path) -> Vec<String> {
    let data = data_dir();
    let fix = |s: &str| -> String {
        s.split(',')
            .map(|p| {
                if let Some(f) = p.strip_prefix('@') {
                    examples.join(f).display().to_string()
                } else if let Some(f) = p.strip_prefix('%') {
                    data.join(f).display().to_string()
                } else {
                    p.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    std::iter::once("serre".to_string()).chain(args.iter().map(|s| fix(s))).collect()
}

pub fn run_case(args: &[String], examples: &Path) -> Outcome {
    run(resolve(args, examples))
}
