//! Command-line surface: reads `.dga`/`.twr` files, runs one computation, and
//! renders a deterministic plain-text report ending in a `RESULT` line.

pub mod format;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serre_core::complex::SearchBudget;
use serre_core::dga::{self, DGAlgebra};
use serre_core::duality::{self, DimComparison, SerreReport, Witness};
use serre_core::examples::{naive_resolution, named_example, EXAMPLE_NAMES};
use serre_core::hochschild::{
    certify_smooth, format_dims, hh_bar, hh_pairing, hh_resolution, nonpositive_corollary_check, BarDegree,
    Epsilon, SmoothCertificate,
};
use serre_core::scalar::Field;
use serre_core::twisted::{realize, validate_twisted, TwistedModule};

use crate::format::{format_scalar, parse_dga, parse_twr, print_dga, print_twr, FormatError};

#[derive(Parser, Debug)]
#[command(name = "serre", version, about = "Smoothness certificates, Hochschild homology and Serre duality for finite-dimensional DG algebras")]
pub struct Cli {
    /// Report Hochschild degrees homologically (`HH_i` with `i = -n`).
    #[arg(long, global = true)]
    pub classical_index: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate an algebra.
    Validate { dga: PathBuf },
    /// Verify a resolution of the diagonal bimodule.
    Certify { dga: PathBuf, twr: PathBuf },
    /// Hochschild homology from a certified resolution.
    Hh { dga: PathBuf, twr: PathBuf },
    /// Hochschild homology from the truncated normalized Hochschild complex.
    HhBar {
        dga: PathBuf,
        #[arg(long)]
        columns: usize,
        /// Degree window `a..b` (inclusive).
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Search for a nondegenerate pairing on Hochschild homology.
    Pairing { dga: PathBuf, twr: PathBuf },
    /// Compare Hom(N, M) with Hom(M, S N) degreewise for two twisted modules.
    Serre {
        dga: PathBuf,
        twr: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        modules: Vec<PathBuf>,
    },
    /// Check that the dualizing bimodules are mutually inverse.
    InvertCheck { dga: PathBuf, twr: PathBuf },
    /// For non-positively graded algebras: Hochschild homology lives in degree 0.
    Corollary {
        dga: PathBuf,
        twr: PathBuf,
        #[arg(long, default_value_t = 6)]
        columns: usize,
    },
    /// Print or write a built-in example.
    Example {
        /// k, kxk, kxk-split, a2, a3, a2-dg, dual-numbers or exterior
        name: String,
        /// Write `<name>.dga` and a resolution file into this directory
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Q or F<p>
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

/// Final verdict of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotFound,
    /// Input could not be read, parsed or validated.
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail | Verdict::NotFound => 1,
            Verdict::Error => 2,
        }
    }

    fn word(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail | Verdict::Error => "fail",
            Verdict::NotFound => "not-found",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub report: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

struct Report {
    text: String,
}

impl Report {
    fn new() -> Report {
        Report { text: String::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn finish(mut self, verdict: Verdict) -> Outcome {
        let _ = writeln!(self.text, "RESULT {}", verdict.word());
        Outcome {
            verdict,
            report: self.text,
        }
    }
}

/// An input problem, reported with exit code 2.
#[derive(Debug)]
struct InputError(String);

impl From<FormatError> for InputError {
    fn from(e: FormatError) -> InputError {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("READ_ERROR {}: {}", file_name(path), e.kind())))
}

fn load_dga(path: &Path) -> Result<DGAlgebra, InputError> {
    parse_dga(&read(path)?).map_err(|e| InputError(format!("{}: {e}", file_name(path))))
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn load_resolution(a: &DGAlgebra, path: &Path) -> Result<(TwistedModule, Vec<dga::Element>), InputError> {
    let env = dga::enveloping(a);
    let f = parse_twr(&read(path)?, &env, Some(a)).map_err(|e| InputError(format!("{}: {e}", file_name(path))))?;
    Ok((f.module, f.eps.unwrap_or_default()))
}

fn load_module(a: &DGAlgebra, path: &Path) -> Result<TwistedModule, InputError> {
    let f = parse_twr(&read(path)?, a, None).map_err(|e| InputError(format!("{}: {e}", file_name(path))))?;
    let report = validate_twisted(&f.module);
    if !report.is_valid() {
        let v: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(InputError(format!("{}: VALIDATION_ERROR: {}", file_name(path), v.join("; "))));
    }
    Ok(f.module)
}

/// Parses arguments (the first is the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let verdict = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Verdict::Pass,
                _ => Verdict::Error,
            };
            Outcome {
                verdict,
                report: e.to_string(),
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let mut r = Report::new();
    let result = match &cli.command {
        Command::Validate { dga } => validate(&mut r, dga),
        Command::Certify { dga, twr } => certify(&mut r, dga, twr).map(|(v, _)| v),
        Command::Hh { dga, twr } => with_cert(&mut r, dga, twr, |r, c| hh(r, c, cli.classical_index)),
        Command::HhBar { dga, columns, window } => bar(&mut r, dga, *columns, window, cli.classical_index),
        Command::Pairing { dga, twr } => with_cert(&mut r, dga, twr, |r, c| pairing(r, c, cli.classical_index)),
        Command::Serre { dga, twr, modules } => serre(&mut r, dga, twr, modules),
        Command::InvertCheck { dga, twr } => with_cert(&mut r, dga, twr, invert),
        Command::Corollary { dga, twr, columns } => {
            with_cert(&mut r, dga, twr, |r, c| corollary(r, c, *columns, cli.classical_index))
        }
        Command::Example { name, emit, field } => example(&mut r, name, emit.as_deref(), field),
    };
    match result {
        Ok(v) => r.finish(v),
        Err(InputError(msg)) => {
            r.line(format!("ERROR {msg}"));
            r.finish(Verdict::Error)
        }
    }
}

fn validate(r: &mut Report, path: &Path) -> Result<Verdict, InputError> {
    let a = load_dga(path)?;
    describe_algebra(r, &a);
    r.line("VALID");
    Ok(Verdict::Pass)
}

fn describe_algebra(r: &mut Report, a: &DGAlgebra) {
    let nonzero = a.nonzero_products().count();
    r.line(format!("ALGEBRA field {} dim {} products {}", a.field(), a.dim(), nonzero));
    let mut by_degree: BTreeMap<i64, usize> = BTreeMap::new();
    for &d in a.degrees() {
        *by_degree.entry(d).or_default() += 1;
    }
    let dims: Vec<String> = by_degree.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    r.line(format!("DEGREES {}", dims.join(" ")));
}

fn certify(r: &mut Report, dga: &Path, twr: &Path) -> Result<(Verdict, Option<SmoothCertificate>), InputError> {
    let a = load_dga(dga)?;
    let (pa, eps) = load_resolution(&a, twr)?;
    describe_algebra(r, &a);
    let shifts: Vec<String> = pa.shifts().iter().map(i64::to_string).collect();
    r.line(format!(
        "RESOLUTION generators {} shifts {} idempotent {}",
        pa.rank(),
        if shifts.is_empty() { "-".into() } else { shifts.join(" ") },
        if pa.idempotent().is_some() { "yes" } else { "no" }
    ));
    match certify_smooth(&a, &pa, &Epsilon::OnGenerators(eps)) {
        Ok(cert) => {
            r.line(format!("CONE {}", format_dims(&cert.verification.cone_dims)));
            r.line("CERTIFIED");
            Ok((Verdict::Pass, Some(cert)))
        }
        Err(e) => {
            r.line(format!("CERTIFY_ERROR {}", e.code()));
            r.line(e.to_string());
            Ok((Verdict::Fail, None))
        }
    }
}

fn with_cert(
    r: &mut Report,
    dga: &Path,
    twr: &Path,
    f: impl FnOnce(&mut Report, &SmoothCertificate) -> Result<Verdict, InputError>,
) -> Result<Verdict, InputError> {
    match certify(r, dga, twr)? {
        (_, Some(cert)) => f(r, &cert),
        (v, None) => Ok(v),
    }
}

/// Reindexes for presentation and sorts ascending.
fn indexed<V: Clone>(dims: &BTreeMap<i64, V>, classical: bool) -> BTreeMap<i64, V> {
    dims.iter().map(|(&n, v)| (if classical { -n } else { n }, v.clone())).collect()
}

fn index_line(r: &mut Report, classical: bool) {
    r.line(format!("INDEX {}", if classical { "classical" } else { "cohomological" }));
}

fn hh_lines(r: &mut Report, dims: &BTreeMap<i64, usize>, classical: bool) {
    for (n, d) in indexed(dims, classical) {
        r.line(format!("HH {n} dim {d}"));
    }
    r.line(format!("TOTAL {}", dims.values().sum::<usize>()));
}

fn internal(e: impl std::fmt::Display) -> InputError {
    InputError(format!("INTERNAL {e}"))
}

fn hh(r: &mut Report, cert: &SmoothCertificate, classical: bool) -> Result<Verdict, InputError> {
    let h = hh_resolution(cert).map_err(internal)?;
    index_line(r, classical);
    hh_lines(r, &h.dims, classical);
    Ok(Verdict::Pass)
}

fn parse_window(s: &str) -> Result<(i64, i64), InputError> {
    let bad = || InputError(format!("ARGUMENT_ERROR window `{s}` is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn bar(r: &mut Report, dga: &Path, columns: usize, window: &str, classical: bool) -> Result<Verdict, InputError> {
    let a = load_dga(dga)?;
    let w = parse_window(window)?;
    describe_algebra(r, &a);
    r.line(format!("WINDOW {}..{} columns {columns}", w.0, w.1));
    match hh_bar(&a, w, columns) {
        Ok(b) => {
            index_line(r, classical);
            for (n, d) in indexed(&b.dims, classical) {
                match d {
                    BarDegree::Stable(0) => {}
                    BarDegree::Stable(k) => r.line(format!("HH {n} dim {k}")),
                    BarDegree::Unstable => r.line(format!("HH {n} unstable")),
                }
            }
            Ok(Verdict::Pass)
        }
        Err(e) => {
            r.line(format!("BAR_ERROR {e}"));
            Ok(Verdict::Fail)
        }
    }
}

fn pairing(r: &mut Report, cert: &SmoothCertificate, classical: bool) -> Result<Verdict, InputError> {
    let p = hh_pairing(cert, SearchBudget::default()).map_err(internal)?;
    index_line(r, classical);
    hh_lines(r, &p.hh.dims, classical);
    r.line(format!("SYMMETRIC {}", yes_no(p.dim_symmetric)));
    r.line(format!("CANDIDATES {}", p.candidates_tried));
    if let Some(reason) = &p.not_found_reason {
        r.line(format!("NOT_FOUND {reason}"));
        return Ok(Verdict::NotFound);
    }
    let sign = if classical { -1 } else { 1 };
    for (n, m) in indexed(&p.matrices, classical) {
        let nondeg = p.nondegenerate[&(sign * n)];
        r.line(format!(
            "PAIRING {n} with {} size {}x{} nondegenerate {}",
            -n,
            m.rows(),
            m.cols(),
            yes_no(nondeg)
        ));
        for row in m.to_dense() {
            let row: Vec<String> = row.iter().map(format_scalar).collect();
            r.line(format!("  {}", row.join(" ")));
        }
    }
    Ok(if p.all_nondegenerate() && p.dim_symmetric {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn comparison_lines(r: &mut Report, c: &DimComparison) {
    r.line(format!("COMPARE {} match {}", c.label, yes_no(c.matches())));
    for n in c.degrees() {
        let get = |m: &BTreeMap<i64, usize>| m.get(&n).copied().unwrap_or(0);
        r.line(format!("  {n} {} {}", get(&c.lhs), get(&c.rhs)));
    }
}

fn serre_lines(r: &mut Report, s: &SerreReport) {
    for c in &s.comparisons {
        comparison_lines(r, c);
    }
    for (label, w) in &s.witnesses {
        let text = match w {
            Witness::NotSearched => "not-searched".to_string(),
            Witness::Found { candidates_tried } => format!("found after {candidates_tried} candidates"),
            Witness::NotFound { reason } => format!("not-found: {reason}"),
        };
        r.line(format!("WITNESS {label} {text}"));
    }
}

fn serre(r: &mut Report, dga: &Path, twr: &Path, modules: &[PathBuf]) -> Result<Verdict, InputError> {
    let a = load_dga(dga)?;
    let [n_path, m_path] = modules else {
        return Err(InputError("ARGUMENT_ERROR --modules needs two files".into()));
    };
    let n = load_module(&a, n_path)?;
    let m = load_module(&a, m_path)?;
    let (v, cert) = certify(r, dga, twr)?;
    let Some(cert) = cert else {
        return Ok(v);
    };
    let report = duality::serre_check(&n, &m).map_err(internal)?;
    serre_lines(r, &report);
    // S^{-1} S N ≃ N, with S^{-1} = - ⊗_A A^!
    let shriek = duality::a_shriek(&cert).map_err(internal)?;
    let s = duality::nakayama(&n).map_err(internal)?;
    let back = duality::serre_inverse_apply_module(&s, &shriek).map_err(internal)?;
    let round = DimComparison {
        label: "S^-1(S(N)) vs N".into(),
        lhs: serre_core::complex::cohomology_dims(back.complex()),
        rhs: serre_core::complex::cohomology_dims(realize(&n).map_err(internal)?.complex()),
    };
    comparison_lines(r, &round);
    Ok(if report.pass() && round.matches() {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

fn invert(r: &mut Report, cert: &SmoothCertificate) -> Result<Verdict, InputError> {
    let report = duality::invert_check(cert, Some(SearchBudget::default())).map_err(internal)?;
    for p in &report.projectivity {
        r.line(format!(
            "PROJECTIVE {} generators {} rank {} summand {}",
            p.side,
            p.generators,
            p.free_rank,
            yes_no(p.summand)
        ));
    }
    serre_lines(r, &report);
    let found = report.witnesses.iter().all(|(_, w)| matches!(w, Witness::Found { .. }));
    Ok(match (report.pass(), found) {
        (false, _) => Verdict::Fail,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::NotFound,
    })
}

fn corollary(r: &mut Report, cert: &SmoothCertificate, columns: usize, classical: bool) -> Result<Verdict, InputError> {
    let c = match nonpositive_corollary_check(cert, columns) {
        Ok(c) => c,
        Err(e) => {
            r.line(e.to_string());
            return Ok(Verdict::Fail);
        }
    };
    index_line(r, classical);
    hh_lines(r, &c.dims, classical);
    r.line(format!("CONCENTRATED_IN_ZERO {}", yes_no(c.concentrated_in_zero)));
    let stable: Vec<String> = indexed(&c.bar.stable(), classical)
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(n, d)| format!("{n}:{d}"))
        .collect();
    r.line(format!("BAR columns {} stable {}", c.bar.columns, if stable.is_empty() { "0".into() } else { stable.join(" ") }));
    r.line(format!("BAR_AGREES {}", yes_no(c.bar_agrees)));
    r.line(format!("SYMMETRIC {}", yes_no(c.dim_symmetric)));
    Ok(if c.pass() { Verdict::Pass } else { Verdict::Fail })
}

/// File stem for an example name (`dual-numbers` → `dual_numbers`).
pub fn example_stem(name: &str) -> String {
    name.replace('-', "_")
}

/// The `.dga` text and `(file name, .twr text)` of a built-in example. Smooth
/// examples come with their certified resolution, the others with the naive one.
pub fn example_files(field: Field, name: &str) -> Option<(String, String, String)> {
    let canonical = name.replace('_', "-");
    let (a, cert) = named_example(field, &canonical)?;
    let stem = example_stem(&canonical);
    let dga = print_dga(&a);
    let (twr_name, twr) = match cert {
        Some(c) => {
            let eps = match &c.eps {
                Epsilon::OnGenerators(v) => v.clone(),
                Epsilon::Full(_) => return None,
            };
            let text = print_twr(&c.pa, Some("certified resolution of the diagonal"), Some((&a, &eps)));
            (format!("{stem}.twr"), text)
        }
        None => {
            let (pa, eps) = naive_resolution(&a);
            let Epsilon::OnGenerators(eps) = eps else {
                return None;
            };
            let text = print_twr(&pa, Some("naive resolution (not a quasi-isomorphism)"), Some((&a, &eps)));
            ("naive.twr".into(), text)
        }
    };
    Some((dga, twr_name, twr))
}

fn example(r: &mut Report, name: &str, emit: Option<&Path>, field: &str) -> Result<Verdict, InputError> {
    let field = match field {
        "Q" => Field::Rational,
        f => f
            .strip_prefix('F')
            .and_then(|p| p.parse().ok())
            .and_then(|p| Field::prime(p).ok())
            .ok_or_else(|| InputError(format!("ARGUMENT_ERROR unknown field `{f}`")))?,
    };
    let (dga, twr_name, twr) = example_files(field, name).ok_or_else(|| {
        InputError(format!("ARGUMENT_ERROR unknown example `{name}` (known: {})", EXAMPLE_NAMES.join(", ")))
    })?;
    let dga_name = format!("{}.dga", example_stem(&name.replace('_', "-")));
    match emit {
        Some(dir) => {
            for (file, text) in [(&dga_name, &dga), (&twr_name, &twr)] {
                fs::write(dir.join(file), text)
                    .map_err(|e| InputError(format!("WRITE_ERROR {file}: {e}")))?;
                r.line(format!("WROTE {file}"));
            }
        }
        None => {
            for (file, text) in [(&dga_name, &dga), (&twr_name, &twr)] {
                r.line(format!("FILE {file}"));
                r.text.push_str(text);
            }
        }
    }
    Ok(Verdict::Pass)
}
