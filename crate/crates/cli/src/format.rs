//! The `.dga` and `.twr` text formats.
//!
//! Both are line oriented; `#` starts a comment. Elements are written as sums
//! of terms `c*x`, `x` or `c` (a scalar multiple of the unit) separated by
//! `+` or `-` surrounded by spaces, or `0`.
//!
//! ```text
//! field Q
//! basis e1:0 e2:0 a1:0
//! unit e1 + e2
//! mul e1 e1 = 1*e1
//! diff a1 = 0
//! ```
//!
//! A `.twr` file describes a twisted module; generators are numbered from 1.
//! In resolution files the entries live in `A^e` (basis `xoy` for `x ⊗ y`) and
//! `eps` lines give the augmentation on each generator.
//!
//! ```text
//! gens 0 1
//! alpha 1 2 = 1*a1oe1 - 1*e2oa1
//! idem 1 1 = 1*e1oe1
//! eps 1 = 1
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serre_core::dga::{validate_algebra, DGAlgebra, Element};
use serre_core::scalar::{Field, Scalar};
use serre_core::twisted::{TwError, TwistedModule};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("PARSE_ERROR line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("VALIDATION_ERROR: {0}")]
    Validation(String),
}

impl FormatError {
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Parse { .. } => "PARSE_ERROR",
            FormatError::Validation(_) => "VALIDATION_ERROR",
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Coefficients as plain numbers (residues print as their representative in `[0, p)`).
pub fn format_scalar(c: &Scalar) -> String {
    match c {
        Scalar::Fp { value, .. } => value.to_string(),
        q => q.to_string(),
    }
}

pub fn format_element(a: &DGAlgebra, x: &[Scalar]) -> String {
    let terms: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{}*{}", format_scalar(c), a.name(i)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn parse_element(a: &DGAlgebra, text: &str) -> Result<Element, String> {
    let field = a.field();
    let mut acc = a.zero();
    let mut sign: Option<Scalar> = None;
    let mut expect_term = true;
    for tok in text.split_whitespace() {
        if tok == "+" || tok == "-" {
            if expect_term {
                return Err(format!("unexpected `{tok}`"));
            }
            sign = Some(if tok == "+" { field.one() } else { field.from_i64(-1) });
            expect_term = true;
            continue;
        }
        if !expect_term {
            return Err(format!("expected `+` or `-` before `{tok}`"));
        }
        let term = parse_term(a, tok)?;
        let s = sign.take().unwrap_or_else(|| field.one());
        for (v, t) in acc.iter_mut().zip(term) {
            *v = &*v + &(&s * &t);
        }
        expect_term = false;
    }
    if expect_term {
        return Err("missing term".into());
    }
    Ok(acc)
}

fn parse_term(a: &DGAlgebra, tok: &str) -> Result<Element, String> {
    let field = a.field();
    let scalar = |s: &str| field.parse(s).map_err(|e| e.to_string());
    if let Some(k) = a.index_of(tok) {
        return Ok(a.basis_element(k));
    }
    let (c, x) = match tok.split_once('*') {
        Some((c, name)) => {
            let k = a.index_of(name).ok_or_else(|| format!("unknown basis element `{name}`"))?;
            (scalar(c)?, a.basis_element(k))
        }
        None => (
            scalar(tok).map_err(|_| format!("unknown basis element `{tok}`"))?,
            a.unit(),
        ),
    };
    Ok(x.iter().map(|v| &c * v).collect())
}

fn parse_field(line: usize, s: &str) -> Result<Field, FormatError> {
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix('F')
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| parse_err(line, format!("unknown field `{s}` (expected Q or F<p>)")))?;
    Field::prime(p).map_err(|e| parse_err(line, e.to_string()))
}

/// The parts of a line after its keyword: `lhs = rhs`.
fn split_eq(line: usize, rest: &str) -> Result<(Vec<&str>, &str), FormatError> {
    let (l, r) = rest
        .split_once('=')
        .ok_or_else(|| parse_err(line, "expected `=`"))?;
    Ok((l.split_whitespace().collect(), r.trim()))
}

pub fn parse_dga(text: &str) -> Result<DGAlgebra, FormatError> {
    let mut field: Option<Field> = None;
    let mut basis: Option<(usize, Vec<(String, i64)>)> = None;
    let mut unit: Option<(usize, &str)> = None;
    let mut body = Vec::new();
    for (n, l) in content_lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match kw {
            "field" => {
                if field.is_some() {
                    return Err(parse_err(n, "duplicate `field` declaration"));
                }
                field = Some(parse_field(n, rest)?);
            }
            "basis" => {
                if basis.is_some() {
                    return Err(parse_err(n, "duplicate `basis` declaration"));
                }
                let mut out = Vec::new();
                for tok in rest.split_whitespace() {
                    let (name, deg) = tok
                        .rsplit_once(':')
                        .ok_or_else(|| parse_err(n, format!("expected <name>:<degree>, got `{tok}`")))?;
                    let deg: i64 = deg.parse().map_err(|_| parse_err(n, format!("bad degree in `{tok}`")))?;
                    out.push((name.to_string(), deg));
                }
                if out.is_empty() {
                    return Err(parse_err(n, "empty basis"));
                }
                basis = Some((n, out));
            }
            "unit" => {
                if unit.is_some() {
                    return Err(parse_err(n, "duplicate `unit` declaration"));
                }
                unit = Some((n, rest));
            }
            "mul" | "diff" => body.push((n, kw, rest)),
            _ => return Err(parse_err(n, format!("unknown keyword `{kw}`"))),
        }
    }
    let last = text.lines().count().max(1);
    let field = field.ok_or_else(|| parse_err(last, "missing `field` declaration"))?;
    let (bline, basis) = basis.ok_or_else(|| parse_err(last, "missing `basis` declaration"))?;
    let (uline, unit) = unit.ok_or_else(|| parse_err(last, "missing `unit` declaration"))?;
    let probe = DGAlgebra::new(field, basis.clone(), &vec![field.zero(); basis.len()])
        .map_err(|e| parse_err(bline, e.to_string()))?;
    let u = parse_element(&probe, unit).map_err(|e| parse_err(uline, e))?;
    let mut a = DGAlgebra::new(field, basis, &u).map_err(|e| parse_err(uline, e.to_string()))?;
    let mut seen_mul = BTreeSet::new();
    let mut seen_diff = BTreeSet::new();
    for (n, kw, rest) in body {
        let (lhs, rhs) = split_eq(n, rest)?;
        let index = |name: &str| a.index_of(name).ok_or_else(|| parse_err(n, format!("unknown basis element `{name}`")));
        let value = parse_element(&a, rhs).map_err(|e| parse_err(n, e))?;
        if kw == "mul" {
            let [x, y] = lhs[..] else {
                return Err(parse_err(n, "expected `mul <x> <y> = ...`"));
            };
            let (i, j) = (index(x)?, index(y)?);
            if !seen_mul.insert((i, j)) {
                return Err(parse_err(n, format!("duplicate product {x} {y}")));
            }
            a.set_product(i, j, &value).map_err(|e| parse_err(n, e.to_string()))?;
        } else {
            let [x] = lhs[..] else {
                return Err(parse_err(n, "expected `diff <x> = ...`"));
            };
            let i = index(x)?;
            if !seen_diff.insert(i) {
                return Err(parse_err(n, format!("duplicate differential of {x}")));
            }
            a.set_diff(i, &value).map_err(|e| parse_err(n, e.to_string()))?;
        }
    }
    if let Some(v) = validate_algebra(&a).violation {
        return Err(FormatError::Validation(v.to_string()));
    }
    Ok(a)
}

pub fn print_dga(a: &DGAlgebra) -> String {
    let mut out = String::new();
    let dim = a.dim();
    out += &format!("field {}\n", a.field());
    let basis: Vec<String> = (0..dim).map(|i| format!("{}:{}", a.name(i), a.degree(i))).collect();
    out += &format!("basis {}\n", basis.join(" "));
    let unit = a.unit();
    let single = a.unit_sparse();
    match single {
        [(k, c)] if c.is_one() => out += &format!("unit {}\n", a.name(*k)),
        _ => out += &format!("unit {}\n", format_element(a, &unit)),
    }
    for i in 0..dim {
        for j in 0..dim {
            if !a.product(i, j).is_empty() {
                let v = a.product_dense(i, j);
                out += &format!("mul {} {} = {}\n", a.name(i), a.name(j), format_element(a, &v));
            }
        }
    }
    for i in 0..dim {
        if !a.diff_of(i).is_empty() {
            let v = a.d(&a.basis_element(i));
            out += &format!("diff {} = {}\n", a.name(i), format_element(a, &v));
        }
    }
    out
}

/// A parsed `.twr` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwrFile {
    pub module: TwistedModule,
    /// Augmentation values, one per generator (resolution files only).
    pub eps: Option<Vec<Element>>,
}

fn entry_error(kw: &str, i: usize, j: usize, e: TwError) -> String {
    match e {
        TwError::EntryDegree { expected, .. } => format!("{kw} {} {} must have degree {expected}", i + 1, j + 1),
        TwError::Index { .. } => format!("{kw} {} {} is outside the generator range", i + 1, j + 1),
        e => format!("{kw} {} {}: {e}", i + 1, j + 1),
    }
}

/// Parses a twisted module over `entries`. With `base = Some(A)` the file is a
/// resolution and `eps` lines (elements of `A`) are allowed; unlisted ones are 0.
pub fn parse_twr(text: &str, entries: &DGAlgebra, base: Option<&DGAlgebra>) -> Result<TwrFile, FormatError> {
    let mut lines = content_lines(text);
    let (gline, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `gens` declaration"))?;
    let rest = first
        .strip_prefix("gens")
        .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
        .ok_or_else(|| parse_err(gline, "file must start with `gens`"))?;
    let shifts = rest
        .split_whitespace()
        .map(|s| s.parse::<i64>().map_err(|_| parse_err(gline, format!("bad shift `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rank = shifts.len();
    let mut t = TwistedModule::new(entries, shifts);
    let mut eps: BTreeMap<usize, Element> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    let mut has_idem = false;
    for (n, l) in lines {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let (lhs, rhs) = split_eq(n, rest)?;
        let index = |s: &str| -> Result<usize, FormatError> {
            let i: usize = s.parse().map_err(|_| parse_err(n, format!("bad generator index `{s}`")))?;
            if i == 0 || i > rank {
                return Err(parse_err(n, format!("generator {i} out of range 1..{rank}")));
            }
            Ok(i - 1)
        };
        match kw {
            "alpha" | "idem" => {
                let [i, j] = lhs[..] else {
                    return Err(parse_err(n, format!("expected `{kw} <i> <j> = ...`")));
                };
                let (i, j) = (index(i)?, index(j)?);
                if !seen.insert((kw, i, j)) {
                    return Err(parse_err(n, format!("duplicate {kw} {} {}", i + 1, j + 1)));
                }
                if kw == "alpha" && i >= j {
                    return Err(parse_err(
                        n,
                        format!("alpha {} {} is not strictly upper triangular", i + 1, j + 1),
                    ));
                }
                let x = parse_element(entries, rhs).map_err(|e| parse_err(n, e))?;
                let r = t.shifts();
                let expected = r[i] - r[j] + i64::from(kw == "alpha");
                if !entries.is_of_degree(&x, expected) {
                    return Err(parse_err(n, format!("{kw} {} {} must have degree {expected}", i + 1, j + 1)));
                }
                let r = if kw == "alpha" {
                    t.set_alpha(i, j, x)
                } else {
                    has_idem = true;
                    t.set_idempotent_entry(i, j, x)
                };
                r.map_err(|e| parse_err(n, entry_error(kw, i, j, e)))?;
            }
            "eps" => {
                let base = base.ok_or_else(|| parse_err(n, "`eps` is only allowed in resolution files"))?;
                let [j] = lhs[..] else {
                    return Err(parse_err(n, "expected `eps <j> = ...`"));
                };
                let j = index(j)?;
                if eps.contains_key(&j) {
                    return Err(parse_err(n, format!("duplicate eps {}", j + 1)));
                }
                let x = parse_element(base, rhs).map_err(|e| parse_err(n, e))?;
                let expected = -t.shifts()[j];
                if !base.is_of_degree(&x, expected) {
                    return Err(parse_err(n, format!("eps {} must have degree {expected}", j + 1)));
                }
                eps.insert(j, x);
            }
            "gens" => return Err(parse_err(n, "duplicate `gens` declaration")),
            _ => return Err(parse_err(n, format!("unknown keyword `{kw}`"))),
        }
    }
    if has_idem && t.idempotent().is_none() {
        // every listed entry was zero: the zero idempotent
        t.set_idempotent(BTreeMap::new()).map_err(|e| FormatError::Validation(e.to_string()))?;
    }
    let eps = base.map(|a| (0..rank).map(|j| eps.remove(&j).unwrap_or_else(|| a.zero())).collect());
    Ok(TwrFile { module: t, eps })
}

/// Prints a twisted module; `comment` becomes a leading `#` line. `eps` holds
/// the base algebra and augmentation values of a resolution.
pub fn print_twr(t: &TwistedModule, comment: Option<&str>, eps: Option<(&DGAlgebra, &[Element])>) -> String {
    let a = t.algebra();
    let mut out = String::new();
    if let Some(c) = comment {
        out += &format!("# {c}\n");
    }
    let shifts: Vec<String> = t.shifts().iter().map(i64::to_string).collect();
    out += format!("gens {}", shifts.join(" ")).trim_end();
    out += "\n";
    for ((i, j), x) in t.alpha_entries() {
        out += &format!("alpha {} {} = {}\n", i + 1, j + 1, format_element(a, x));
    }
    if let Some(e) = t.idempotent() {
        for ((i, j), x) in e {
            out += &format!("idem {} {} = {}\n", i + 1, j + 1, format_element(a, x));
        }
    }
    if let Some((base, eps)) = eps {
        for (j, x) in eps.iter().enumerate() {
            if x.iter().any(|c| !c.is_zero()) {
                out += &format!("eps {} = {}\n", j + 1, format_element(base, x));
            }
        }
    }
    out
}
