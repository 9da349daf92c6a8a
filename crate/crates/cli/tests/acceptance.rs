//! One line per acceptance criterion. Tolerances are exact throughout: every
//! comparison is between exact field elements or integer dimensions.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use serre_core::canonical::{is_chain_isomorphism, map_f, map_g, rearrange_twoten};
use serre_core::complex::{self, cone, hom_complex, shift, tensor, validate_complex, Complex, SearchBudget};
use serre_core::dga::{self, validate_algebra, DGAlgebra, Element};
use serre_core::duality::{invert_check, serre_check, Witness};
use serre_core::examples::{named_example, naive_resolution, RandomTwisted, EXAMPLE_NAMES};
use serre_core::hochschild::{
    certify_smooth, hh_bar, hh_pairing, hh_resolution, nonpositive_corollary_check, CertifyError, SmoothCertificate,
};
use serre_core::linalg;
use serre_core::matrix::Matrix;
use serre_core::module::diagonal_action;
use serre_core::scalar::Field;
use serre_core::twisted::{
    cone_tw, double_dual_eval, dual_vee, hom_tw, realize, shift_tw, sum_tw, validate_twisted, TwistedModule,
};

const CERTIFIED: [&str; 6] = ["k", "kxk", "kxk-split", "a2", "a3", "a2-dg"];
const SEED: u64 = 20_240_917;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn example(name: &str) -> (DGAlgebra, Option<SmoothCertificate>) {
    named_example(Field::Rational, name).expect("built-in example")
}

fn cert(name: &str) -> SmoothCertificate {
    example(name).1.expect("certified example")
}

fn fmt_dims(d: &BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = d.iter().map(|(n, k)| format!("{n}:{k}")).collect();
    format!("{{{}}}", parts.join(","))
}

/// Basis elements `e` with `e^2 = e` and `de = 0`, plus the unit.
fn idempotents(a: &DGAlgebra) -> Vec<Element> {
    let mut out: Vec<Element> = (0..a.dim())
        .map(|k| a.basis_element(k))
        .filter(|e| a.degree_of(e) == Some(0) && a.mul(e, e) == *e && dga::is_zero(&a.d(e)))
        .collect();
    if !out.contains(&a.unit()) {
        out.push(a.unit());
    }
    out
}

fn random_module(rng: &mut RandomTwisted, a: &DGAlgebra) -> TwistedModule {
    let t = rng.twisted(a);
    if rng.index(2) == 0 {
        rng.summand(&t, &idempotents(a), 4)
    } else {
        t
    }
}

fn complex_ok(c: &Complex) -> bool {
    validate_complex(c).violations.is_empty()
}

/// A random closed degree-0 morphism `x → y` between modules without idempotents.
fn random_closed(rng: &mut RandomTwisted, x: &TwistedModule, y: &TwistedModule) -> serre_core::twisted::TwMorphism {
    let h = hom_tw(x, y).expect("same algebra");
    let reps = complex::cohomology(&h.full).representatives.get(&0).cloned().unwrap_or_default();
    let field = x.algebra().field();
    let mut v = vec![field.zero(); h.full.dim(0)];
    for z in &reps {
        let c = field.from_i64(rng.index(5) as i64 - 2);
        for (a, b) in v.iter_mut().zip(z) {
            *a = &*a + &(&c * b);
        }
    }
    h.morphism(0, &v)
}

fn axiom_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut algebras = Vec::new();
    for name in EXAMPLE_NAMES {
        let (a, c) = example(name);
        for (label, b) in [("", a.clone()), ("^op", dga::opposite(&a)), ("^e", dga::enveloping(&a))] {
            if !validate_algebra(&b).is_valid() {
                failures.push(format!("algebra {name}{label}"));
            }
        }
        if !complex_ok(&a.as_complex()) {
            failures.push(format!("complex {name}"));
        }
        if let Some(c) = c {
            if !validate_twisted(&c.pa).is_valid() || !complex_ok(realize(&c.pa).unwrap().complex()) {
                failures.push(format!("resolution {name}"));
            }
        }
        algebras.push(a);
    }
    let mut rng = RandomTwisted::new(SEED);
    let composites = 200;
    for i in 0..composites {
        let a = &algebras[rng.index(algebras.len())];
        let n = random_module(&mut rng, a);
        let m = random_module(&mut rng, a);
        let op = rng.index(7);
        let ok = match op {
            0 => complex_ok(&tensor(realize(&n).unwrap().complex(), realize(&m).unwrap().complex()).unwrap()),
            1 => complex_ok(&hom_complex(realize(&n).unwrap().complex(), realize(&m).unwrap().complex()).unwrap()),
            2 => {
                let f = random_closed(&mut rng, &n.without_idempotent(), &m.without_idempotent());
                let c = cone_tw(&f).unwrap();
                validate_twisted(&c).is_valid() && complex_ok(realize(&c).unwrap().complex())
            }
            3 => {
                let k = rng.index(5) as i64 - 2;
                let s = sum_tw(&shift_tw(&n, k), &m).unwrap();
                validate_twisted(&s).is_valid()
                    && complex_ok(realize(&s).unwrap().complex())
                    && complex_ok(&shift(realize(&n).unwrap().complex(), k))
            }
            4 => {
                let d = dual_vee(&n);
                validate_twisted(&d).is_valid() && complex_ok(realize(&d).unwrap().complex())
            }
            5 => complex_ok(&hom_tw(&n, &m).unwrap().complex),
            _ => {
                let f = random_closed(&mut rng, &n.without_idempotent(), &m.without_idempotent());
                complex_ok(&cone(&f.realize().unwrap()).unwrap())
            }
        };
        if !ok {
            failures.push(format!("composite {i} (kind {op})"));
        }
    }
    let pass = failures.is_empty();
    outcome(
        pass,
        if pass {
            format!("{} generator algebras, {composites} composites, d^2 = 0 everywhere", 3 * EXAMPLE_NAMES.len())
        } else {
            format!("violations: {}", failures.join(", "))
        },
    )
}

fn appendix_isomorphisms() -> Outcome {
    let mut rng = RandomTwisted::new(SEED + 1);
    let mut failures = Vec::new();
    let total = 100;
    let names = ["k", "kxk", "a2"];
    let mut checked = 0;
    for (idx, name) in names.iter().enumerate() {
        let c = cert(name);
        let a = &c.algebra;
        let count = total / names.len() + usize::from(idx < total % names.len());
        let diag = diagonal_action(a);
        let resolved = realize(&c.pa).unwrap();
        let modules: Vec<TwistedModule> = (0..=count).map(|_| random_module(&mut rng, a)).collect();
        for i in 0..count {
            let (n, m) = (&modules[i], &modules[i + 1]);
            let mr = realize(m).unwrap();
            let f = map_f(n, &mr).unwrap();
            let g = map_g(n, &mr).unwrap();
            let ev = double_dual_eval(n).realize().unwrap();
            let x = if i % 2 == 0 { &diag } else { &resolved };
            let r = rearrange_twoten(&realize(n).unwrap(), x, &realize(&dual_vee(m)).unwrap()).unwrap();
            for (label, ok) in [
                ("F", f.well_defined && f.map.is_closed() && f.is_isomorphism()),
                ("G", g.well_defined && g.map.is_closed() && g.is_isomorphism()),
                ("eval", ev.is_closed() && is_chain_isomorphism(&ev)),
                ("rearrange", r.map.well_defined && r.map.map.is_closed() && r.map.is_isomorphism()),
            ] {
                if !ok {
                    failures.push(format!("{label} on {name} module {i}"));
                }
            }
            checked += 1;
        }
    }
    let pass = failures.is_empty() && checked == total;
    outcome(
        pass,
        if pass {
            format!("{checked} random modules over k, kxk, A_2: F, G, eval, rearrangement bijective chain maps")
        } else {
            format!("{checked} checked; failures: {}", failures.join(", "))
        },
    )
}

/// `dim A^0 / [A^0, A^0]`, which is `HH_0` for a non-positively graded algebra with zero differential.
fn commutator_quotient(a: &DGAlgebra) -> Option<usize> {
    if !a.is_nonpositive() || (0..a.dim()).any(|k| !a.diff_of(k).is_empty()) {
        return None;
    }
    let deg0 = a.basis_of_degree(0);
    let mut rows = Vec::new();
    for &i in &deg0 {
        for &j in &deg0 {
            let c = dga::sub(&a.product_dense(i, j), &a.product_dense(j, i));
            rows.push(deg0.iter().map(|&k| c[k].clone()).collect::<Vec<_>>());
        }
    }
    Some(deg0.len() - linalg::rank(&Matrix::from_dense(a.field(), &rows)))
}

fn finite_hh_with_oracles() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["k", "kxk", "a2", "a3", "a2-dg"] {
        let c = cert(name);
        let hh = hh_resolution(&c).unwrap();
        let columns = if name == "a3" { 4 } else { 6 };
        let bar = hh_bar(&c.algebra, (-(columns as i64 - 2), 1), columns).unwrap();
        let stable = bar.stable();
        let bar_ok = stable.iter().all(|(n, d)| hh.dims.get(n).copied().unwrap_or(0) == *d)
            && hh.dims.keys().all(|n| stable.contains_key(n));
        let cq = commutator_quotient(&c.algebra);
        let cq_ok = cq.map_or(true, |d| hh.dims.get(&0).copied().unwrap_or(0) == d);
        pass &= bar_ok && cq_ok;
        parts.push(format!(
            "{name} total {} {} bar {} quotient {}",
            hh.total(),
            fmt_dims(&hh.dims),
            if bar_ok { "agrees" } else { "DISAGREES" },
            match cq {
                Some(d) => d.to_string(),
                None => "n/a".into(),
            }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn pairing_nondegenerate() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["k", "kxk", "a2", "a3", "a2-dg"] {
        let start = Instant::now();
        let p = hh_pairing(&cert(name), SearchBudget::default()).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let ok = p.theta.is_some() && p.all_nondegenerate() && p.dim_symmetric && secs < 10.0;
        pass &= ok;
        parts.push(format!(
            "{name} {} after {} candidates ({secs:.2}s)",
            if ok { "FOUND nondegenerate" } else { "FAILED" },
            p.candidates_tried
        ));
    }
    outcome(pass, parts.join("; "))
}

fn corollary() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in CERTIFIED {
        let c = cert(name);
        if !c.algebra.is_nonpositive() {
            continue;
        }
        let columns = if name == "a3" { 4 } else { 6 };
        let r = nonpositive_corollary_check(&c, columns).unwrap();
        pass &= r.pass();
        parts.push(format!("{name} {} {}", fmt_dims(&r.dims), if r.pass() { "ok" } else { "FAILED" }));
    }
    outcome(pass, parts.join("; "))
}

fn invert() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in CERTIFIED {
        let r = invert_check(&cert(name), Some(SearchBudget::default())).unwrap();
        let found = r.witnesses.iter().all(|(_, w)| matches!(w, Witness::Found { .. }));
        let need_witness = matches!(name, "k" | "kxk");
        let ok = r.pass() && (found || !need_witness);
        pass &= ok;
        parts.push(format!(
            "{name} dims {} witness {}",
            if r.pass() { "match" } else { "DIFFER" },
            if found { "found" } else { "not-found" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn serre() -> Outcome {
    let mut rng = RandomTwisted::new(SEED + 2);
    let mut failures = Vec::new();
    let mut nonzero = 0;
    let pairs = 50;
    for i in 0..pairs {
        let a = cert(if i % 2 == 0 { "a2" } else { "kxk" }).algebra;
        let n = random_module(&mut rng, &a);
        let m = random_module(&mut rng, &a);
        let r = serre_check(&n, &m).unwrap();
        if !r.pass() {
            failures.push(format!("pair {i}"));
        }
        if r.comparisons.iter().any(|c| !c.lhs.is_empty()) {
            nonzero += 1;
        }
    }
    let pass = failures.is_empty();
    outcome(
        pass,
        if pass {
            format!("{pairs} random pairs over A_2 and kxk agree in every degree ({nonzero} with nonzero Hom)")
        } else {
            format!("disagreements: {}", failures.join(", "))
        },
    )
}

fn negative_controls() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["dual-numbers", "exterior"] {
        let (a, _) = example(name);
        let (pa, eps) = naive_resolution(&a);
        let rejected = matches!(certify_smooth(&a, &pa, &eps), Err(CertifyError::NotQuasiIso(_)));
        let bar = hh_bar(&a, (-6, 0), 8).unwrap();
        let negative = bar.stable().iter().filter(|(&n, &d)| n < 0 && d > 0).count();
        let ok = rejected && negative >= 3;
        pass &= ok;
        parts.push(format!(
            "{name} {} bar nonzero in {negative} negative degrees",
            if rejected { "NOT_QUASI_ISO" } else { "ACCEPTED" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn resolution_independence() -> Outcome {
    let p = hh_pairing(&cert("kxk"), SearchBudget::default()).unwrap();
    let q = hh_pairing(&cert("kxk-split"), SearchBudget::default()).unwrap();
    let pass = p.hh.dims == q.hh.dims
        && p.nondegenerate == q.nondegenerate
        && p.all_nondegenerate() == q.all_nondegenerate();
    outcome(
        pass,
        format!(
            "idempotent-cut {} nondegenerate {}; per-vertex {} nondegenerate {}",
            fmt_dims(&p.hh.dims),
            p.all_nondegenerate(),
            fmt_dims(&q.hh.dims),
            q.all_nondegenerate()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    common::emit_examples(dir.path());
    let mut failures = Vec::new();
    let cases = common::cases();
    for (name, args) in &cases {
        let first = common::run_case(args, dir.path());
        let second = common::run_case(args, dir.path());
        let text = format!("exit {}\n{}", first.exit_code(), first.report);
        let golden = fs::read_to_string(common::golden_dir().join(format!("{name}.txt"))).unwrap_or_default();
        if first != second || text != golden {
            failures.push(name.clone());
        }
    }
    let pass = failures.is_empty();
    outcome(
        pass,
        if pass {
            format!("{} reports byte-identical across two runs and to the golden files", cases.len())
        } else {
            format!("differing reports: {}", failures.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom suite", axiom_suite),
        ("appendix isomorphisms", appendix_isomorphisms),
        ("finite HH, oracle agreement", finite_hh_with_oracles),
        ("nondegenerate pairing", pairing_nondegenerate),
        ("non-positive corollary", corollary),
        ("dualizing bimodules invert", invert),
        ("Serre duality", serre),
        ("negative controls", negative_controls),
        ("resolution independence", resolution_independence),
        ("report determinism", determinism),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (label, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {label} [exact] ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    let secs = total.elapsed().as_secs_f64();
    let in_time = secs < 120.0;
    println!("{} total time {secs:.1}s (limit 120s)", if in_time { "PASS" } else { "FAIL" });
    if failed == 0 && in_time {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
