use serre_cli::example_files;
use serre_cli::format::{parse_dga, parse_twr, print_dga, print_twr, FormatError};
use serre_core::dga::{self, validate_algebra};
use serre_core::examples::{named_example, EXAMPLE_NAMES};
use serre_core::hochschild::{certify_smooth, Epsilon};
use serre_core::scalar::Field;

const K: &str = "field Q\nbasis 1:0\nunit 1\nmul 1 1 = 1*1\n";

const A2: &str = "\
# the path algebra of 1 -> 2
field Q
basis e1:0 e2:0 a:0
unit e1 + e2
mul e1 e1 = e1
mul e2 e2 = e2
mul e2 a = a
mul a e1 = a
";

fn parse_line(e: FormatError) -> usize {
    match e {
        FormatError::Parse { line, .. } => line,
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn base_field_file() {
    let a = parse_dga(K).unwrap();
    assert_eq!(a.dim(), 1);
    assert_eq!(a, named_example(Field::Rational, "k").unwrap().0);
}

#[test]
fn path_algebra_file() {
    let a = parse_dga(A2).unwrap();
    assert_eq!(a.dim(), 3);
    assert!(validate_algebra(&a).is_valid());
    assert_eq!(a.nonzero_products().count(), 4);
}

#[test]
fn inhomogeneous_product_is_a_validation_error() {
    let text = "field Q\nbasis 1:0 x:1\nunit 1\nmul 1 1 = 1\nmul 1 x = x\nmul x 1 = x\nmul x x = x\n";
    match parse_dga(text) {
        Err(FormatError::Validation(msg)) => assert!(msg.contains("x*x"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dup = format!("{K}mul 1 1 = 1\n");
    assert_eq!(parse_line(parse_dga(&dup).unwrap_err()), 5);
    assert_eq!(parse_line(parse_dga("field Q\n\nbasis 1:0\nunit y\n").unwrap_err()), 4);
    assert_eq!(parse_line(parse_dga("field Q\nfield Q\n").unwrap_err()), 2);
    assert_eq!(parse_line(parse_dga("field R\n").unwrap_err()), 1);
    assert_eq!(parse_line(parse_dga("field Q\nbasis 1:0 1:0\nunit 1\n").unwrap_err()), 2);
    assert_eq!(parse_line(parse_dga("field Q\nbasis 1:0\nunit 1\nmul 1 1 = 1 1\n").unwrap_err()), 4);
    assert_eq!(parse_line(parse_dga("field Q\nbasis 1:0\nfrobnicate\n").unwrap_err()), 3);
    // a missing declaration points past the end of the file
    assert_eq!(parse_line(parse_dga("field Q\nbasis 1:0\n").unwrap_err()), 2);
}

#[test]
fn elements_accept_signs_fractions_and_unit_multiples() {
    let a = parse_dga(A2).unwrap();
    let x = serre_cli::format::parse_element(&a, "1/2*a - e1 + 3").unwrap();
    let q = Field::Rational;
    assert_eq!(x, vec![q.from_i64(2), q.from_i64(3), q.from_ratio(1, 2).unwrap()]);
    assert!(serre_cli::format::parse_element(&a, "a +").is_err());
    assert!(serre_cli::format::parse_element(&a, "a b").is_err());
    assert_eq!(serre_cli::format::parse_element(&a, "0").unwrap(), a.zero());
}

#[test]
fn trivial_resolution_of_k() {
    let a = parse_dga(K).unwrap();
    let f = parse_twr("gens 0\neps 1 = 1\n", &dga::enveloping(&a), Some(&a)).unwrap();
    let cert = certify_smooth(&a, &f.module, &Epsilon::OnGenerators(f.eps.unwrap())).unwrap();
    assert!(cert.verification.is_quasi_iso);
}

#[test]
fn idempotent_cut_resolution_of_kxk() {
    let (dga_text, _, twr_text) = example_files(Field::Rational, "kxk").unwrap();
    let a = parse_dga(&dga_text).unwrap();
    let f = parse_twr(&twr_text, &dga::enveloping(&a), Some(&a)).unwrap();
    assert!(f.module.idempotent().is_some());
    assert!(certify_smooth(&a, &f.module, &Epsilon::OnGenerators(f.eps.unwrap())).is_ok());
}

#[test]
fn twisted_entries_are_checked_where_they_appear() {
    let a = parse_dga(A2).unwrap();
    // alpha 1 2 must have degree 1 + 0 - 0 = 1
    let e = parse_twr("gens 0 0\n# comment\nalpha 1 2 = a\n", &a, None).unwrap_err();
    assert_eq!(parse_line(e.clone()), 3);
    assert!(e.to_string().contains("alpha 1 2 must have degree 1"), "{e}");
    let e = parse_twr("gens 0 1\nalpha 2 1 = a\n", &a, None).unwrap_err();
    assert!(e.to_string().contains("strictly upper triangular"), "{e}");
    assert_eq!(parse_line(parse_twr("gens 0\nalpha 1 3 = a\n", &a, None).unwrap_err()), 2);
    assert_eq!(parse_line(parse_twr("gens 0\neps 1 = e1\n", &a, None).unwrap_err()), 2);
    assert_eq!(parse_line(parse_twr("alpha 1 2 = a\n", &a, None).unwrap_err()), 1);
    let env = dga::enveloping(&a);
    let e = parse_twr("gens 1\neps 1 = e1\n", &env, Some(&a)).unwrap_err();
    assert!(e.to_string().contains("eps 1 must have degree -1"), "{e}");
}

#[test]
fn emitted_files_round_trip() {
    for field in [Field::Rational, Field::Prime(3), Field::Prime(5)] {
        for name in EXAMPLE_NAMES {
            let (dga_text, _, twr_text) = example_files(field, name).unwrap();
            let a = parse_dga(&dga_text).unwrap();
            assert_eq!(a, named_example(field, name).unwrap().0, "{name}");
            assert_eq!(print_dga(&a), dga_text);
            let f = parse_twr(&twr_text, &dga::enveloping(&a), Some(&a)).unwrap();
            let eps = f.eps.clone().unwrap();
            assert_eq!(print_twr(&f.module, Some(twr_text.lines().next().unwrap().trim_start_matches("# ")), Some((&a, &eps))), twr_text);
            if let Some(cert) = named_example(field, name).unwrap().1 {
                assert_eq!(f.module, cert.pa, "{name}");
                assert_eq!(Epsilon::OnGenerators(eps), cert.eps, "{name}");
            }
        }
    }
}
