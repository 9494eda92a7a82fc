use std::process::{Command, Output};

fn mtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtc")).args(args).output().unwrap()
}

fn text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_every_entry() {
    let out = text(&mtc(&["catalog"]));
    assert_eq!(out.lines().count(), 11);
    assert!(out.lines().any(|l| l.starts_with("ising") && l.contains("F/R, characters")));
}

#[test]
fn show_reports_quantum_dimensions() {
    let out = text(&mtc(&["show", "catalog:fibonacci"]));
    assert!(out.contains("tau    h = 2/5"), "{out}");
    assert!(out.contains("d = 1.618033988750"));
}

#[test]
fn verlinde_prints_fibonacci_rule() {
    let out = text(&mtc(&["verlinde", "catalog:fibonacci"]));
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("N ")).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().any(|l| l.starts_with("N tau tau tau = 1.000000000000")));
}

#[test]
fn chars_prints_and_evaluates() {
    let out = text(&mtc(&["chars", "catalog:su2-1", "--order", "5"]));
    assert!(out.contains("[1, 3, 4, 7, 13]"), "{out}");
    let out = text(&mtc(&["chars", "catalog:ising", "--label", "sigma", "--tau", "0,1"]));
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("sigma"));
}

#[test]
fn chars_without_data_is_an_error() {
    assert_eq!(mtc(&["chars", "catalog:fibonacci"]).status.code(), Some(2));
    assert_eq!(mtc(&["chars", "catalog:ising", "--label", "tau"]).status.code(), Some(2));
}

#[test]
fn json_report_is_stable() {
    let a = text(&mtc(&["verify", "catalog:ising", "--json", "--order", "50"]));
    let b = text(&mtc(&["verify", "catalog:ising", "--json", "--order", "50"]));
    assert_eq!(a, b);
    let keys: Vec<usize> = ["\"source\"", "\"tol\"", "\"checks\""].iter().map(|k| a.find(k).unwrap()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}
