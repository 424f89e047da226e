//! One test per acceptance criterion; each prints a single PASS/FAIL line.

use fracoga_cli::verify::{run_named, Hooks};

fn criterion(name: &str) {
    let r = run_named(name, &Hooks::default()).expect("known check");
    println!("{}", r.line());
    assert!(r.outcome.passed, "{}", r.line());
}

#[test]
fn c01_operator_exactness() {
    criterion("operator-exactness");
}

#[test]
fn c02_gl_closed_form() {
    criterion("gl-closed-form");
}

#[test]
fn c03_gamma_identity() {
    criterion("gamma-identity");
}

#[test]
fn c04_forcing_consistency() {
    criterion("forcing-consistency");
}

#[test]
fn c05_fdm_convergence() {
    criterion("fdm-convergence");
}

#[test]
fn c06_table_alpha2_k1_m1000() {
    criterion("table-alpha2-k1-M1000");
}

#[test]
fn c07_table_alpha2_k2_m100() {
    criterion("table-alpha2-k2-M100");
}

#[test]
fn c08_table_alpha15_k1_m1000() {
    criterion("table-alpha1.5-k1-M1000");
}

#[test]
fn c09_plateau_alpha05_k2_m1000() {
    criterion("plateau-alpha0.5-k2-M1000");
}

#[test]
fn c10_galerkin_orthogonality() {
    criterion("galerkin-orthogonality");
}

#[test]
fn c11_energy_monotone() {
    criterion("energy-monotone");
}

#[test]
fn c12_determinism() {
    criterion("determinism");
}
