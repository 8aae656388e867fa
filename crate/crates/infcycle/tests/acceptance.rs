//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its runtime. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines on success.

use std::time::{Duration, Instant};

use infcycle::catalog;

fn run(criterion: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    match &outcome {
        Ok(detail) => println!(
            "criterion {}: PASS ({:.2?}) — {}",
            criterion, elapsed, detail
        ),
        Err(msg) => println!("criterion {}: FAIL ({:.2?}) — {}", criterion, elapsed, msg),
    }
    assert!(outcome.is_ok(), "criterion {}: {}", criterion, outcome.unwrap_err());
    assert!(
        elapsed <= limit,
        "criterion {} exceeded its budget: {:.2?} > {:.2?}",
        criterion,
        elapsed,
        limit
    );
}

#[test]
fn criterion_01_bloch_consistency() {
    // each pair individually under 30 s; the whole battery fits well inside
    run("1 (Bloch Theorem 1.2 consistency)", Duration::from_secs(4 * 30), || {
        catalog::check_bloch_pairs()
    });
}

#[test]
fn criterion_02_hodge_decomposition() {
    run("2 (Hodge decomposition)", Duration::from_secs(300), catalog::check_hodge);
}

#[test]
fn criterion_03_mixed_complex_identities() {
    run("3 (mixed-complex identities)", Duration::from_secs(60), catalog::check_mixed_identities);
}

#[test]
fn criterion_04_sbi_graded_splitting() {
    run("4 (SBI graded splitting)", Duration::from_secs(120), catalog::check_sbi);
}

#[test]
fn criterion_05_regularity_oracle_agreement() {
    run(
        "5 (Koszul/regularity oracle agreement)",
        Duration::from_secs(60),
        catalog::check_regularity_battery,
    );
}

#[test]
fn criterion_06_fundamental_class_formula() {
    run("6 (local fundamental class formula)", Duration::from_secs(10), || {
        catalog::check_fundamental_sign(false)
    });
}

#[test]
fn criterion_07_basis_independence() {
    run("7 (basis independence)", Duration::from_secs(60), catalog::check_basis_change);
}

#[test]
fn criterion_08_graded_obstruction_vanishing() {
    run("8 (graded obstruction vanishing)", Duration::from_secs(600), || {
        catalog::check_obstruction_battery(50)
    });
}

#[test]
fn criterion_09_denominator_contrast() {
    run("9 (denominator contrast)", Duration::from_secs(10), catalog::check_denominator_contrast);
}

#[test]
fn criterion_10_naturality() {
    run("10 (naturality)", Duration::from_secs(60), catalog::check_naturality);
}

// Criterion 11 (byte-identical JSON output) is exercised in the CLI crate's
// integration tests, where the binary is available.

#[test]
fn supporting_certificates_round_trip() {
    run("supporting (certificate re-expansion)", Duration::from_secs(10), catalog::check_certificates);
}

#[test]
fn supporting_tangent_examples() {
    run("supporting (tangent examples)", Duration::from_secs(60), catalog::check_tangent);
}
