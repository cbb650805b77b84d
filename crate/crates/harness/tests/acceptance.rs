//! The acceptance gate: runs every criterion and prints one verdict line
//! each. Run it alone with
//!   cargo test -p angio-harness --test acceptance -- --nocapture

use angio_harness::suite;

#[test]
fn acceptance_criteria() {
    let results = suite::run_all(None);
    assert_eq!(results.len(), 10, "expected all ten criteria to run");

    let mut all_ok = true;
    for r in &results {
        println!("{}", r.line());
        all_ok &= r.passed;
    }
    println!(
        "{}/{} criteria passed",
        results.iter().filter(|r| r.passed).count(),
        results.len()
    );
    assert!(all_ok, "acceptance criteria failed — see the verdict lines above");
}
