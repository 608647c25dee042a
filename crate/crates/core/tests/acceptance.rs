//! Acceptance suite: runs every validation criterion at its stated
//! tolerance and prints one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use omdsc_core::validation;

#[test]
fn acceptance_criteria() {
    let report = validation::run_all().expect("validation harness ran");
    for c in &report.criteria {
        println!("{}", c.line());
    }
    let failed: Vec<_> = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.line())
        .collect();
    assert!(
        failed.is_empty(),
        "failing acceptance criteria:\n{}",
        failed.join("\n")
    );
}
