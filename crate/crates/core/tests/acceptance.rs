//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Use `cargo test -p qsplit-core --test acceptance -- --nocapture` to see
//! the table.

use qsplit_core::acceptance::{run_all, CriterionOutcome};

#[test]
fn acceptance_criteria() {
    let outcomes: Vec<CriterionOutcome> = run_all(0);
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
