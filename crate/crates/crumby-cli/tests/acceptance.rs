//! Runs the complete verification suite and holds every check to its
//! runtime budget. `cargo test --test acceptance -- --nocapture` prints one
//! line per check.

use crumby_cli::repro::{run_criteria, ReproOptions};

/// Per-check wall-time budgets in milliseconds. The C5xC7 long job has no
/// budget and stays behind the binary's --include-long flag.
fn budget_ms(id: usize) -> u128 {
    match id {
        1 | 2 => 10_000,
        3 => 60_000,
        4 | 5 => 1_000,
        6 | 7 => 5_000,
        8 => 30_000,
        9 => 900_000,
        10 => 60_000,
        11 | 12 => 60_000,
        _ => panic!("unknown criterion id {id}"),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria = run_criteria(&ReproOptions::default());
    assert_eq!(criteria.len(), 12, "the suite must cover all 12 checks");

    let mut failures = Vec::new();
    for c in &criteria {
        let budget = budget_ms(c.id);
        let in_budget = c.millis <= budget;
        println!(
            "{} {:2}  {} [{} ms, budget {} ms]  {}",
            if c.pass && in_budget { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.millis,
            budget,
            c.detail
        );
        if !c.pass {
            failures.push(format!("{}: {}", c.id, c.detail));
        } else if !in_budget {
            failures.push(format!("{}: {} ms exceeds {} ms", c.id, c.millis, budget));
        }
    }
    assert!(failures.is_empty(), "failed checks:\n{}", failures.join("\n"));
}
