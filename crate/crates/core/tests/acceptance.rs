//! Acceptance suite: one test per numbered criterion, printing a pass/fail
//! line with the measured evidence (run with `--nocapture` to see the lines
//! for passing criteria; `cgk verify-all` prints them unconditionally).

use cgk_core::acceptance::{self, AcceptanceConfig, CriterionOutcome};

fn report(outcome: &CriterionOutcome) {
    println!("{}", outcome.summary_line());
    for line in &outcome.details {
        println!("    {line}");
    }
    assert!(
        outcome.passed,
        "{}\n{}",
        outcome.summary_line(),
        outcome.details.join("\n")
    );
}

#[test]
fn criterion_1_constants_table() {
    report(&acceptance::criterion_1_constants());
}

#[test]
fn criterion_2_group_orders_strong_approximation() {
    report(&acceptance::criterion_2_orders(&AcceptanceConfig::from_env()));
}

#[test]
fn criterion_3_centralizer_formulas() {
    report(&acceptance::criterion_3_centralizers(&AcceptanceConfig::from_env()));
}

#[test]
fn criterion_4_killing_nondegeneracy() {
    report(&acceptance::criterion_4_killing());
}

#[test]
fn criterion_5_orbit_bound() {
    report(&acceptance::criterion_5_orbit_bound(&AcceptanceConfig::from_env()));
}

#[test]
fn criterion_6_counting_exponents() {
    report(&acceptance::criterion_6_counting(&AcceptanceConfig::from_env()));
}

#[test]
fn criterion_7_spherical_decay() {
    report(&acceptance::criterion_7_spherical());
}

#[test]
fn criterion_8_end_to_end_gap() {
    report(&acceptance::criterion_8_gap());
}

#[test]
fn criterion_9_determinism() {
    report(&acceptance::criterion_9_determinism(&AcceptanceConfig::from_env()));
}
