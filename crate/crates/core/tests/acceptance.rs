//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line. Criterion 8 is expected to fail in its spreading half (the take-off
//! time of a 1e-2 bump at the critical growth exponent is out of desk range,
//! see the notes in `frontlab::suite`); it runs unmodified so the failure is
//! visible rather than papered over.

use frontlab::suite;

fn check(result: suite::CriterionResult) {
    println!("{}", result.line());
    assert!(result.pass, "{}", result.line());
}

#[test]
fn criterion_01_speed_oracle() {
    check(suite::criterion_1_speed_oracle());
}

#[test]
fn criterion_02_profile_oracle() {
    check(suite::criterion_2_profile_oracle());
}

#[test]
fn criterion_03_speed_bounds_catalog() {
    check(suite::criterion_3_speed_bounds_catalog());
}

#[test]
fn criterion_04_solver_oracles() {
    check(suite::criterion_4_solver_oracles());
}

#[test]
fn criterion_05_speed_dichotomy() {
    check(suite::criterion_5_speed_dichotomy());
}

#[test]
fn criterion_06_front_like_convergence() {
    check(suite::criterion_6_front_like_convergence());
}

#[test]
fn criterion_07_two_front_convergence() {
    check(suite::criterion_7_two_front_convergence());
}

#[test]
fn criterion_08_hair_trigger_dichotomy() {
    check(suite::criterion_8_hair_trigger_dichotomy());
}

#[test]
fn criterion_09_barrier_validity() {
    check(suite::criterion_9_barrier_validity());
}

#[test]
fn criterion_10_slow_wave_supersolution() {
    check(suite::criterion_10_slow_wave_supersolution());
}

#[test]
fn criterion_11_pressure_bound() {
    check(suite::criterion_11_pressure_bound());
}

#[test]
fn criterion_12_determinism_refinement() {
    check(suite::criterion_12_determinism_refinement());
}
