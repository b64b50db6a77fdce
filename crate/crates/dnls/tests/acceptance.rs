//! The verification battery as ten separate test cases, printing one
//! pass/fail line each (visible with `--nocapture`, or in the failure
//! output).
//!
//! `check_04_map_replay` is a documented expected failure: it demands
//! full-orbit map replays of every converged periodic state stay under
//! 1e-6, but replay noise is amplified by each state's cycle multiplier,
//! which reaches 1e20..1e87 for the strongly coupled figure states. The
//! check runs faithfully and reports the measured errors and their
//! correlation with the cycle traces rather than loosening the threshold.

use dnls::verify::{self, CheckResult};

fn report(r: CheckResult) {
    let tag = if r.passed { "PASS" } else { "FAIL" };
    println!("[{tag}] {}: {}", r.name, r.detail);
    assert!(r.passed, "{} failed: {}", r.name, r.detail);
}

#[test]
fn check_01_two_site_exact() {
    report(verify::criterion_1());
}

#[test]
fn check_02_surd_series() {
    report(verify::criterion_2());
}

#[test]
fn check_03_seed_battery() {
    report(verify::criterion_3());
}

#[test]
fn check_04_map_replay() {
    report(verify::criterion_4());
}

#[test]
fn check_05_area_preservation() {
    report(verify::criterion_5());
}

#[test]
fn check_06_linear_solver() {
    report(verify::criterion_6());
}

#[test]
fn check_07_figure_portraits() {
    report(verify::criterion_7());
}

#[test]
fn check_08_convergence_orders() {
    report(verify::criterion_8());
}

#[test]
fn check_09_stagger_duality() {
    report(verify::criterion_9());
}

#[test]
fn check_10_tail_decay() {
    report(verify::criterion_10());
}
