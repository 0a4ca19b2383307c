//! One pass/fail line per acceptance criterion; exits nonzero on any failure.

use std::process::ExitCode;

use arithext_cli::suite::{human_lines, verify_suite, MANIFEST};
use arithext_cli::Settings;

fn main() -> ExitCode {
    let report = verify_suite(&Settings::default());
    println!();
    for line in human_lines(&report) {
        println!("acceptance {line}");
    }
    let ids: Vec<&str> = report.criteria.iter().map(|c| c.id.as_str()).collect();
    if ids != MANIFEST.iter().map(|(id, _)| *id).collect::<Vec<_>>() {
        eprintln!("criteria do not match the manifest: {ids:?}");
        return ExitCode::FAILURE;
    }
    let mut ok = true;
    for c in report.criteria.iter().filter(|c| !c.passed) {
        eprintln!("{} failed: {}", c.id, c.detail);
        ok = false;
    }
    println!("acceptance: {} of {} criteria passed\n", report.criteria.iter().filter(|c| c.passed).count(), report.criteria.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
