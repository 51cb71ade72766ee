//! Acceptance battery: every criterion at full desk scale, exact values, with its
//! wall-clock budget. Runs without the libtest harness so the one-line verdict per
//! criterion is always printed. Positional arguments filter by criterion number.

use std::process::ExitCode;
use std::time::Instant;

use fgver_core::suite::{run_criterion, time_limit, Scale, CRITERIA};

fn criterion(id: u8) -> bool {
    let t = Instant::now();
    let report = run_criterion(id, Scale::FullDesk);
    let elapsed = t.elapsed();
    let limit = time_limit(id);
    let in_time = elapsed <= limit;
    let complete = report.skipped.is_empty();
    let pass = report.pass && in_time && complete;
    println!(
        "criterion {id:>2} [{}] {} ({:.2}s, limit {}s)",
        if pass { "PASS" } else { "FAIL" },
        report.title,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for c in report.checks.iter().filter(|c| !c.pass) {
        println!("    failed: {} {}", c.name, c.detail);
    }
    if !complete {
        println!("    skipped: {:?}", report.skipped);
    }
    if !in_time {
        println!("    over the time limit");
    }
    pass
}

fn main() -> ExitCode {
    let filters: Vec<u8> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .filter_map(|a| a.trim_start_matches("criterion_").parse().ok())
        .collect();
    let ids: Vec<u8> = CRITERIA
        .iter()
        .map(|c| c.0)
        .filter(|id| filters.is_empty() || filters.contains(id))
        .collect();
    let failed = ids.iter().filter(|&&id| !criterion(id)).count();
    println!("acceptance: {} of {} criteria passed", ids.len() - failed, ids.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
