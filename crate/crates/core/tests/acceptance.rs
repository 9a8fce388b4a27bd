//! Runs every acceptance criterion and prints one pass/fail line each.

use hyperlap::golden;

fn main() {
    let mut failed = Vec::new();
    for id in 1..=golden::CRITERIA {
        let report = golden::run_criterion(id);
        println!("{}", report.line());
        for c in report.failures().skip(1) {
            println!("       -- {c}");
        }
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", golden::CRITERIA);
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
