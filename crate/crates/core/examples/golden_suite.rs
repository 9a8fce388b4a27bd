//! Run selected golden criteria and print their checks.
//!
//! ```text
//! cargo run --release --example golden_suite -- 1 2 11
//! ```

use hyperlap::golden;

fn main() {
    let ids: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { vec![1, 4, 5] } else { ids };
    for id in ids {
        let r = golden::run_criterion(id);
        println!("{}", r.line());
        for c in &r.checks {
            println!("    {} {c}", if c.passed { "ok  " } else { "FAIL" });
        }
    }
}
