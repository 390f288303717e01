//! Runs every numbered criterion and prints one PASS/FAIL line for each,
//! followed by the individual checks. Exits nonzero if any criterion fails.
//!
//! `cargo test -p dafn-core --test acceptance -- 3 9` runs a subset.

use std::process::ExitCode;

use dafn_core::verify::{run_criterion, VerifyConfig, CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { (1..=CRITERIA).collect() } else { ids };
    let quick = std::env::var_os("ACCEPTANCE_QUICK").is_some();
    let cfg = VerifyConfig { quick, ..Default::default() };

    let mut failed = Vec::new();
    println!("\nacceptance suite ({} mode)", if quick { "quick" } else { "full" });
    for id in ids {
        match run_criterion(id, &cfg) {
            Ok(outcome) => {
                print!("{outcome}");
                if !outcome.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:>2} [FAIL] {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
