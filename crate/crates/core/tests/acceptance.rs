use std::process::ExitCode;

use nervebar::suite::{run, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig {
        seed: 20240917,
        ..SuiteConfig::default()
    };
    let outcomes = run("all", &cfg).unwrap();
    println!();
    let mut failed = vec![];
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{} {status} {} ({} ms)", o.criterion, o.case, o.elapsed_ms);
        if !o.passed {
            println!("    {}", o.detail);
            failed.push(o.criterion.clone());
        }
    }
    if outcomes.len() != 10 || !failed.is_empty() {
        println!("acceptance failed: {} criteria run, failing {failed:?}", outcomes.len());
        return ExitCode::FAILURE;
    }
    println!("acceptance: all {} criteria pass", outcomes.len());
    ExitCode::SUCCESS
}
