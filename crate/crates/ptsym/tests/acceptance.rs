use std::process::ExitCode;

use ptsym::acceptance::{run_all, KNOWN_UNATTAINABLE};

fn main() -> ExitCode {
    let reports = run_all(0);
    for r in &reports {
        println!("{r}");
    }
    let unexpected: Vec<_> = reports.iter().filter(|r| !r.passed && r.known_unattainable().is_none()).map(|r| r.id).collect();
    let missing: Vec<_> = KNOWN_UNATTAINABLE.iter().filter(|(id, _)| !reports.iter().any(|r| r.id == *id)).map(|(id, _)| *id).collect();
    if !unexpected.is_empty() || !missing.is_empty() {
        println!("unexpected failures: {unexpected:?}, known checks not run: {missing:?}");
        return ExitCode::FAILURE;
    }
    println!("acceptance: {} checks, {} known failures", reports.len(), reports.iter().filter(|r| !r.passed).count());
    ExitCode::SUCCESS
}
