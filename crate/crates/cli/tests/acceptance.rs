//! Acceptance criteria at full size. Prints one line per criterion and exits
//! nonzero if any criterion fails or runs over its time budget.

use std::process::ExitCode;

use stiefel_bp::Exec;
use stiefel_bp_cli::suites::{run_suite, suites, SuiteOptions};

fn main() -> ExitCode {
    let opts = SuiteOptions { quick: false, mutate_transgression: false, exec: Exec::default() };
    let mut failed = Vec::new();
    println!("acceptance criteria");
    for suite in suites() {
        let result = run_suite(&suite, &opts);
        println!("{}", result.line());
        if !result.passed() {
            failed.push(suite.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
