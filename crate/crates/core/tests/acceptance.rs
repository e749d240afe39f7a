//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use fuelpath::cli::{acceptance_checks, VerifyReport};
use fuelpath::techdata::Dataset;

const TITLES: [&str; 11] = [
    "derating factors",
    "hydrogen LCOF",
    "hydrogen carbon intensity and carbon balance",
    "liquid fuel LCOF",
    "45Z duration thresholds",
    "competitiveness frontier",
    "hydrogen subsidy regression",
    "mitigation cost against SCC",
    "efficiency incentive study",
    "derived technology rows",
    "invariants",
];

fn main() -> ExitCode {
    let report = VerifyReport { checks: acceptance_checks(&Dataset::default_dataset()) };
    for (k, passed) in report.criteria() {
        let failing: Vec<String> = report
            .checks
            .iter()
            .filter(|c| c.criterion == k && !c.passed)
            .map(|c| format!("{} = {} (want {})", c.name, c.value, c.expected))
            .collect();
        let status = if passed { "pass" } else { "FAIL" };
        let title = TITLES[k as usize - 1];
        if failing.is_empty() {
            println!("criterion {k:>2} {status}  {title}");
        } else {
            println!("criterion {k:>2} {status}  {title}: {}", failing.join("; "));
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
