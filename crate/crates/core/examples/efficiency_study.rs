//! Does 45Z reward a less efficient biomass-to-fuel plant that captures more CO2?
//!
//! ```text
//! cargo run --example efficiency_study -- 0.095
//! ```
//! The argument is the fixed-cost cut per 10 points of efficiency lost.

use fuelpath::analysis::{efficiency_incentive_analysis, net_value_spread, EfficiencyParams, STUDY_ETAS};

fn main() {
    let n: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.095);
    let params = EfficiencyParams::default();
    let cases = efficiency_incentive_analysis(&params, &STUDY_ETAS, n);

    println!("{:>5} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}", "eta", "CI", "45Z", "fuel", "fixed", "VOM", "T&S", "net");
    for c in &cases {
        println!(
            "{:>5.2} {:>8.2} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1}",
            c.eta, c.ci, c.credit_45z, c.revenue_slf, c.fixed, c.vom, c.co2_ts, c.net_value
        );
    }
    println!("net value spread: {:.2}%", net_value_spread(&cases) * 100.0);
    for eta in &STUDY_ETAS[1..] {
        println!("fixed cut needed at eta {eta}: {:.1}%", params.required_fixed_reduction(*eta) * 100.0);
    }
}
