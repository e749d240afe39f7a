//! Levelized subsidy per tonne avoided, set against social cost of carbon bands.

use fuelpath::lcof::{lscm, LcofError, LscmOptions};
use fuelpath::techdata::Dataset;

fn band_label(v: f64, (lo, hi): (f64, f64)) -> &'static str {
    if v < lo {
        "below"
    } else if v > hi {
        "above"
    } else {
        "within"
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    let (b30, b40) = (ds.benchmarks.scc_2030, ds.benchmarks.scc_2040);
    println!("SCC 2030 {b30:?}, 2040 {b40:?} $/t");
    println!("{:<4} {:>10} {:>9} {:>9}  2030    2040", "id", "$/tCO2e", "subsidy", "avoided");

    let opts = LscmOptions::default();
    for p in &ds.pathways {
        match lscm(&ds, p, &opts) {
            Ok(m) => println!(
                "{:<4} {:>10.1} {:>9.3} {:>9.2}  {:<7} {}",
                p.id,
                m.lscm,
                m.total_subsidy,
                m.ci_delta,
                band_label(m.lscm, b30),
                band_label(m.lscm, b40)
            ),
            Err(LcofError::NoMitigation { ci_delta, .. }) => println!("{:<4} {:>10}  no reduction ({ci_delta:.2})", p.id, "N/A"),
            Err(LcofError::NotApplicable(_)) => println!("{:<4} {:>10}  no credits", p.id, "N/A"),
            Err(e) => return Err(e.into()),
        }
    }

    let dual = lscm(&ds, ds.pathway("P6")?, &LscmOptions { dual_h2_credit: true, ..opts })?;
    println!("\nP6 stacking 45V and 45Q: {:.1} $/t", dual.lscm);
    Ok(())
}
