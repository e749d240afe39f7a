//! Credit schedules and the one-credit-per-plant rule.

use fuelpath::lcof::{hydrogen_facility_cost, lcof_h2};
use fuelpath::policy::validate_claims;
use fuelpath::techdata::Dataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    let policy = &ds.policy;

    println!("45V by CI (kgCO2e/kg):");
    for ci in [0.2, 0.8, 1.5, 2.9, 3.5, 4.5] {
        println!("  {ci:>4} -> {:.4} $/kg", policy.credit_45v(ci));
    }
    println!("45Z per gallon by CI (kgCO2e/MMBtu), SAF share {}:", policy.saf_fraction);
    for ci in [0.0, 10.0, 25.0, 50.0] {
        println!("  {ci:>4} -> {:.4} $/gal", policy.credit_45z_per_gal(ci, policy.saf_fraction));
    }

    // Every option is priced; only the best is taken.
    let p3 = ds.pathway("P3")?;
    let fac = p3.hydrogen_facility().expect("hydrogen plant");
    let h = hydrogen_facility_cost(&ds, fac, 0.0)?;
    for o in &h.options {
        println!("P3 option {:?}: {:.4} $/GJ", o.instrument, o.value);
    }
    println!("P3 takes {:?}, net {:.4} $/kg", h.claimed.iter().map(|c| c.instrument).collect::<Vec<_>>(), lcof_h2(&ds, p3)?.net);

    let stacked = ds.pathway("P6")?.with_dual_h2_credit();
    match validate_claims(&stacked) {
        Ok(()) => println!("stacking accepted"),
        Err(v) => println!("stacking refused: {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")),
    }
    Ok(())
}
