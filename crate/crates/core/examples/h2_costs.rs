//! Cost breakdown and carbon intensity of the six hydrogen pathways.
//!
//! ```text
//! cargo run --example h2_costs
//! ```

use fuelpath::lcof::{lcof_h2, lcof_h2_dual_credit, LcofBreakdown};
use fuelpath::techdata::{Dataset, Product};

fn show(b: &LcofBreakdown) {
    println!("{:<4} gross {:>7.3}  credits {:>7.3}  net {:>7.3} {}  CI {:>6.2} kgCO2e/kg", b.pathway, b.gross(), b.credits(), b.net, b.unit, b.ci);
    for item in b.items.iter().filter(|i| i.value != 0.0) {
        println!("       {:<24} {:>8.4}", item.item.label(), item.value);
    }
    for c in &b.claims {
        println!("       claimed {:?} {:>8.4}", c.instrument, c.derated_value);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    for p in ds.pathways_of(Product::H2) {
        show(&lcof_h2(&ds, p)?);
    }

    // What if P6 could stack 45V and 45Q instead of choosing one.
    println!("\nP6 with both credits:");
    show(&lcof_h2_dual_credit(&ds, ds.pathway("P6")?)?);
    Ok(())
}
