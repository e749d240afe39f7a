//! Liquid fuel pathways with and without fuel credits.
//!
//! ```text
//! cargo run --example slf_costs -- 5 100 0.75 1.25
//! ```
//! Arguments are 45Z years, LCFS $/t, D5 and D3 RIN prices, all optional.

use fuelpath::lcof::lcof_slf;
use fuelpath::policy::{FuelCreditScenario, RinPrices};
use fuelpath::techdata::{Dataset, Product};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let arg = |i: usize| args.get(i).copied().unwrap_or(0.0);
    let ds = Dataset::default_dataset();

    let base = FuelCreditScenario::baseline();
    let scenario = base
        .with_z45(arg(0) as u32)
        .with_lcfs(arg(1))
        .with_rins(RinPrices { d5: arg(2), d3: arg(3), d6: arg(2) });
    scenario.validate(ds.finance.book_life_years)?;

    println!("{:<4} {:>9} {:>9} {:>12}  name", "id", "baseline", "scenario", "CI/MMBtu");
    for p in ds.pathways_of(Product::Slf) {
        let b0 = lcof_slf(&ds, p, &base)?;
        let b1 = lcof_slf(&ds, p, &scenario)?;
        println!("{:<4} {:>9.3} {:>9.3} {:>12.2}  {}", p.id, b0.net, b1.net, b1.ci, p.name);
        for w in &b1.warnings {
            println!("     note: {w}");
        }
    }
    println!("fossil jet: {:.2} $/gal", ds.benchmarks.fossil_jet_price);
    Ok(())
}
