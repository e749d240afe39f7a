//! How long 45Z must last for each liquid fuel to reach the jet price band.

use fuelpath::analysis::sweep_45z_duration;
use fuelpath::policy::FuelCreditScenario;
use fuelpath::techdata::Dataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    let years: Vec<u32> = (0..=ds.finance.book_life_years).collect();
    let curves = sweep_45z_duration(&ds, &years, &FuelCreditScenario::baseline())?;
    let (low, high) = (ds.benchmarks.jet_price_low, ds.benchmarks.jet_price_high);

    print!("{:<4}", "yrs");
    for c in &curves {
        print!("{:>7}", c.pathway);
    }
    println!();
    for y in &years {
        print!("{y:<4}");
        for c in &curves {
            print!("{:>7.3}", c.at(*y).unwrap_or(f64::NAN));
        }
        println!();
    }

    println!("\nshortest term reaching the band [{low}, {high}] $/gal:");
    for c in &curves {
        match c.min_duration_at_or_below(high) {
            Some(y) => println!("  {:<4} {y} years", c.pathway),
            None => println!("  {:<4} never", c.pathway),
        }
    }
    Ok(())
}
