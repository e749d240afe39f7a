//! Credit value against CO2 avoided for hydrogen, and the CO2 sale price that
//! lets biomass hydrogen with capture match unabated reforming.

use fuelpath::analysis::{breakeven_biogenic_co2_price, standard_subsidy_regression, SaleConvention};
use fuelpath::techdata::Dataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    let r = standard_subsidy_regression(&ds)?;
    for p in &r.points {
        println!("{:<3} avoided {:>6.2} kg/kg  credits {:>6.3} $/kg", p.pathway, p.ci_reduction, p.subsidy);
    }
    println!("reforming fit: {:.1} $/t (intercept {:.3} $/kg)", r.slope_per_tonne, r.line.intercept);
    println!("electrolysis: {:.1} $/t total, {:.1} $/t above the line", r.electrolysis_total, r.electrolysis_bonus);

    println!();
    for share in [0.5, 0.95, 1.0] {
        let keep = breakeven_biogenic_co2_price(&ds, "P6", "P1", share, SaleConvention::RetainsTransportStorage)?;
        let skip = breakeven_biogenic_co2_price(&ds, "P6", "P1", share, SaleConvention::AvoidsTransportStorage)?;
        println!("sell {:>3.0}% of captured CO2: breakeven {keep:>6.1} $/t, {skip:>6.1} $/t if sold CO2 skips storage", share * 100.0);
    }
    Ok(())
}
