//! Rebuilds the derived technology rows from their ingredients and compares
//! them with what the dataset stores.

use fuelpath::emissions::{ethanol_ccs_ci, EthanolFermentation};
use fuelpath::techdata::derive::{
    derive_compression_cost, derive_ethanol_to_jet_params, derive_integrated_capex, derive_integrated_ifi,
    integrated_mole_factor, verify_derivations,
};
use fuelpath::techdata::Dataset;

fn main() {
    let k = integrated_mole_factor();
    println!("integrated plant: mole factor {k:.4}, IFI {:.4}", derive_integrated_ifi(1.78, 1.47));
    println!("  CAPEX {:.0} $/kW, with capture {:.0} $/kW", derive_integrated_capex(2482.0, 1004.0, 1.47, k), derive_integrated_capex(2587.0, 1004.0, 1.47, k));

    let etj = derive_ethanol_to_jet_params();
    println!("ethanol to jet: {:.1} Mgal/yr reference, scale {:.2}", etj.reference_output, etj.scale);
    println!("  IFI {:.3}, CAPEX {:.0} $/kW, FOM {:.1} $/kW-yr, VOM {:.2} $/GJ", etj.ifi, etj.capex, etj.fom, etj.vom);

    let c = derive_compression_cost();
    println!("CO2 compression: {:.2} capital + {:.2} operating = {:.2} $/t", c.capex_share, c.opex_share, c.total);

    let f = EthanolFermentation::default();
    println!("fermentation CO2: {:.3} kg/GJ ({} rounded), ethanol CI with capture {}", f.capturable_exact(), f.capturable(), ethanol_ccs_ci());

    println!();
    let ds = Dataset::default_dataset();
    for d in verify_derivations(&ds) {
        println!("{:<34} derived {:>10.3} stored {:>10.3}  {}", d.name, d.derived, d.stored, if d.passed() { "ok" } else { "MISMATCH" });
    }
}
