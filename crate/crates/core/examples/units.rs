//! Unit-aware quantities: parsing, heating-value bases and money per energy.

use fuelpath::quantities::{FuelProperties, Quantity};
use fuelpath::techdata::Dataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    let h2 = ds.h2_properties();
    let slf = ds.slf_properties();

    let kg = Quantity::new(1.0, "kgH2")?;
    println!("1 kg H2 = {:.4} GJ_HHV = {:.4} GJ_LHV", kg.to("GJ_HHV", Some(&h2))?.value, kg.to("GJ_LHV", Some(&h2))?.value);

    let power = Quantity::new(55.0, "USD/MWh")?;
    println!("55 $/MWh = {:.4} $/GJ", power.to("USD/GJ", None)?.value);

    let fom = Quantity::new(19.0, "USD/kW-yr")?;
    println!("19 $/kW-yr = {:.4} $/GJ at full output", fom.to("USD/GJ", None)?.value);

    let ci = Quantity::new(10.0, "kgCO2e/GJ_HHV")?;
    println!("10 kgCO2e/GJ_HHV of SLF = {:.3} kgCO2e/MMBtu_LHV", ci.to("kgCO2e/MMBtu_LHV", Some(&slf))?.value);

    // HHV and LHV energies do not add without fuel properties.
    let a = Quantity::new(1.0, "GJ_HHV")?;
    let b = Quantity::new(1.0, "GJ_LHV")?;
    println!("GJ_HHV + GJ_LHV: {:?}", a.try_add(&b).err());
    println!("GJ_LHV without a fuel: {}", a.to("GJ_LHV", None).unwrap_err());

    let wood = FuelProperties::new(19.0, 1.08, 94.6);
    println!("1 t wood = {:.2} GJ_LHV", Quantity::new(1.0, "tbiomass")?.to("GJ_LHV", Some(&wood))?.value);
    Ok(())
}
