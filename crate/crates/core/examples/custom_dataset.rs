//! Editing a dataset: quote inputs in other units, change a price, and see
//! what the loader rejects.
//!
//! ```text
//! cargo run --example custom_dataset
//! ```

use fuelpath::lcof::lcof_h2;
use fuelpath::techdata::{load_dataset, Dataset, DatasetError, DEFAULT_DATASET_JSON};
use serde_json::{json, Value};

fn p1(ds: &Dataset) -> f64 {
    lcof_h2(ds, ds.pathway("P1").unwrap()).unwrap().net
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base: Value = serde_json::from_str(DEFAULT_DATASET_JSON)?;
    println!("bundled P1: {:.4} $/kg", p1(&load_dataset(DEFAULT_DATASET_JSON)?));

    // Same gas price quoted per MMBtu, same SMR CAPEX quoted per MW.
    let mut doc = base.clone();
    doc["feedstocks"][0]["price"] = json!({ "value": 4.3 * 1.055, "unit": "USD/MMBtu_HHV" });
    doc["technologies"][0]["capex"] = json!({ "value": 543_000, "unit": "USD/MW" });
    println!("re-quoted:   {:.4} $/kg", p1(&load_dataset(&doc.to_string())?));

    doc["feedstocks"][0]["price"] = json!({ "value": 6.0, "unit": "USD/GJ_HHV" });
    println!("gas at 6:    {:.4} $/kg", p1(&load_dataset(&doc.to_string())?));

    let mut broken = base.clone();
    broken.as_object_mut().unwrap().remove("policy");
    report(load_dataset(&broken.to_string()));

    let mut broken = base.clone();
    broken["technologies"][0]["capex"]["unit"] = json!("USD/gal");
    report(load_dataset(&broken.to_string()));

    let mut broken = base.clone();
    broken["technologies"][0]["ifi"] = json!(0.9);
    report(load_dataset(&broken.to_string()));

    let mut broken = base;
    broken["pathways"][0]["facilities"][0]["feedstocks"] = json!(["shale_gas"]);
    report(load_dataset(&broken.to_string()));
    Ok(())
}

fn report(r: Result<Dataset, DatasetError>) {
    match r {
        Ok(_) => println!("accepted"),
        Err(e @ DatasetError::Schema { .. }) => println!("schema:    {e}"),
        Err(e @ DatasetError::InvariantViolation(_)) => println!("invariant: {e}"),
        Err(e @ DatasetError::DanglingReference { .. }) => println!("reference: {e}"),
        Err(e) => println!("other:     {e}"),
    }
}
