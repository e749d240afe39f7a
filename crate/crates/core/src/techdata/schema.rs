//! Serialized form of the dataset document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::policy::{Instrument, Q45Variant, RinCategory};

use super::{Co2Source, FeedstockKind, Product};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQuantity {
    pub value: f64,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDataset {
    pub constants: RawConstants,
    pub finance: RawFinance,
    pub policy: RawPolicy,
    pub feedstocks: Vec<RawFeedstock>,
    pub technologies: Vec<RawTechnology>,
    pub pathways: Vec<RawPathway>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConstants {
    pub h2_hhv: RawQuantity,
    pub slf_gal_lhv: RawQuantity,
    pub slf_gal_mmbtu_lhv: RawQuantity,
    pub ethanol_gal_lhv: RawQuantity,
    pub gj_per_mmbtu: RawQuantity,
    pub kwh_per_gj: RawQuantity,
    pub slf_gal_per_mmbtu: RawQuantity,
    pub fuels: BTreeMap<String, RawFuel>,
    pub benchmarks: RawBenchmarks,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFuel {
    pub hhv_per_tonne: RawQuantity,
    pub hhv_lhv_ratio: RawQuantity,
    pub carbon_content: RawQuantity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBenchmarks {
    pub h2_fossil: RawQuantity,
    pub slf_fossil_per_gal: RawQuantity,
    pub slf_fossil_per_mmbtu: RawQuantity,
    pub fossil_jet_price: RawQuantity,
    pub jet_price_low: RawQuantity,
    pub jet_price_high: RawQuantity,
    pub scc_2030: [RawQuantity; 2],
    pub scc_2040: [RawQuantity; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFinance {
    pub wacc: RawQuantity,
    pub book_life_years: u32,
    pub crf: Option<RawQuantity>,
    pub capacity_factor: RawQuantity,
    pub market_prices: RawMarketPrices,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMarketPrices {
    pub grid_electricity: RawQuantity,
    pub co2_transport: RawQuantity,
    pub co2_storage: RawQuantity,
    pub co2_compression: RawQuantity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTier {
    #[serde(default)]
    pub ci_lower: Option<RawQuantity>,
    pub ci_upper: RawQuantity,
    pub rate: RawQuantity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQ45Rates {
    pub sequestration: RawQuantity,
    pub utilization: RawQuantity,
    pub dac_sequestration: RawQuantity,
    pub dac_utilization: RawQuantity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDurations {
    #[serde(rename = "45Q")]
    pub q45: u32,
    #[serde(rename = "45V")]
    pub v45: u32,
    #[serde(rename = "45Y")]
    pub y45: u32,
    pub methane_fee: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPolicy {
    pub v45_tiers: Vec<RawTier>,
    pub q45_rates: RawQ45Rates,
    pub z45_base_saf: RawQuantity,
    pub z45_base_other: RawQuantity,
    pub z45_ci_pivot: RawQuantity,
    pub saf_fraction: RawQuantity,
    pub y45_rate: RawQuantity,
    pub methane_fee: RawQuantity,
    pub durations: RawDurations,
    pub rin_equivalence: RawQuantity,
    pub lcfs_benchmark: RawQuantity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFeedstock {
    pub id: String,
    pub name: String,
    pub kind: FeedstockKind,
    #[serde(default)]
    pub fuel: Option<String>,
    pub price: RawQuantity,
    pub upstream_ci: RawQuantity,
    pub biogenic: bool,
    #[serde(default)]
    pub methane_leak: Option<RawQuantity>,
    #[serde(default)]
    pub embedded_credit: Option<Instrument>,
    #[serde(default)]
    pub captured_co2: Option<RawQuantity>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTechnology {
    pub id: String,
    pub name: String,
    pub product: Product,
    pub ifi: f64,
    pub coproduct_elec: f64,
    pub capture_rate: f64,
    pub capex: RawQuantity,
    pub fom: RawQuantity,
    pub vom: RawQuantity,
    #[serde(default)]
    pub capacity_factor: Option<f64>,
    #[serde(default)]
    pub co2_demand: Option<RawQuantity>,
    #[serde(default)]
    pub derivation: Option<RawDerivation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawDerivation {
    Integrated { gasifier: String, synthesis: String },
    EthanolToJet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawClaim {
    One(Instrument),
    BestOf { best_of: Vec<Instrument> },
    Stacked { stacked: Vec<Instrument> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFacility {
    pub id: String,
    #[serde(default)]
    pub technology: Option<String>,
    pub feedstocks: Vec<String>,
    #[serde(default)]
    pub claim: Option<RawClaim>,
    #[serde(default)]
    pub q45_variant: Option<Q45Variant>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPathway {
    pub id: String,
    pub name: String,
    pub product: Product,
    pub co2_source: Co2Source,
    #[serde(default)]
    pub rfs_category: Option<RinCategory>,
    pub facilities: Vec<RawFacility>,
}
