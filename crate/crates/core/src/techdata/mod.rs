//! Technology, feedstock, price and pathway data.
//!
//! A dataset is one JSON document (see `docs/dataset_schema.md`). Every
//! numeric field is a `{value, unit}` pair that is converted to the unit the
//! model works in during [`load_dataset`], so a price may be given per MWh or
//! per GJ, a CAPEX per kW or per MW, and so on.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::emissions::CIBenchmarks;
use crate::finance::FinancialParams;
use crate::policy::{self, Durations, Instrument, PolicySuite, Q45Rates, Q45Variant, RinCategory, V45Tier};
use crate::quantities::{ConversionConstants, FuelProperties, Quantity, QuantityError};

pub mod derive;
pub mod schema;

use schema::*;

/// The dataset shipped with the crate.
pub const DEFAULT_DATASET_JSON: &str = include_str!("../../data/default_dataset.json");

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read dataset {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("{referrer} refers to unknown {kind} `{missing}`")]
    DanglingReference { referrer: String, kind: &'static str, missing: String },
    #[error("no pathway `{0}` in dataset")]
    UnknownPathway(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    H2,
    Slf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedstockKind {
    NaturalGas,
    Biomass,
    Electricity,
    DacCo2,
    Ethanol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Co2Source {
    None,
    Dac,
    BiogenicInternal,
    EthanolFermentation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feedstock {
    pub id: String,
    pub name: String,
    pub kind: FeedstockKind,
    pub fuel: Option<FuelProperties>,
    /// Price as quoted in the dataset.
    pub quoted_price: Quantity,
    /// $/GJ_HHV for fuels, $/MWh for electricity, $/t for CO2.
    pub price: f64,
    /// kgCO2e/GJ_HHV (per GJ for electricity, per kg for CO2).
    pub upstream_ci: f64,
    pub biogenic: bool,
    /// g CH4 per MJ delivered.
    pub methane_leak: Option<f64>,
    pub embedded_credit: Option<Instrument>,
    /// kgCO2 captured and stored upstream per GJ_HHV of this feedstock.
    pub captured_co2: f64,
}

impl Feedstock {
    pub fn carbon_content(&self) -> f64 {
        self.fuel.map_or(0.0, |f| f.carbon_content)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Derivation {
    Integrated { gasifier: String, synthesis: String },
    EthanolToJet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TechnologySpec {
    pub id: String,
    pub name: String,
    pub product: Product,
    /// GJ input per GJ output, HHV.
    pub ifi: f64,
    /// GJ electricity per GJ output; negative is an export.
    pub coproduct_elec: f64,
    pub capture_rate: f64,
    /// $/kW output.
    pub capex: f64,
    /// $/kW-yr.
    pub fom: f64,
    /// $/GJ output.
    pub vom: f64,
    pub capacity_factor: f64,
    /// kgCO2 consumed per GJ_HHV output.
    pub co2_demand: f64,
    pub derivation: Option<Derivation>,
}

/// Which credits a facility takes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ClaimRule {
    #[default]
    None,
    One(Instrument),
    /// Takes whichever single option is worth most.
    BestOf(Vec<Instrument>),
    /// Takes all listed credits at once.
    Stacked(Vec<Instrument>),
}

impl ClaimRule {
    /// Credits held at the same time.
    pub fn simultaneous(&self) -> Vec<Instrument> {
        match self {
            ClaimRule::None => vec![],
            ClaimRule::One(i) => vec![*i],
            ClaimRule::BestOf(opts) => opts.iter().filter(|i| !i.is_exclusive()).copied().chain(opts.iter().find(|i| i.is_exclusive()).copied()).collect(),
            ClaimRule::Stacked(all) => all.clone(),
        }
    }

    pub fn options(&self) -> Vec<Instrument> {
        match self {
            ClaimRule::None => vec![],
            ClaimRule::One(i) => vec![*i],
            ClaimRule::BestOf(v) | ClaimRule::Stacked(v) => v.clone(),
        }
    }

    pub fn mentions(&self, instrument: Instrument) -> bool {
        self.options().contains(&instrument)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Facility {
    pub id: String,
    /// `None` for purchased inputs modeled only through their price (DAC CO2, ethanol).
    pub technology: Option<TechnologySpec>,
    pub feedstocks: Vec<Feedstock>,
    pub claim: ClaimRule,
    pub q45_variant: Q45Variant,
}

impl Facility {
    pub fn primary_feedstock(&self) -> Option<&Feedstock> {
        self.feedstocks.first()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathwayChain {
    pub id: String,
    pub name: String,
    pub product: Product,
    pub co2_source: Co2Source,
    pub rfs_category: Option<RinCategory>,
    pub facilities: Vec<Facility>,
}

impl PathwayChain {
    fn producing(&self, product: Product) -> Option<&Facility> {
        self.facilities.iter().find(|f| f.technology.as_ref().is_some_and(|t| t.product == product))
    }

    pub fn hydrogen_facility(&self) -> Option<&Facility> {
        self.producing(Product::H2)
    }

    pub fn fuel_facility(&self) -> Option<&Facility> {
        self.producing(Product::Slf)
    }

    pub fn dac_facility(&self) -> Option<&Facility> {
        self.facilities
            .iter()
            .find(|f| f.technology.is_none() && f.feedstocks.iter().any(|s| s.kind == FeedstockKind::DacCo2))
    }

    pub fn ethanol_plant(&self) -> Option<&Facility> {
        self.facilities
            .iter()
            .find(|f| f.technology.is_none() && f.feedstocks.iter().any(|s| s.kind == FeedstockKind::Ethanol))
    }

    /// Numeric part of the id, for ordering.
    pub fn index(&self) -> u32 {
        self.id.trim_start_matches('P').parse().unwrap_or(u32::MAX)
    }

    /// Copy in which the hydrogen facility stacks 45V and 45Q.
    pub fn with_dual_h2_credit(&self) -> PathwayChain {
        let mut out = self.clone();
        for fac in &mut out.facilities {
            if fac.technology.as_ref().is_some_and(|t| t.product == Product::H2) {
                fac.claim = ClaimRule::Stacked(vec![Instrument::Credit45V, Instrument::Credit45Q]);
            }
        }
        out
    }
}

/// Prices for services and grid power, all 2022 USD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketPrices {
    /// $/MWh.
    pub grid_electricity: f64,
    /// $/t CO2.
    pub co2_transport: f64,
    pub co2_storage: f64,
    pub co2_compression: f64,
}

impl MarketPrices {
    pub fn co2_transport_storage(&self) -> f64 {
        self.co2_transport + self.co2_storage
    }
}

/// Fossil fuel price references and social cost of carbon bands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketBenchmarks {
    pub fossil_jet_price: f64,
    pub jet_price_low: f64,
    pub jet_price_high: f64,
    pub scc_2030: (f64, f64),
    pub scc_2040: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub constants: ConversionConstants,
    pub fuels: BTreeMap<String, FuelProperties>,
    pub ci_benchmarks: CIBenchmarks,
    pub benchmarks: MarketBenchmarks,
    pub finance: FinancialParams,
    pub market: MarketPrices,
    pub policy: PolicySuite,
    pub feedstocks: Vec<Feedstock>,
    pub technologies: Vec<TechnologySpec>,
    pub pathways: Vec<PathwayChain>,
}

impl Dataset {
    pub fn default_dataset() -> Dataset {
        load_dataset(DEFAULT_DATASET_JSON).expect("shipped dataset is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
        load_dataset(&text)
    }

    pub fn pathway(&self, id: &str) -> Result<&PathwayChain, DatasetError> {
        self.pathways.iter().find(|p| p.id == id).ok_or_else(|| DatasetError::UnknownPathway(id.to_string()))
    }

    pub fn technology(&self, id: &str) -> Option<&TechnologySpec> {
        self.technologies.iter().find(|t| t.id == id)
    }

    pub fn feedstock(&self, id: &str) -> Option<&Feedstock> {
        self.feedstocks.iter().find(|f| f.id == id)
    }

    pub fn fuel(&self, name: &str) -> Option<&FuelProperties> {
        self.fuels.get(name)
    }

    /// Fuel properties of the model's products.
    pub fn slf_properties(&self) -> FuelProperties {
        self.fuels["slf"]
    }

    pub fn h2_properties(&self) -> FuelProperties {
        self.fuels["hydrogen"]
    }

    pub fn pathways_of(&self, product: Product) -> impl Iterator<Item = &PathwayChain> {
        self.pathways.iter().filter(move |p| p.product == product)
    }

    /// GJ_HHV in one gallon of SLF.
    pub fn slf_gj_hhv_per_gal(&self) -> f64 {
        self.constants.slf_gal_mmbtu_lhv * self.constants.gj_per_mmbtu * self.slf_properties().hhv_lhv_ratio
    }

    /// $/GJ for a price in $/MWh.
    pub fn per_mwh_to_per_gj(&self, price: f64) -> f64 {
        price * self.constants.kwh_per_gj / 1000.0
    }
}

fn schema_err(path: &str, e: impl std::fmt::Display) -> DatasetError {
    DatasetError::Schema { path: path.to_string(), message: e.to_string() }
}

fn qty(raw: &RawQuantity, path: &str) -> Result<Quantity, DatasetError> {
    Quantity::new(raw.value, &raw.unit).map_err(|e| schema_err(path, e))
}

/// Converts a raw quantity to `unit`, reporting failures against `path`.
fn val(raw: &RawQuantity, unit: &str, path: &str, props: Option<&FuelProperties>) -> Result<f64, DatasetError> {
    let q = qty(raw, path)?;
    let v = q.to(unit, props).map_err(|e| match e {
        QuantityError::MissingFuelProperties { .. } | QuantityError::IncompatibleDimensions { .. } => {
            schema_err(path, format!("{e}; expected unit compatible with `{unit}`"))
        }
        other => schema_err(path, other),
    })?;
    if !v.value.is_finite() {
        return Err(schema_err(path, "value is not finite"));
    }
    Ok(v.value)
}

fn invariant(ok: bool, msg: impl FnOnce() -> String) -> Result<(), DatasetError> {
    if ok {
        Ok(())
    } else {
        Err(DatasetError::InvariantViolation(msg()))
    }
}

/// Parses and validates a dataset document.
pub fn load_dataset(document: &str) -> Result<Dataset, DatasetError> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let raw: RawDataset = serde_path_to_error::deserialize(de).map_err(|e| {
        let mut path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.to_string();
        // A missing key is reported against its parent; name the key itself.
        if let Some(field) = msg.strip_prefix("missing field `").and_then(|r| r.split('`').next()) {
            path = if path == "." { field.to_string() } else { format!("{path}.{field}") };
        }
        schema_err(&path, inner)
    })?;
    build(raw)
}

fn build(raw: RawDataset) -> Result<Dataset, DatasetError> {
    let c = &raw.constants;
    let constants = ConversionConstants {
        h2_hhv: val(&c.h2_hhv, "GJ_HHV/t", "constants.h2_hhv", None)?,
        slf_gal_lhv: val(&c.slf_gal_lhv, "GJ_LHV/gal", "constants.slf_gal_lhv", None)?,
        slf_gal_mmbtu_lhv: val(&c.slf_gal_mmbtu_lhv, "MMBtu_LHV/gal", "constants.slf_gal_mmbtu_lhv", None)?,
        ethanol_gal_lhv: val(&c.ethanol_gal_lhv, "MMBtu_LHV/gal", "constants.ethanol_gal_lhv", None)?,
        gj_per_mmbtu: val(&c.gj_per_mmbtu, "1", "constants.gj_per_mmbtu", None)?,
        kwh_per_gj: val(&c.kwh_per_gj, "1", "constants.kwh_per_gj", None)?,
        slf_gal_per_mmbtu: val(&c.slf_gal_per_mmbtu, "1", "constants.slf_gal_per_mmbtu", None)?,
    };

    let mut fuels = BTreeMap::new();
    for (name, f) in &c.fuels {
        let p = format!("constants.fuels.{name}");
        let props = FuelProperties {
            hhv_per_tonne: val(&f.hhv_per_tonne, "GJ_HHV/t", &format!("{p}.hhv_per_tonne"), None)?,
            hhv_lhv_ratio: val(&f.hhv_lhv_ratio, "1", &format!("{p}.hhv_lhv_ratio"), None)?,
            carbon_content: val(&f.carbon_content, "kgCO2/GJ_HHV", &format!("{p}.carbon_content"), None)?,
        };
        invariant(props.hhv_lhv_ratio >= 1.0, || format!("{p}: HHV/LHV ratio below 1"))?;
        invariant(props.carbon_content >= 0.0, || format!("{p}: negative carbon content"))?;
        invariant(props.hhv_per_tonne > 0.0, || format!("{p}: non-positive heating value"))?;
        fuels.insert(name.clone(), props);
    }
    for needed in ["hydrogen", "slf"] {
        if !fuels.contains_key(needed) {
            return Err(DatasetError::DanglingReference {
                referrer: "constants.fuels".into(),
                kind: "fuel",
                missing: needed.into(),
            });
        }
    }
    invariant(fuels["hydrogen"].carbon_content == 0.0, || "hydrogen must carry no carbon".into())?;
    invariant((fuels["hydrogen"].hhv_per_tonne - constants.h2_hhv).abs() < 1e-9, || {
        "hydrogen heating value disagrees with constants.h2_hhv".into()
    })?;

    let b = &c.benchmarks;
    let ci_benchmarks = CIBenchmarks {
        h2_fossil: val(&b.h2_fossil, "kgCO2e/kg", "constants.benchmarks.h2_fossil", None)?,
        slf_fossil_per_gal: val(&b.slf_fossil_per_gal, "kgCO2e/gal", "constants.benchmarks.slf_fossil_per_gal", None)?,
        slf_fossil_per_mmbtu: val(&b.slf_fossil_per_mmbtu, "kgCO2e/MMBtu_LHV", "constants.benchmarks.slf_fossil_per_mmbtu", None)?,
    };
    let band = |pair: &[RawQuantity; 2], name: &str| -> Result<(f64, f64), DatasetError> {
        let lo = val(&pair[0], "USD/tCO2e", &format!("constants.benchmarks.{name}[0]"), None)?;
        let hi = val(&pair[1], "USD/tCO2e", &format!("constants.benchmarks.{name}[1]"), None)?;
        invariant(lo <= hi, || format!("{name} band is inverted"))?;
        Ok((lo, hi))
    };
    let benchmarks = MarketBenchmarks {
        fossil_jet_price: val(&b.fossil_jet_price, "USD/gal", "constants.benchmarks.fossil_jet_price", None)?,
        jet_price_low: val(&b.jet_price_low, "USD/gal", "constants.benchmarks.jet_price_low", None)?,
        jet_price_high: val(&b.jet_price_high, "USD/gal", "constants.benchmarks.jet_price_high", None)?,
        scc_2030: band(&b.scc_2030, "scc_2030")?,
        scc_2040: band(&b.scc_2040, "scc_2040")?,
    };

    let f = &raw.finance;
    let wacc = val(&f.wacc, "1", "finance.wacc", None)?;
    let mut finance = FinancialParams::new(wacc, f.book_life_years, val(&f.capacity_factor, "1", "finance.capacity_factor", None)?)
        .map_err(|e| DatasetError::InvariantViolation(format!("finance: {e}")))?;
    if let Some(crf) = &f.crf {
        finance = finance.with_crf(val(crf, "1", "finance.crf", None)?);
    }
    finance.validate().map_err(|e| DatasetError::InvariantViolation(format!("finance: {e}")))?;
    let m = &f.market_prices;
    let market = MarketPrices {
        grid_electricity: val(&m.grid_electricity, "USD/MWh", "finance.market_prices.grid_electricity", None)?,
        co2_transport: val(&m.co2_transport, "USD/t", "finance.market_prices.co2_transport", None)?,
        co2_storage: val(&m.co2_storage, "USD/t", "finance.market_prices.co2_storage", None)?,
        co2_compression: val(&m.co2_compression, "USD/t", "finance.market_prices.co2_compression", None)?,
    };

    let policy = build_policy(&raw.policy)?;
    policy.validate(finance.book_life_years).map_err(|e| DatasetError::InvariantViolation(format!("policy: {e}")))?;

    let mut feedstocks = Vec::new();
    for (i, r) in raw.feedstocks.iter().enumerate() {
        let p = format!("feedstocks[{i}]");
        let fuel = match &r.fuel {
            Some(name) => Some(*fuels.get(name).ok_or_else(|| DatasetError::DanglingReference {
                referrer: format!("feedstock {}", r.id),
                kind: "fuel",
                missing: name.clone(),
            })?),
            None => None,
        };
        let quoted_price = qty(&r.price, &format!("{p}.price"))?;
        let price = match r.kind {
            FeedstockKind::Electricity => val(&r.price, "USD/MWh", &format!("{p}.price"), None)?,
            FeedstockKind::DacCo2 => val(&r.price, "USD/t", &format!("{p}.price"), None)?,
            FeedstockKind::Ethanol if quoted_price.unit.dimension.volume == -1 => {
                let props = fuel.ok_or_else(|| schema_err(&format!("{p}.fuel"), "ethanol priced per gallon needs fuel properties"))?;
                let per_gal = Quantity::new(constants.ethanol_gal_lhv, "MMBtu_LHV/gal")
                    .and_then(|q| q.to("GJ_HHV/gal", Some(&props)))
                    .map_err(|e| schema_err(&format!("{p}.price"), e))?;
                val(&r.price, "USD/gal", &format!("{p}.price"), None)? / per_gal.value
            }
            _ => val(&r.price, "USD/GJ_HHV", &format!("{p}.price"), fuel.as_ref())?,
        };
        let upstream_ci = match r.kind {
            FeedstockKind::Electricity => val(&r.upstream_ci, "kgCO2e/GJ", &format!("{p}.upstream_ci"), None)?,
            FeedstockKind::DacCo2 => val(&r.upstream_ci, "1", &format!("{p}.upstream_ci"), None)?,
            _ => val(&r.upstream_ci, "kgCO2e/GJ_HHV", &format!("{p}.upstream_ci"), fuel.as_ref())?,
        };
        let methane_leak = r.methane_leak.as_ref().map(|q| val(q, "g/MJ", &format!("{p}.methane_leak"), None)).transpose()?;
        let captured_co2 = r
            .captured_co2
            .as_ref()
            .map(|q| val(q, "kgCO2/GJ_HHV", &format!("{p}.captured_co2"), fuel.as_ref()))
            .transpose()?
            .unwrap_or(0.0);
        invariant(upstream_ci >= 0.0, || format!("feedstock {}: negative upstream CI", r.id))?;
        invariant(price >= 0.0, || format!("feedstock {}: negative price", r.id))?;
        invariant(captured_co2 >= 0.0, || format!("feedstock {}: negative captured CO2", r.id))?;
        invariant(!r.biogenic || matches!(r.kind, FeedstockKind::Biomass | FeedstockKind::Ethanol), || {
            format!("feedstock {}: only biomass and ethanol carbon is biogenic", r.id)
        })?;
        invariant(
            !matches!(r.kind, FeedstockKind::NaturalGas | FeedstockKind::Biomass | FeedstockKind::Ethanol) || fuel.is_some(),
            || format!("feedstock {}: combustible feedstock needs fuel properties", r.id),
        )?;
        feedstocks.push(Feedstock {
            id: r.id.clone(),
            name: r.name.clone(),
            kind: r.kind,
            fuel,
            quoted_price,
            price,
            upstream_ci,
            biogenic: r.biogenic,
            methane_leak,
            embedded_credit: r.embedded_credit,
            captured_co2,
        });
    }
    unique(feedstocks.iter().map(|f| f.id.as_str()), "feedstock")?;

    let mut technologies = Vec::new();
    for (i, r) in raw.technologies.iter().enumerate() {
        let p = format!("technologies[{i}]");
        let t = TechnologySpec {
            id: r.id.clone(),
            name: r.name.clone(),
            product: r.product,
            ifi: r.ifi,
            coproduct_elec: r.coproduct_elec,
            capture_rate: r.capture_rate,
            capex: val(&r.capex, "USD/kW", &format!("{p}.capex"), None)?,
            fom: val(&r.fom, "USD/kW-yr", &format!("{p}.fom"), None)?,
            vom: val(&r.vom, "USD/GJ_HHV", &format!("{p}.vom"), None)?,
            capacity_factor: r.capacity_factor.unwrap_or(finance.capacity_factor),
            co2_demand: r
                .co2_demand
                .as_ref()
                .map(|q| val(q, "kgCO2/GJ_HHV", &format!("{p}.co2_demand"), None))
                .transpose()?
                .unwrap_or(0.0),
            derivation: r.derivation.as_ref().map(|d| match d {
                RawDerivation::Integrated { gasifier, synthesis } => {
                    Derivation::Integrated { gasifier: gasifier.clone(), synthesis: synthesis.clone() }
                }
                RawDerivation::EthanolToJet => Derivation::EthanolToJet,
            }),
        };
        invariant(t.ifi >= 1.0, || format!("technology {}: IFI {} below 1", t.id, t.ifi))?;
        invariant((0.0..=1.0).contains(&t.capture_rate), || {
            format!("technology {}: capture rate {} outside [0, 1]", t.id, t.capture_rate)
        })?;
        invariant(t.capacity_factor > 0.0 && t.capacity_factor <= 1.0, || {
            format!("technology {}: capacity factor {} outside (0, 1]", t.id, t.capacity_factor)
        })?;
        invariant(t.capex >= 0.0 && t.fom >= 0.0 && t.vom >= 0.0 && t.co2_demand >= 0.0, || {
            format!("technology {}: negative cost or demand", t.id)
        })?;
        technologies.push(t);
    }
    unique(technologies.iter().map(|t| t.id.as_str()), "technology")?;
    for t in &technologies {
        if let Some(Derivation::Integrated { gasifier, synthesis }) = &t.derivation {
            for dep in [gasifier, synthesis] {
                if !technologies.iter().any(|o| &o.id == dep) {
                    return Err(DatasetError::DanglingReference {
                        referrer: format!("technology {}", t.id),
                        kind: "technology",
                        missing: dep.clone(),
                    });
                }
            }
        }
    }

    let mut pathways = Vec::new();
    for r in &raw.pathways {
        let mut facilities = Vec::new();
        for rf in &r.facilities {
            let referrer = format!("facility {}", rf.id);
            let technology = match &rf.technology {
                Some(id) => Some(technologies.iter().find(|t| &t.id == id).cloned().ok_or_else(|| {
                    DatasetError::DanglingReference { referrer: referrer.clone(), kind: "technology", missing: id.clone() }
                })?),
                None => None,
            };
            let feeds = rf
                .feedstocks
                .iter()
                .map(|id| {
                    feedstocks.iter().find(|f| &f.id == id).cloned().ok_or_else(|| DatasetError::DanglingReference {
                        referrer: referrer.clone(),
                        kind: "feedstock",
                        missing: id.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let claim = match &rf.claim {
                None => ClaimRule::None,
                Some(RawClaim::One(i)) => ClaimRule::One(*i),
                Some(RawClaim::BestOf { best_of }) => ClaimRule::BestOf(best_of.clone()),
                Some(RawClaim::Stacked { stacked }) => ClaimRule::Stacked(stacked.clone()),
            };
            facilities.push(Facility {
                id: rf.id.clone(),
                technology,
                feedstocks: feeds,
                claim,
                q45_variant: rf.q45_variant.unwrap_or(Q45Variant::Sequestration),
            });
        }
        let chain = PathwayChain {
            id: r.id.clone(),
            name: r.name.clone(),
            product: r.product,
            co2_source: r.co2_source,
            rfs_category: r.rfs_category,
            facilities,
        };
        check_chain(&chain)?;
        if let Err(v) = policy::validate_claims(&chain) {
            let msgs: Vec<_> = v.iter().map(|x| x.to_string()).collect();
            return Err(DatasetError::InvariantViolation(format!("pathway {}: {}", chain.id, msgs.join("; "))));
        }
        pathways.push(chain);
    }
    unique(pathways.iter().map(|p| p.id.as_str()), "pathway")?;

    Ok(Dataset {
        constants,
        fuels,
        ci_benchmarks,
        benchmarks,
        finance,
        market,
        policy,
        feedstocks,
        technologies,
        pathways,
    })
}

fn unique<'a>(ids: impl Iterator<Item = &'a str>, kind: &str) -> Result<(), DatasetError> {
    let mut seen = BTreeSet::new();
    for id in ids {
        invariant(seen.insert(id), || format!("duplicate {kind} id `{id}`"))?;
    }
    Ok(())
}

fn check_chain(chain: &PathwayChain) -> Result<(), DatasetError> {
    let id = &chain.id;
    let count = |p: Product| chain.facilities.iter().filter(|f| f.technology.as_ref().is_some_and(|t| t.product == p)).count();
    match chain.product {
        Product::H2 => {
            invariant(count(Product::H2) == 1 && count(Product::Slf) == 0, || {
                format!("pathway {id}: a hydrogen pathway needs exactly one hydrogen facility")
            })?;
            invariant(chain.rfs_category.is_none(), || format!("pathway {id}: hydrogen earns no RINs"))?;
        }
        Product::Slf => {
            invariant(count(Product::Slf) == 1, || format!("pathway {id}: needs exactly one fuel facility"))?;
            let fuel = chain.fuel_facility().and_then(|f| f.technology.as_ref()).map_or(0.0, |t| t.co2_demand);
            if fuel > 0.0 {
                invariant(count(Product::H2) == 1, || format!("pathway {id}: CO2 conversion needs a hydrogen facility"))?;
                let has_source = match chain.co2_source {
                    Co2Source::Dac => chain.dac_facility().is_some(),
                    Co2Source::BiogenicInternal => chain.hydrogen_facility().is_some_and(|f| {
                        f.feedstocks.iter().any(|s| s.biogenic)
                    }),
                    _ => false,
                };
                invariant(has_source, || format!("pathway {id}: no supplier for the CO2 feed"))?;
            }
        }
    }
    for fac in &chain.facilities {
        if fac.technology.is_some() || !fac.feedstocks.is_empty() {
            continue;
        }
        return Err(DatasetError::InvariantViolation(format!("facility {} has neither technology nor feedstock", fac.id)));
    }
    Ok(())
}

fn build_policy(r: &RawPolicy) -> Result<PolicySuite, DatasetError> {
    let ci = "kgCO2e/kg";
    let mut tiers = Vec::new();
    for (i, t) in r.v45_tiers.iter().enumerate() {
        let p = format!("policy.v45_tiers[{i}]");
        tiers.push(V45Tier {
            ci_lower: t.ci_lower.as_ref().map(|q| val(q, ci, &format!("{p}.ci_lower"), None)).transpose()?,
            ci_upper: val(&t.ci_upper, ci, &format!("{p}.ci_upper"), None)?,
            rate: val(&t.rate, "USD/kg", &format!("{p}.rate"), None)?,
        });
    }
    let q = &r.q45_rates;
    Ok(PolicySuite {
        v45_tiers: tiers,
        q45_rates: Q45Rates {
            sequestration: val(&q.sequestration, "USD/t", "policy.q45_rates.sequestration", None)?,
            utilization: val(&q.utilization, "USD/t", "policy.q45_rates.utilization", None)?,
            dac_sequestration: val(&q.dac_sequestration, "USD/t", "policy.q45_rates.dac_sequestration", None)?,
            dac_utilization: val(&q.dac_utilization, "USD/t", "policy.q45_rates.dac_utilization", None)?,
        },
        z45_base_saf: val(&r.z45_base_saf, "USD/gal", "policy.z45_base_saf", None)?,
        z45_base_other: val(&r.z45_base_other, "USD/gal", "policy.z45_base_other", None)?,
        z45_ci_pivot: val(&r.z45_ci_pivot, "kgCO2e/MMBtu_LHV", "policy.z45_ci_pivot", None)?,
        saf_fraction: val(&r.saf_fraction, "1", "policy.saf_fraction", None)?,
        y45_rate: val(&r.y45_rate, "USD/MWh", "policy.y45_rate", None)?,
        methane_fee: val(&r.methane_fee, "USD/t", "policy.methane_fee", None)?,
        durations: Durations {
            q45: r.durations.q45,
            v45: r.durations.v45,
            y45: r.durations.y45,
            methane_fee: r.durations.methane_fee,
        },
        rin_equivalence: val(&r.rin_equivalence, "1", "policy.rin_equivalence", None)?,
        lcfs_benchmark: val(&r.lcfs_benchmark, "kgCO2e/GJ_LHV", "policy.lcfs_benchmark", None)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn doc() -> Value {
        serde_json::from_str(DEFAULT_DATASET_JSON).unwrap()
    }

    #[test]
    fn default_counts() {
        let ds = Dataset::default_dataset();
        assert_eq!(ds.pathways.len(), 15);
        assert_eq!(ds.technologies.len(), 11);
        assert_eq!(ds.pathways_of(Product::H2).count(), 6);
    }

    #[test]
    fn missing_feedstock_is_dangling() {
        let mut v = doc();
        let feeds = v["feedstocks"].as_array_mut().unwrap();
        feeds.retain(|f| f["id"] != "biomass");
        let err = load_dataset(&v.to_string()).unwrap_err();
        match err {
            DatasetError::DanglingReference { referrer, missing, .. } => {
                assert_eq!(referrer, "facility P5.h2");
                assert_eq!(missing, "biomass");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn capture_rate_above_one() {
        let mut v = doc();
        v["technologies"][1]["capture_rate"] = 1.2.into();
        assert!(matches!(load_dataset(&v.to_string()), Err(DatasetError::InvariantViolation(_))));
    }

    #[test]
    fn schema_error_reports_path() {
        let mut v = doc();
        v["technologies"][3]["capex"]["unit"] = "USD/kgCO2".into();
        match load_dataset(&v.to_string()).unwrap_err() {
            DatasetError::Schema { path, .. } => assert_eq!(path, "technologies[3].capex"),
            other => panic!("unexpected {other}"),
        }
        let mut v = doc();
        v.as_object_mut().unwrap().remove("policy");
        assert!(matches!(load_dataset(&v.to_string()), Err(DatasetError::Schema { .. })));
        let mut v = doc();
        v["pathways"][0]["facilities"][0]["technology"] = 7.into();
        match load_dataset(&v.to_string()).unwrap_err() {
            DatasetError::Schema { path, .. } => assert_eq!(path, "pathways[0].facilities[0].technology"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn units_are_normalized() {
        let mut v = doc();
        v["technologies"][0]["capex"] = serde_json::json!({"value": 543000, "unit": "USD/MW"});
        v["finance"]["market_prices"]["grid_electricity"] = serde_json::json!({"value": 0.055, "unit": "USD/kWh"});
        let ds = load_dataset(&v.to_string()).unwrap();
        assert!((ds.technology("smr").unwrap().capex - 543.0).abs() < 1e-9);
        assert!((ds.market.grid_electricity - 55.0).abs() < 1e-9);
    }

    #[test]
    fn stacked_claims_rejected_on_load() {
        let mut v = doc();
        v["pathways"][5]["facilities"][0]["claim"] = serde_json::json!({"stacked": ["45V", "45Q"]});
        assert!(matches!(load_dataset(&v.to_string()), Err(DatasetError::InvariantViolation(_))));
    }

    #[test]
    fn biomass_price_per_tonne() {
        let ds = Dataset::default_dataset();
        let bio = ds.feedstock("biomass").unwrap();
        let per_t = bio.price * bio.fuel.unwrap().hhv_per_tonne;
        assert!((per_t - 121.0).abs() < 0.5, "{per_t}");
    }

    #[test]
    fn ethanol_price_per_gj() {
        let ds = Dataset::default_dataset();
        let eth = ds.feedstock("corn_ethanol").unwrap();
        let expected = 1.83 / (0.077 * 1.055 * 1.108);
        assert!((eth.price - expected).abs() < 1e-9);
    }
}
