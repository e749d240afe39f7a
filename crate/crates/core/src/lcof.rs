//! Levelized cost of fuel with itemized breakdowns, credit selection and
//! levelized subsidy per tonne of CO2e mitigated.
//!
//! Costs are built per GJ_HHV of product and converted to $/kg H2 or $/gal
//! at the end. Positive items are costs, negative items are revenues.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::emissions::{chain_emissions, hydrogen_plant_carbon, CarbonIntensity, CiBasis, EmissionsError};
use crate::finance::{FinanceError, FinancialParams};
use crate::policy::{
    dac_co2_net_cost, lcfs_credit_per_gal, methane_fee_per_gj, net_input_price_45y, rfs_credit_per_gal,
    validate_claims, ClaimViolation, CreditClaim, FuelCreditScenario, Instrument, PolicyError,
};
use crate::techdata::{ClaimRule, Co2Source, Dataset, Facility, Feedstock, FeedstockKind, PathwayChain, Product, TechnologySpec};

#[derive(Debug, Error)]
pub enum LcofError {
    #[error("technology {0} has a zero capacity factor")]
    ZeroCapacityFactor(String),
    #[error("pathway {pathway}: expected a {expected} pathway")]
    WrongProduct { pathway: String, expected: &'static str },
    #[error("pathway {pathway}: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    ClaimViolation { pathway: String, violations: Vec<ClaimViolation> },
    #[error("pathway {pathway} has no RIN category for its fuel")]
    IneligibleRfsCategory { pathway: String },
    #[error("pathway {pathway} does not mitigate: CI delta {ci_delta:.4} kgCO2e/unit")]
    NoMitigation { pathway: String, ci_delta: f64 },
    #[error("pathway {0} receives no credits")]
    NotApplicable(String),
    #[error(transparent)]
    Emissions(#[from] EmissionsError),
    #[error(transparent)]
    Finance(#[from] FinanceError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostItem {
    Capital,
    Fom,
    Vom,
    Feedstock,
    Co2TransportStorage,
    CoproductElectricity,
    DacCo2Net,
    Credit45V,
    Credit45Q,
    Credit45Z,
    Rfs,
    Lcfs,
}

impl CostItem {
    pub const ALL: [CostItem; 12] = [
        CostItem::Capital,
        CostItem::Fom,
        CostItem::Vom,
        CostItem::Feedstock,
        CostItem::Co2TransportStorage,
        CostItem::CoproductElectricity,
        CostItem::DacCo2Net,
        CostItem::Credit45V,
        CostItem::Credit45Q,
        CostItem::Credit45Z,
        CostItem::Rfs,
        CostItem::Lcfs,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CostItem::Capital => "capital",
            CostItem::Fom => "fom",
            CostItem::Vom => "vom",
            CostItem::Feedstock => "feedstock",
            CostItem::Co2TransportStorage => "co2_transport_storage",
            CostItem::CoproductElectricity => "coproduct_electricity",
            CostItem::DacCo2Net => "dac_co2_net",
            CostItem::Credit45V => "credit_45v",
            CostItem::Credit45Q => "credit_45q",
            CostItem::Credit45Z => "credit_45z",
            CostItem::Rfs => "rfs",
            CostItem::Lcfs => "lcfs",
        }
    }

    pub fn is_credit(self) -> bool {
        matches!(self, CostItem::Credit45V | CostItem::Credit45Q | CostItem::Credit45Z | CostItem::Rfs | CostItem::Lcfs)
    }

    fn index(self) -> usize {
        CostItem::ALL.iter().position(|c| *c == self).expect("listed")
    }
}

impl fmt::Display for CostItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Running totals per item.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Items([f64; 12]);

impl Items {
    fn add(&mut self, item: CostItem, v: f64) {
        self.0[item.index()] += v;
    }

    fn scaled(&self, k: f64) -> Items {
        Items(self.0.map(|v| v * k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineItem {
    pub item: CostItem,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcofBreakdown {
    pub pathway: String,
    pub product: Product,
    /// "$/kg" or "$/gal".
    pub unit: &'static str,
    /// Every item in [`CostItem::ALL`] order.
    pub items: Vec<LineItem>,
    pub net: f64,
    /// kgCO2e/kg H2 or kgCO2e/MMBtu_LHV.
    pub ci: f64,
    /// Claimed credits, $/unit product.
    pub claims: Vec<CreditClaim>,
    pub warnings: Vec<String>,
}

impl LcofBreakdown {
    fn from_items(chain: &PathwayChain, items: Items, ci: f64, claims: Vec<CreditClaim>, warnings: Vec<String>) -> Self {
        let items: Vec<LineItem> = CostItem::ALL.iter().map(|&item| LineItem { item, value: items.0[item.index()] }).collect();
        let net = items.iter().map(|i| i.value).sum();
        LcofBreakdown {
            pathway: chain.id.clone(),
            product: chain.product,
            unit: match chain.product {
                Product::H2 => "$/kg",
                Product::Slf => "$/gal",
            },
            items,
            net,
            ci,
            claims,
            warnings,
        }
    }

    pub fn get(&self, item: CostItem) -> f64 {
        self.items[item.index()].value
    }

    /// Cost before any credit.
    pub fn gross(&self) -> f64 {
        self.items.iter().filter(|i| !i.item.is_credit()).map(|i| i.value).sum()
    }

    /// Sum of credit items, a non-positive number.
    pub fn credits(&self) -> f64 {
        self.items.iter().filter(|i| i.item.is_credit()).map(|i| i.value).sum()
    }
}

/// Capital, fixed and variable cost shares of a technology, $/GJ output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCost {
    pub capital: f64,
    pub fom: f64,
    pub vom: f64,
}

impl UnitCost {
    pub fn total(&self) -> f64 {
        self.capital + self.fom + self.vom
    }
}

pub fn unit_cost(tech: &TechnologySpec, fin: &FinancialParams) -> Result<UnitCost, LcofError> {
    if tech.capacity_factor <= 0.0 {
        return Err(LcofError::ZeroCapacityFactor(tech.id.clone()));
    }
    let gj_per_kw_year = 8760.0 * tech.capacity_factor * 0.0036;
    Ok(UnitCost { capital: tech.capex * fin.crf / gj_per_kw_year, fom: tech.fom / gj_per_kw_year, vom: tech.vom })
}

/// $/GJ output: (capex × crf + fom) / (8760 × cf × 0.0036) + vom.
pub fn annualized_unit_cost(tech: &TechnologySpec, fin: &FinancialParams) -> Result<f64, LcofError> {
    Ok(unit_cost(tech, fin)?.total())
}

/// Feedstock price in $/GJ, net of any credit embedded in it.
fn feedstock_price(ds: &Dataset, fs: &Feedstock, warnings: &mut Vec<String>) -> Result<f64, LcofError> {
    match (fs.kind, fs.embedded_credit) {
        (FeedstockKind::Electricity, Some(Instrument::Credit45Y)) => {
            let df = ds.finance.derating(ds.policy.durations.y45)?;
            let net = net_input_price_45y(fs.price, ds.policy.y45_rate, df);
            if net.floored {
                warnings.push(format!("{}: 45Y exceeds the electricity price, floored at zero", fs.id));
            }
            Ok(ds.per_mwh_to_per_gj(net.value))
        }
        (FeedstockKind::Electricity, _) => Ok(ds.per_mwh_to_per_gj(fs.price)),
        _ => Ok(fs.price),
    }
}

/// One credit the facility could take, in $/GJ of its output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreditOption {
    pub instrument: Instrument,
    pub value: f64,
}

/// Credits actually claimed under `rule`, following the per-facility max.
pub fn select_credits(rule: &ClaimRule, options: &[CreditOption]) -> Vec<CreditOption> {
    let value = |i: Instrument| options.iter().find(|o| o.instrument == i).map_or(0.0, |o| o.value);
    let pick = |list: &[Instrument]| list.iter().map(|&i| CreditOption { instrument: i, value: value(i) }).collect();
    match rule {
        ClaimRule::None => vec![],
        ClaimRule::One(i) => pick(&[*i]),
        ClaimRule::Stacked(list) => pick(list),
        ClaimRule::BestOf(list) => {
            let mut best: Option<CreditOption> = None;
            for &i in list {
                let v = value(i);
                if best.is_none_or(|b| v > b.value) {
                    best = Some(CreditOption { instrument: i, value: v });
                }
            }
            best.into_iter().collect()
        }
    }
}

/// A hydrogen plant costed per GJ of hydrogen.
#[derive(Debug, Clone, PartialEq)]
pub struct HydrogenFacilityCost {
    pub unit: UnitCost,
    pub feedstock: f64,
    pub coproduct_electricity: f64,
    pub co2_transport_storage: f64,
    /// kgCO2e/kg H2 at the plant.
    pub ci: f64,
    pub options: Vec<CreditOption>,
    pub claimed: Vec<CreditOption>,
    pub warnings: Vec<String>,
}

impl HydrogenFacilityCost {
    pub fn gross(&self) -> f64 {
        self.unit.total() + self.feedstock + self.coproduct_electricity + self.co2_transport_storage
    }

    pub fn credit(&self, instrument: Instrument) -> f64 {
        self.claimed.iter().filter(|c| c.instrument == instrument).map(|c| c.value).sum()
    }

    pub fn net(&self) -> f64 {
        self.gross() - self.claimed.iter().map(|c| c.value).sum::<f64>()
    }
}

/// Costs a hydrogen plant that hands `divert` kgCO2/GJ_H2 to a fuel plant.
pub fn hydrogen_facility_cost(ds: &Dataset, fac: &Facility, divert: f64) -> Result<HydrogenFacilityCost, LcofError> {
    let tech = fac.technology.as_ref().filter(|t| t.product == Product::H2).ok_or_else(|| LcofError::WrongProduct {
        pathway: fac.id.clone(),
        expected: "hydrogen",
    })?;
    let fin = &ds.finance;
    let mut warnings = Vec::new();
    let unit = unit_cost(tech, fin)?;
    let mut feedstock = 0.0;
    for fs in &fac.feedstocks {
        feedstock += tech.ifi * feedstock_price(ds, fs, &mut warnings)?;
    }
    let coproduct_electricity = tech.coproduct_elec * ds.per_mwh_to_per_gj(ds.market.grid_electricity);
    let carbon = hydrogen_plant_carbon(fac, tech, divert);
    let co2_transport_storage = carbon.captured / 1000.0 * ds.market.co2_transport_storage();
    let h2_kg_per_gj = 1.0 / ds.constants.h2_gj_per_kg();
    let ci = carbon.ledger.intensity() / h2_kg_per_gj;

    let policy = &ds.policy;
    let mut options = Vec::new();
    if carbon.stored() > 0.0 {
        let df = fin.derating(policy.durations.q45)?;
        options.push(CreditOption {
            instrument: Instrument::Credit45Q,
            value: policy.credit_45q(fac.q45_variant, carbon.stored() / 1000.0) * df,
        });
    }
    let df = fin.derating(policy.durations.v45)?;
    options.push(CreditOption { instrument: Instrument::Credit45V, value: policy.credit_45v(ci) * df * h2_kg_per_gj });
    let claimed = select_credits(&fac.claim, &options);
    Ok(HydrogenFacilityCost { unit, feedstock, coproduct_electricity, co2_transport_storage, ci, options, claimed, warnings })
}

fn check_claims(chain: &PathwayChain) -> Result<(), LcofError> {
    validate_claims(chain).map_err(|violations| LcofError::ClaimViolation { pathway: chain.id.clone(), violations })
}

fn push_claims(claims: &mut Vec<CreditClaim>, facility: &str, claimed: &[CreditOption], per_unit: f64) {
    for c in claimed {
        claims.push(CreditClaim { instrument: c.instrument, facility_id: facility.to_string(), derated_value: c.value * per_unit });
    }
}

/// Hydrogen LCOF in $/kg.
pub fn lcof_h2(ds: &Dataset, chain: &PathwayChain) -> Result<LcofBreakdown, LcofError> {
    check_claims(chain)?;
    h2_unchecked(ds, chain)
}

/// Hydrogen LCOF with the plant stacking 45V and 45Q, which current rules forbid.
pub fn lcof_h2_dual_credit(ds: &Dataset, chain: &PathwayChain) -> Result<LcofBreakdown, LcofError> {
    let mut b = h2_unchecked(ds, &chain.with_dual_h2_credit())?;
    b.warnings.push("what-if: 45V and 45Q stacked".to_string());
    Ok(b)
}

fn h2_unchecked(ds: &Dataset, chain: &PathwayChain) -> Result<LcofBreakdown, LcofError> {
    if chain.product != Product::H2 {
        return Err(LcofError::WrongProduct { pathway: chain.id.clone(), expected: "hydrogen" });
    }
    let fac = chain.hydrogen_facility().ok_or(EmissionsError::MissingFacility { pathway: chain.id.clone(), role: "hydrogen" })?;
    let h = hydrogen_facility_cost(ds, fac, 0.0)?;
    let mut items = Items::default();
    items.add(CostItem::Capital, h.unit.capital);
    items.add(CostItem::Fom, h.unit.fom);
    items.add(CostItem::Vom, h.unit.vom);
    items.add(CostItem::Feedstock, h.feedstock);
    items.add(CostItem::CoproductElectricity, h.coproduct_electricity);
    items.add(CostItem::Co2TransportStorage, h.co2_transport_storage);
    items.add(CostItem::Credit45V, -h.credit(Instrument::Credit45V));
    items.add(CostItem::Credit45Q, -h.credit(Instrument::Credit45Q));
    let per_kg = ds.constants.h2_gj_per_kg();
    let mut claims = Vec::new();
    push_claims(&mut claims, &fac.id, &h.claimed, per_kg);
    Ok(LcofBreakdown::from_items(chain, items.scaled(per_kg), h.ci, claims, h.warnings))
}

/// Per-GJ cost build-up of a liquid fuel chain before fuel credits.
struct SlfBuild {
    items: Items,
    claims: Vec<CreditClaim>,
    warnings: Vec<String>,
    ci_hhv: f64,
}

fn slf_build(ds: &Dataset, chain: &PathwayChain) -> Result<SlfBuild, LcofError> {
    let fin = &ds.finance;
    let policy = &ds.policy;
    let fuel = chain.fuel_facility().ok_or(EmissionsError::MissingFacility { pathway: chain.id.clone(), role: "fuel" })?;
    let tech = fuel.technology.as_ref().expect("fuel facility has a technology");
    let emissions = chain_emissions(ds, chain)?;
    let mut items = Items::default();
    let mut claims = Vec::new();
    let mut warnings = Vec::new();
    let u = unit_cost(tech, fin)?;
    items.add(CostItem::Capital, u.capital);
    items.add(CostItem::Fom, u.fom);
    items.add(CostItem::Vom, u.vom);
    items.add(CostItem::CoproductElectricity, tech.coproduct_elec * ds.per_mwh_to_per_gj(ds.market.grid_electricity));

    if tech.co2_demand > 0.0 {
        let h2_fac = chain.hydrogen_facility().ok_or(EmissionsError::MissingFacility { pathway: chain.id.clone(), role: "hydrogen" })?;
        let divert = if chain.co2_source == Co2Source::BiogenicInternal { tech.co2_demand / tech.ifi } else { 0.0 };
        let h = hydrogen_facility_cost(ds, h2_fac, divert)?;
        warnings.extend(h.warnings.iter().cloned());
        // Hydrogen enters at its gross cost; its credits stay visible as items.
        items.add(CostItem::Feedstock, tech.ifi * h.gross());
        items.add(CostItem::Credit45V, -tech.ifi * h.credit(Instrument::Credit45V));
        items.add(CostItem::Credit45Q, -tech.ifi * h.credit(Instrument::Credit45Q));
        push_claims(&mut claims, &h2_fac.id, &h.claimed, tech.ifi);
        if chain.co2_source == Co2Source::Dac {
            let dac = chain.dac_facility().ok_or(EmissionsError::MissingFacility { pathway: chain.id.clone(), role: "DAC" })?;
            let gross = dac.feedstocks.iter().find(|f| f.kind == FeedstockKind::DacCo2).map_or(0.0, |f| f.price);
            let (rate, df) = if dac.claim.mentions(Instrument::Credit45Q) {
                (policy.q45_rates.rate(dac.q45_variant), fin.derating(policy.durations.q45)?)
            } else {
                (0.0, 0.0)
            };
            let tonnes = tech.co2_demand / 1000.0;
            items.add(CostItem::DacCo2Net, tonnes * dac_co2_net_cost(gross, rate, df));
            if rate > 0.0 {
                claims.push(CreditClaim { instrument: Instrument::Credit45Q, facility_id: dac.id.clone(), derated_value: tonnes * rate * df });
            }
        }
    } else {
        for fs in &fuel.feedstocks {
            items.add(CostItem::Feedstock, tech.ifi * feedstock_price(ds, fs, &mut warnings)?);
        }
        let captured_at_plant = (emissions.ledger.stored() - emissions.ethanol_plant_stored) / 1000.0;
        items.add(CostItem::Co2TransportStorage, captured_at_plant * ds.market.co2_transport_storage());
        if let Some(eth) = chain.ethanol_plant() {
            let tonnes = emissions.ethanol_plant_stored / 1000.0;
            if tonnes > 0.0 {
                let handling = ds.market.co2_compression + ds.market.co2_transport_storage();
                items.add(CostItem::Co2TransportStorage, tonnes * handling);
                if eth.claim.mentions(Instrument::Credit45Q) {
                    let v = policy.credit_45q(eth.q45_variant, tonnes) * fin.derating(policy.durations.q45)?;
                    items.add(CostItem::Credit45Q, -v);
                    claims.push(CreditClaim { instrument: Instrument::Credit45Q, facility_id: eth.id.clone(), derated_value: v });
                }
            }
        }
    }
    Ok(SlfBuild { items, claims, warnings, ci_hhv: emissions.ci_per_gj_hhv })
}

/// Fuel intensity on the bases the fuel credits use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuelCi {
    pub per_gj_hhv: f64,
    pub per_gj_lhv: f64,
    pub per_mmbtu_lhv: f64,
    pub per_gal: f64,
}

impl FuelCi {
    fn new(ds: &Dataset, per_gj_hhv: f64) -> FuelCi {
        let c = CarbonIntensity::new(per_gj_hhv, CiBasis::PerGjHhv);
        let p = ds.slf_properties();
        let k = &ds.constants;
        FuelCi {
            per_gj_hhv,
            per_gj_lhv: c.to_basis(CiBasis::PerGjLhv, &p, k).value,
            per_mmbtu_lhv: c.to_basis(CiBasis::PerMmbtuLhv, &p, k).value,
            per_gal: c.to_basis(CiBasis::PerGalSlf, &p, k).value,
        }
    }
}

/// Liquid fuel LCOF in $/gal under a fuel-credit scenario.
pub fn lcof_slf(ds: &Dataset, chain: &PathwayChain, scenario: &FuelCreditScenario) -> Result<LcofBreakdown, LcofError> {
    if chain.product != Product::Slf {
        return Err(LcofError::WrongProduct { pathway: chain.id.clone(), expected: "liquid fuel" });
    }
    check_claims(chain)?;
    scenario.validate(ds.finance.book_life_years)?;
    let b = slf_build(ds, chain)?;
    let gal = ds.slf_gj_hhv_per_gal();
    let mut items = b.items.scaled(gal);
    let mut claims: Vec<CreditClaim> = b
        .claims
        .into_iter()
        .map(|c| CreditClaim { derated_value: c.derated_value * gal, ..c })
        .collect();
    let ci = FuelCi::new(ds, b.ci_hhv);
    let fuel = chain.fuel_facility().expect("checked in build");
    let policy = &ds.policy;

    if fuel.claim.mentions(Instrument::Credit45Z) && scenario.z45_duration_years > 0 {
        let df = ds.finance.derating(scenario.z45_duration_years)?;
        let v = policy.credit_45z_per_gal(ci.per_mmbtu_lhv, policy.saf_fraction) * df;
        items.add(CostItem::Credit45Z, -v);
        if v > 0.0 {
            claims.push(CreditClaim { instrument: Instrument::Credit45Z, facility_id: fuel.id.clone(), derated_value: v });
        }
    }
    if let Some(cat) = chain.rfs_category {
        let v = rfs_credit_per_gal(scenario.rin_prices.price(cat), policy.rin_equivalence);
        items.add(CostItem::Rfs, -v);
        if v > 0.0 {
            claims.push(CreditClaim { instrument: Instrument::Rfs, facility_id: fuel.id.clone(), derated_value: v });
        }
    }
    let lcfs = lcfs_credit_per_gal(ci.per_gj_lhv, scenario.lcfs_benchmark, scenario.lcfs_price, ds.constants.slf_gal_lhv).max(0.0);
    items.add(CostItem::Lcfs, -lcfs);
    if lcfs > 0.0 {
        claims.push(CreditClaim { instrument: Instrument::Lcfs, facility_id: fuel.id.clone(), derated_value: lcfs });
    }
    Ok(LcofBreakdown::from_items(chain, items, ci.per_mmbtu_lhv, claims, b.warnings))
}

/// Liquid fuel cost with no credit of any kind, $/gal.
pub fn unsubsidized_slf(ds: &Dataset, chain: &PathwayChain) -> Result<f64, LcofError> {
    let b = lcof_slf(ds, chain, &FuelCreditScenario::baseline())?;
    Ok(b.gross())
}

/// Levelized subsidy per tonne of CO2e avoided against the fossil benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MitigationResult {
    /// $/t CO2e.
    pub lscm: f64,
    /// $/unit product.
    pub total_subsidy: f64,
    /// kgCO2e/unit product avoided.
    pub ci_delta: f64,
}

/// Which credits enter the subsidy total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LscmOptions {
    /// 45Z term for liquid fuels, years.
    pub z45_years: u32,
    pub dual_h2_credit: bool,
}

impl Default for LscmOptions {
    fn default() -> Self {
        LscmOptions { z45_years: 15, dual_h2_credit: false }
    }
}

/// Subsidy components per GJ of hydrogen: (credits, 45Y, methane fee).
fn h2_subsidy_per_gj(ds: &Dataset, fac: &Facility, h: &HydrogenFacilityCost) -> Result<(f64, f64, f64), LcofError> {
    let tech = fac.technology.as_ref().expect("hydrogen facility");
    let policy = &ds.policy;
    let credits: f64 = h.claimed.iter().map(|c| c.value).sum();
    let mut y45 = 0.0;
    let mut fee = 0.0;
    for fs in &fac.feedstocks {
        if fs.embedded_credit == Some(Instrument::Credit45Y) {
            let df = ds.finance.derating(policy.durations.y45)?;
            y45 += tech.ifi * ds.per_mwh_to_per_gj(policy.y45_rate * df);
        }
        if let Some(leak) = fs.methane_leak {
            let df = ds.finance.derating(policy.durations.methane_fee)?;
            fee += tech.ifi * methane_fee_per_gj(leak, policy.methane_fee) * df;
        }
    }
    Ok((credits, y45, fee))
}

/// (−methane fee + 45V + 45Q + 45Z + 45Y) / (CI_fossil − CI).
pub fn lscm(ds: &Dataset, chain: &PathwayChain, opts: &LscmOptions) -> Result<MitigationResult, LcofError> {
    let bench = ds.ci_benchmarks;
    // The dual-credit what-if only concerns stand-alone hydrogen plants.
    let chain = if opts.dual_h2_credit && chain.product == Product::H2 { chain.with_dual_h2_credit() } else { chain.clone() };
    let (subsidy, ci_delta, any_credit) = match chain.product {
        Product::H2 => {
            let b = h2_unchecked(ds, &chain)?;
            let fac = chain.hydrogen_facility().expect("costed above");
            let h = hydrogen_facility_cost(ds, fac, 0.0)?;
            let (credits, y45, fee) = h2_subsidy_per_gj(ds, fac, &h)?;
            let per_kg = ds.constants.h2_gj_per_kg();
            ((credits + y45 - fee) * per_kg, bench.h2_fossil - b.ci, !b.claims.is_empty() || y45 > 0.0)
        }
        Product::Slf => {
            let scenario = FuelCreditScenario::baseline().with_z45(opts.z45_years);
            let b = lcof_slf(ds, &chain, &scenario)?;
            let gal = ds.slf_gj_hhv_per_gal();
            let mut total: f64 = b
                .claims
                .iter()
                .filter(|c| !matches!(c.instrument, Instrument::Rfs | Instrument::Lcfs))
                .map(|c| c.derated_value)
                .sum();
            let mut y45 = 0.0;
            if let Some(fac) = chain.hydrogen_facility() {
                let tech = chain.fuel_facility().and_then(|f| f.technology.as_ref()).expect("fuel facility");
                let divert = if chain.co2_source == Co2Source::BiogenicInternal { tech.co2_demand / tech.ifi } else { 0.0 };
                let h = hydrogen_facility_cost(ds, fac, divert)?;
                let (_, y, fee) = h2_subsidy_per_gj(ds, fac, &h)?;
                y45 = y * tech.ifi * gal;
                total += y45 - fee * tech.ifi * gal;
            }
            let ci_per_gal = b.ci * ds.constants.slf_gal_mmbtu_lhv;
            (total, bench.slf_fossil_per_gal - ci_per_gal, !b.claims.is_empty() || y45 > 0.0)
        }
    };
    if ci_delta <= 0.0 {
        return Err(LcofError::NoMitigation { pathway: chain.id.clone(), ci_delta });
    }
    if !any_credit {
        return Err(LcofError::NotApplicable(chain.id.clone()));
    }
    Ok(MitigationResult { lscm: subsidy / ci_delta * 1000.0, total_subsidy: subsidy, ci_delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds() -> Dataset {
        Dataset::default_dataset()
    }

    fn h2(id: &str) -> LcofBreakdown {
        let ds = ds();
        lcof_h2(&ds, ds.pathway(id).unwrap()).unwrap()
    }

    fn slf(id: &str) -> LcofBreakdown {
        let ds = ds();
        lcof_slf(&ds, ds.pathway(id).unwrap(), &FuelCreditScenario::baseline()).unwrap()
    }

    #[test]
    fn smr_unit_cost() {
        let ds = ds();
        let smr = ds.technology("smr").unwrap();
        let fin = ds.finance.with_crf(0.1315);
        assert!((annualized_unit_cost(smr, &fin).unwrap() - 3.73).abs() < 0.01);
        let el = ds.technology("electrolysis").unwrap();
        assert!((unit_cost(el, &fin).unwrap().capital - 10.7).abs() < 0.05);
        let mut zero = smr.clone();
        zero.capex = 0.0;
        zero.fom = 0.0;
        assert_eq!(annualized_unit_cost(&zero, &fin).unwrap(), zero.vom);
        zero.capacity_factor = 0.0;
        assert!(matches!(annualized_unit_cost(&zero, &fin), Err(LcofError::ZeroCapacityFactor(_))));
    }

    #[test]
    fn hydrogen_nets() {
        for (id, want) in [("P1", 1.2796), ("P2", 1.2314), ("P3", 1.1558), ("P4", 0.3068), ("P5", 3.0689), ("P6", 2.2009)] {
            let b = h2(id);
            assert!((b.net - want).abs() < 5e-4, "{id} {}", b.net);
            let sum: f64 = b.items.iter().map(|i| i.value).sum();
            assert!((b.net - sum).abs() < 1e-9);
        }
    }

    #[test]
    fn credit_choice() {
        assert_eq!(h2("P2").claims[0].instrument, Instrument::Credit45Q);
        assert_eq!(h2("P3").claims[0].instrument, Instrument::Credit45Q);
        assert_eq!(h2("P6").claims[0].instrument, Instrument::Credit45V);
        assert!(h2("P1").claims.is_empty());
    }

    #[test]
    fn dual_credit_what_if() {
        let ds = ds();
        let p6 = ds.pathway("P6").unwrap();
        assert!(matches!(lcof_h2(&ds, &p6.with_dual_h2_credit()), Err(LcofError::ClaimViolation { .. })));
        let b = lcof_h2_dual_credit(&ds, p6).unwrap();
        assert!((b.net - 0.729).abs() < 1e-3);
        assert_eq!(b.claims.len(), 2);
    }

    #[test]
    fn fuel_baselines() {
        for (id, want) in [("P7", 4.252), ("P8", 4.143), ("P9", 2.916), ("P10", 5.362), ("P12", 5.449), ("P13", 5.914), ("P14", 3.707), ("P15", 3.556)] {
            let b = slf(id);
            assert!((b.net - want).abs() < 5e-3, "{id} {}", b.net);
        }
    }

    #[test]
    fn sign_conventions() {
        let ds = ds();
        for p in &ds.pathways {
            let b = match p.product {
                Product::H2 => lcof_h2(&ds, p).unwrap(),
                Product::Slf => lcof_slf(&ds, p, &FuelCreditScenario::baseline().with_z45(15).with_lcfs(200.0)).unwrap(),
            };
            for i in &b.items {
                if i.item.is_credit() {
                    assert!(i.value <= 0.0, "{} {}", p.id, i.item);
                } else if i.item != CostItem::CoproductElectricity {
                    assert!(i.value >= 0.0, "{} {}", p.id, i.item);
                }
            }
            assert!((b.gross() + b.credits() - b.net).abs() < 1e-9);
        }
    }

    #[test]
    fn full_life_45z() {
        let ds = ds();
        let p9 = ds.pathway("P9").unwrap();
        let base = slf("P9").net;
        let with = lcof_slf(&ds, p9, &FuelCreditScenario::baseline().with_z45(15)).unwrap().net;
        assert!((base - with - 1.615).abs() < 1e-9);
    }

    #[test]
    fn mitigation() {
        let ds = ds();
        let r = |id: &str, dual: bool| lscm(&ds, ds.pathway(id).unwrap(), &LscmOptions { dual_h2_credit: dual, ..Default::default() });
        assert!(matches!(r("P1", false), Err(LcofError::NoMitigation { .. })));
        assert!(matches!(r("P14", false), Err(LcofError::NotApplicable(_))));
        assert!((r("P4", false).unwrap().lscm - 316.8).abs() < 1.0);
        let dual = r("P6", true).unwrap().lscm;
        assert!((dual - 134.0).abs() < 2.0, "{dual}");
        assert!(r("P9", false).unwrap().lscm > 430.0);
        for id in ["P2", "P3", "P5", "P6"] {
            assert!(r(id, false).unwrap().lscm < 140.0, "{id}");
        }
    }

    #[test]
    fn wrong_product() {
        let ds = ds();
        assert!(matches!(lcof_h2(&ds, ds.pathway("P9").unwrap()), Err(LcofError::WrongProduct { .. })));
        assert!(matches!(
            lcof_slf(&ds, ds.pathway("P1").unwrap(), &FuelCreditScenario::baseline()),
            Err(LcofError::WrongProduct { .. })
        ));
    }
}
