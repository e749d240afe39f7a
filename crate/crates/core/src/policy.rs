//! Policy instruments: production tax credits, the methane fee, RINs and LCFS.
//!
//! Rates here are un-derated. Derating to the book life happens in the
//! cost engine through [`crate::finance::FinancialParams::derating`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::techdata::{FeedstockKind, PathwayChain, Product};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Instrument {
    #[serde(rename = "45V")]
    Credit45V,
    #[serde(rename = "45Q")]
    Credit45Q,
    #[serde(rename = "45Z")]
    Credit45Z,
    #[serde(rename = "45Y")]
    Credit45Y,
    #[serde(rename = "methane_fee")]
    MethaneFee,
    #[serde(rename = "RFS")]
    Rfs,
    #[serde(rename = "LCFS")]
    Lcfs,
}

impl Instrument {
    /// At most one of these per facility.
    pub fn is_exclusive(self) -> bool {
        matches!(self, Instrument::Credit45V | Instrument::Credit45Q | Instrument::Credit45Z)
    }

    pub fn label(self) -> &'static str {
        match self {
            Instrument::Credit45V => "45V",
            Instrument::Credit45Q => "45Q",
            Instrument::Credit45Z => "45Z",
            Instrument::Credit45Y => "45Y",
            Instrument::MethaneFee => "methane_fee",
            Instrument::Rfs => "RFS",
            Instrument::Lcfs => "LCFS",
        }
    }
}

impl fmt::Display for Instrument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Q45Variant {
    Sequestration,
    Utilization,
    DacSequestration,
    DacUtilization,
}

impl std::str::FromStr for Q45Variant {
    type Err = PolicyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequestration" => Ok(Q45Variant::Sequestration),
            "utilization" => Ok(Q45Variant::Utilization),
            "dac_sequestration" => Ok(Q45Variant::DacSequestration),
            "dac_utilization" => Ok(Q45Variant::DacUtilization),
            other => Err(PolicyError::UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RinCategory {
    D3,
    D5,
    D6,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolicyError {
    #[error("unknown 45Q variant `{0}`")]
    UnknownVariant(String),
    #[error("45V tiers are malformed: {0}")]
    MalformedTiers(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

/// One 45V tier: CI in `[lower, upper)` earns `rate` $/kg. `lower = None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct V45Tier {
    pub ci_lower: Option<f64>,
    pub ci_upper: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Q45Rates {
    pub sequestration: f64,
    pub utilization: f64,
    pub dac_sequestration: f64,
    pub dac_utilization: f64,
}

impl Q45Rates {
    pub fn rate(&self, variant: Q45Variant) -> f64 {
        match variant {
            Q45Variant::Sequestration => self.sequestration,
            Q45Variant::Utilization => self.utilization,
            Q45Variant::DacSequestration => self.dac_sequestration,
            Q45Variant::DacUtilization => self.dac_utilization,
        }
    }
}

/// Credit durations in years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Durations {
    pub q45: u32,
    pub v45: u32,
    pub y45: u32,
    pub methane_fee: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySuite {
    pub v45_tiers: Vec<V45Tier>,
    pub q45_rates: Q45Rates,
    pub z45_base_saf: f64,
    pub z45_base_other: f64,
    /// kgCO2e/MMBtu_LHV at which the 45Z emissions factor reaches zero.
    pub z45_ci_pivot: f64,
    /// SAF share of the fuel slate, the rest is other transport fuel.
    pub saf_fraction: f64,
    /// $/MWh.
    pub y45_rate: f64,
    /// $/t CH4.
    pub methane_fee: f64,
    pub durations: Durations,
    pub rin_equivalence: f64,
    /// kgCO2e/GJ_LHV.
    pub lcfs_benchmark: f64,
}

impl Default for PolicySuite {
    fn default() -> Self {
        PolicySuite {
            v45_tiers: vec![
                V45Tier { ci_lower: None, ci_upper: 0.45, rate: 3.0 },
                V45Tier { ci_lower: Some(0.45), ci_upper: 1.5, rate: 1.002 },
                V45Tier { ci_lower: Some(1.5), ci_upper: 2.5, rate: 0.75 },
                V45Tier { ci_lower: Some(2.5), ci_upper: 4.0, rate: 0.6 },
            ],
            q45_rates: Q45Rates { sequestration: 85.0, utilization: 60.0, dac_sequestration: 180.0, dac_utilization: 130.0 },
            z45_base_saf: 1.75,
            z45_base_other: 1.0,
            z45_ci_pivot: 50.0,
            saf_fraction: 0.82,
            y45_rate: 26.0,
            methane_fee: 1500.0,
            durations: Durations { q45: 12, v45: 10, y45: 10, methane_fee: 15 },
            rin_equivalence: 1.64,
            lcfs_benchmark: 80.36,
        }
    }
}

impl PolicySuite {
    pub fn validate(&self, book_life: u32) -> Result<(), PolicyError> {
        let tiers = &self.v45_tiers;
        let first = tiers.first().ok_or_else(|| PolicyError::MalformedTiers("no tiers".into()))?;
        if first.ci_lower.is_some() {
            return Err(PolicyError::MalformedTiers("lowest tier must be unbounded below".into()));
        }
        for pair in tiers.windows(2) {
            if pair[1].ci_lower != Some(pair[0].ci_upper) {
                return Err(PolicyError::MalformedTiers(format!(
                    "gap or overlap at {} kgCO2e/kg",
                    pair[0].ci_upper
                )));
            }
        }
        for t in tiers {
            if t.ci_lower.is_some_and(|lo| lo >= t.ci_upper) {
                return Err(PolicyError::MalformedTiers(format!("empty tier below {}", t.ci_upper)));
            }
        }
        let rates = [
            self.q45_rates.sequestration,
            self.q45_rates.utilization,
            self.q45_rates.dac_sequestration,
            self.q45_rates.dac_utilization,
            self.z45_base_saf,
            self.z45_base_other,
            self.y45_rate,
            self.methane_fee,
            self.rin_equivalence,
        ];
        if rates.iter().chain(tiers.iter().map(|t| &t.rate)).any(|r| !(*r >= 0.0)) {
            return Err(PolicyError::MalformedTiers("negative rate".into()));
        }
        let d = self.durations;
        if [d.q45, d.v45, d.y45, d.methane_fee].iter().any(|y| *y > book_life) {
            return Err(PolicyError::InvalidScenario("credit duration exceeds book life".into()));
        }
        if !(0.0..=1.0).contains(&self.saf_fraction) {
            return Err(PolicyError::InvalidScenario("saf fraction outside [0, 1]".into()));
        }
        Ok(())
    }

    /// Ceiling of the tier table; CIs at or above it earn nothing.
    pub fn v45_ceiling(&self) -> f64 {
        self.v45_tiers.last().map_or(f64::NEG_INFINITY, |t| t.ci_upper)
    }

    /// $/kg H2 for a CI in kgCO2e/kg H2.
    pub fn credit_45v(&self, ci: f64) -> f64 {
        self.v45_tiers
            .iter()
            .find(|t| t.ci_lower.is_none_or(|lo| ci >= lo) && ci < t.ci_upper)
            .map_or(0.0, |t| t.rate)
    }

    pub fn z45_blend_rate(&self, saf_fraction: f64) -> f64 {
        self.z45_base_saf * saf_fraction + self.z45_base_other * (1.0 - saf_fraction)
    }

    /// $/gal for a CI in kgCO2e/MMBtu_LHV.
    pub fn credit_45z_per_gal(&self, ci: f64, saf_fraction: f64) -> f64 {
        let factor = ((self.z45_ci_pivot - ci) / self.z45_ci_pivot).max(0.0);
        factor * self.z45_blend_rate(saf_fraction)
    }

    /// $ for `mass` tonnes of CO2.
    pub fn credit_45q(&self, variant: Q45Variant, mass: f64) -> f64 {
        mass * self.q45_rates.rate(variant)
    }
}

/// $/GJ methane fee for a leak rate in g CH4 per MJ of delivered gas.
pub fn methane_fee_per_gj(leak_rate: f64, fee: f64) -> f64 {
    leak_rate * fee * 1e-3
}

/// A price after subtracting a credit, floored at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetPrice {
    pub value: f64,
    pub floored: bool,
}

/// Electricity price net of the derated 45Y credit, in $/MWh.
pub fn net_input_price_45y(gross_elec: f64, rate: f64, df: f64) -> NetPrice {
    let raw = gross_elec - rate * df;
    NetPrice { value: raw.max(0.0), floored: raw < 0.0 }
}

/// $/gal of RIN revenue.
pub fn rfs_credit_per_gal(rin_price: f64, equivalence: f64) -> f64 {
    rin_price * equivalence
}

/// $/gal of LCFS value for a fuel with `ci` kgCO2e/GJ_LHV; negative above the benchmark.
pub fn lcfs_credit_per_gal(ci: f64, benchmark: f64, price: f64, gal_lhv: f64) -> f64 {
    (benchmark - ci) * gal_lhv * price / 1000.0
}

/// DAC CO2 price net of the derated 45Q utilization credit, in $/t.
pub fn dac_co2_net_cost(gross: f64, rate_45q: f64, df: f64) -> f64 {
    gross - rate_45q * df
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RinPrices {
    pub d3: f64,
    pub d5: f64,
    pub d6: f64,
}

impl RinPrices {
    pub fn price(&self, category: RinCategory) -> f64 {
        match category {
            RinCategory::D3 => self.d3,
            RinCategory::D5 => self.d5,
            RinCategory::D6 => self.d6,
        }
    }
}

/// Liquid-fuel subsidy settings for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuelCreditScenario {
    pub z45_duration_years: u32,
    /// $/t CO2e.
    pub lcfs_price: f64,
    pub rin_prices: RinPrices,
    /// kgCO2e/GJ_LHV.
    pub lcfs_benchmark: f64,
}

impl FuelCreditScenario {
    /// No liquid-fuel subsidies.
    pub fn baseline() -> Self {
        FuelCreditScenario { z45_duration_years: 0, lcfs_price: 0.0, rin_prices: RinPrices::default(), lcfs_benchmark: 80.36 }
    }

    pub fn with_z45(mut self, years: u32) -> Self {
        self.z45_duration_years = years;
        self
    }

    pub fn with_lcfs(mut self, price: f64) -> Self {
        self.lcfs_price = price;
        self
    }

    pub fn with_rins(mut self, rin_prices: RinPrices) -> Self {
        self.rin_prices = rin_prices;
        self
    }

    pub fn validate(&self, book_life: u32) -> Result<(), PolicyError> {
        let r = self.rin_prices;
        if [self.lcfs_price, r.d3, r.d5, r.d6].iter().any(|p| !(*p >= 0.0)) {
            return Err(PolicyError::InvalidScenario("prices must be non-negative".into()));
        }
        if self.z45_duration_years > book_life {
            return Err(PolicyError::InvalidScenario(format!(
                "45Z duration {} exceeds book life {book_life}",
                self.z45_duration_years
            )));
        }
        Ok(())
    }
}

/// A credit actually taken by one facility, in $ per unit of final product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CreditClaim {
    pub instrument: Instrument,
    pub facility_id: String,
    pub derated_value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimViolation {
    MultipleExclusiveCredits { facility: String, instruments: Vec<Instrument> },
    CleanFuelCreditOnNonFuel { facility: String },
    RfsOnIneligibleFuel { pathway: String },
}

impl fmt::Display for ClaimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimViolation::MultipleExclusiveCredits { facility, instruments } => {
                let names: Vec<_> = instruments.iter().map(|i| i.label()).collect();
                write!(f, "facility {facility} claims {} together", names.join("+"))
            }
            ClaimViolation::CleanFuelCreditOnNonFuel { facility } => {
                write!(f, "facility {facility} claims 45Z without producing liquid fuel")
            }
            ClaimViolation::RfsOnIneligibleFuel { pathway } => {
                write!(f, "pathway {pathway} claims RINs without a biomass or ethanol feedstock")
            }
        }
    }
}

/// Checks credit stacking rules over every facility of a chain.
pub fn validate_claims(chain: &PathwayChain) -> Result<(), Vec<ClaimViolation>> {
    let mut out = Vec::new();
    for fac in &chain.facilities {
        let simultaneous: Vec<Instrument> = fac.claim.simultaneous().into_iter().filter(|i| i.is_exclusive()).collect();
        if simultaneous.len() > 1 {
            out.push(ClaimViolation::MultipleExclusiveCredits { facility: fac.id.clone(), instruments: simultaneous });
        }
        let makes_fuel = fac.technology.as_ref().is_some_and(|t| t.product == Product::Slf);
        if fac.claim.mentions(Instrument::Credit45Z) && !makes_fuel {
            out.push(ClaimViolation::CleanFuelCreditOnNonFuel { facility: fac.id.clone() });
        }
    }
    if chain.rfs_category.is_some() {
        let direct = chain.fuel_facility().is_some_and(|f| {
            f.feedstocks.iter().any(|fs| matches!(fs.kind, FeedstockKind::Biomass | FeedstockKind::Ethanol))
        });
        if !direct {
            out.push(ClaimViolation::RfsOnIneligibleFuel { pathway: chain.id.clone() });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v45_tiers() {
        let p = PolicySuite::default();
        p.validate(15).unwrap();
        assert_eq!(p.credit_45v(3.3), 0.6);
        assert_eq!(p.credit_45v(4.0), 0.0);
        assert_eq!(p.credit_45v(-18.0), 3.0);
        assert_eq!(p.credit_45v(0.45), 1.002);
        assert_eq!(p.credit_45v(1.5), 0.75);
        assert_eq!(p.credit_45v(2.5), 0.6);
    }

    #[test]
    fn tier_gap_rejected() {
        let mut p = PolicySuite::default();
        p.v45_tiers[2].ci_lower = Some(1.6);
        assert!(p.validate(15).is_err());
    }

    #[test]
    fn z45() {
        let p = PolicySuite::default();
        assert!((p.credit_45z_per_gal(0.0, 0.82) - 1.615).abs() < 1e-12);
        assert_eq!(p.credit_45z_per_gal(50.0, 0.82), 0.0);
        assert_eq!(p.credit_45z_per_gal(70.0, 0.82), 0.0);
        assert!((p.credit_45z_per_gal(-98.0, 0.82) - 148.0 / 50.0 * 1.615).abs() < 1e-12);
    }

    #[test]
    fn q45() {
        let p = PolicySuite::default();
        assert_eq!(p.credit_45q(Q45Variant::Sequestration, 1.0), 85.0);
        assert_eq!(p.credit_45q(Q45Variant::DacUtilization, 0.0), 0.0);
        assert_eq!(p.credit_45q(Q45Variant::DacUtilization, 1.0), 130.0);
        assert!("ocean".parse::<Q45Variant>().is_err());
    }

    #[test]
    fn methane_fee() {
        assert!((methane_fee_per_gj(0.29, 1500.0) - 0.435).abs() < 1e-12);
        assert_eq!(methane_fee_per_gj(0.0, 1500.0), 0.0);
        assert!((methane_fee_per_gj(0.29, 900.0) - 0.261).abs() < 1e-12);
    }

    #[test]
    fn y45_net_price() {
        assert!((net_input_price_45y(42.6, 26.0, 0.808).value - 21.592).abs() < 1e-9);
        assert_eq!(net_input_price_45y(42.6, 0.0, 0.808).value, 42.6);
        assert!((net_input_price_45y(42.6, 26.0, 1.0).value - 16.6).abs() < 1e-9);
        let floored = net_input_price_45y(10.0, 26.0, 1.0);
        assert!(floored.floored && floored.value == 0.0);
    }

    #[test]
    fn rfs_and_lcfs() {
        assert!((rfs_credit_per_gal(1.0, 1.64) - 1.64).abs() < 1e-12);
        assert_eq!(rfs_credit_per_gal(0.0, 1.64), 0.0);
        assert!((rfs_credit_per_gal(1.25, 1.64) - 2.05).abs() < 1e-12);
        assert!((lcfs_credit_per_gal(0.0, 80.36, 100.0, 0.126) - 1.012536).abs() < 1e-9);
        assert_eq!(lcfs_credit_per_gal(80.36, 80.36, 100.0, 0.126), 0.0);
        assert!((lcfs_credit_per_gal(0.0, 89.37, 100.0, 0.126) - 1.126062).abs() < 1e-9);
        assert!(lcfs_credit_per_gal(100.0, 80.36, 100.0, 0.126) < 0.0);
    }

    #[test]
    fn dac_net() {
        assert!((dac_co2_net_cost(280.0, 130.0, 0.896) - 163.52).abs() < 1e-9);
        assert_eq!(dac_co2_net_cost(280.0, 0.0, 1.0), 280.0);
        assert_eq!(dac_co2_net_cost(280.0, 130.0, 1.0), 150.0);
    }

    #[test]
    fn scenario_validation() {
        assert!(FuelCreditScenario::baseline().validate(15).is_ok());
        assert!(FuelCreditScenario::baseline().with_z45(16).validate(15).is_err());
        assert!(FuelCreditScenario::baseline().with_lcfs(-1.0).validate(15).is_err());
    }
}
