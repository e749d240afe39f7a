//! Attributional lifecycle carbon intensity with an explicit carbon ledger.
//!
//! Every chain is tracked per GJ_HHV of final product. Carbon enters from
//! fossil, biogenic or atmospheric sources and leaves as vented CO2, stored
//! CO2 or carbon embodied in the product. Biogenic and atmospheric carbon is
//! neutral when released, so storing it earns a negative emission.

use thiserror::Error;

use crate::quantities::{ConversionConstants, FuelProperties};
use crate::techdata::{Co2Source, Dataset, Facility, FeedstockKind, PathwayChain, Product, TechnologySpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmissionsError {
    #[error("pathway {0} does not produce hydrogen")]
    NotHydrogenPathway(String),
    #[error("pathway {0} does not produce liquid fuel")]
    NotSlfPathway(String),
    #[error("pathway {pathway} lacks a {role} facility")]
    MissingFacility { pathway: String, role: &'static str },
    #[error("pathway {pathway}: hydrogen plant separates {available:.3} kgCO2 but fuel plant needs {needed:.3}")]
    InsufficientCo2 { pathway: String, available: f64, needed: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiBasis {
    PerKgH2,
    PerGjHhv,
    PerGjLhv,
    PerMmbtuLhv,
    PerGalSlf,
}

/// A carbon intensity in kgCO2e per unit of `basis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarbonIntensity {
    pub value: f64,
    pub basis: CiBasis,
}

impl CarbonIntensity {
    pub fn new(value: f64, basis: CiBasis) -> Self {
        CarbonIntensity { value, basis }
    }

    /// kgCO2e per GJ_HHV.
    fn per_gj_hhv(&self, props: &FuelProperties, k: &ConversionConstants) -> f64 {
        let per_mmbtu = |v: f64| v / k.gj_per_mmbtu / props.hhv_lhv_ratio;
        match self.basis {
            CiBasis::PerGjHhv => self.value,
            CiBasis::PerKgH2 => self.value / (props.hhv_per_tonne / 1000.0),
            CiBasis::PerGjLhv => self.value / props.hhv_lhv_ratio,
            CiBasis::PerMmbtuLhv => per_mmbtu(self.value),
            CiBasis::PerGalSlf => per_mmbtu(self.value / k.slf_gal_mmbtu_lhv),
        }
    }

    /// Re-expresses the intensity on another basis for the fuel described by `props`.
    pub fn to_basis(&self, basis: CiBasis, props: &FuelProperties, k: &ConversionConstants) -> CarbonIntensity {
        let hhv = self.per_gj_hhv(props, k);
        let value = match basis {
            CiBasis::PerGjHhv => hhv,
            CiBasis::PerKgH2 => hhv * props.hhv_per_tonne / 1000.0,
            CiBasis::PerGjLhv => hhv * props.hhv_lhv_ratio,
            CiBasis::PerMmbtuLhv => hhv * props.hhv_lhv_ratio * k.gj_per_mmbtu,
            CiBasis::PerGalSlf => hhv * props.hhv_lhv_ratio * k.gj_per_mmbtu * k.slf_gal_mmbtu_lhv,
        };
        CarbonIntensity { value, basis }
    }
}

/// Fossil reference intensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CIBenchmarks {
    /// kgCO2e/kg H2.
    pub h2_fossil: f64,
    /// kgCO2e/gal.
    pub slf_fossil_per_gal: f64,
    /// kgCO2e/MMBtu_LHV.
    pub slf_fossil_per_mmbtu: f64,
}

impl Default for CIBenchmarks {
    fn default() -> Self {
        CIBenchmarks { h2_fossil: 11.0, slf_fossil_per_gal: 10.7, slf_fossil_per_mmbtu: 85.0 }
    }
}

/// Carbon flows in kgCO2 per GJ_HHV of final product, plus non-carbon upstream GHG.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CarbonLedger {
    pub input_fossil: f64,
    pub input_biogenic: f64,
    pub input_atmospheric: f64,
    pub vented_fossil: f64,
    pub vented_neutral: f64,
    pub stored_fossil: f64,
    pub stored_neutral: f64,
    pub product_fossil: f64,
    pub product_neutral: f64,
    /// Supply-chain GHG outside the carbon balance, kgCO2e.
    pub upstream: f64,
}

impl CarbonLedger {
    pub fn inputs(&self) -> f64 {
        self.input_fossil + self.input_biogenic + self.input_atmospheric
    }

    pub fn outputs(&self) -> f64 {
        self.vented_fossil + self.vented_neutral + self.stored_fossil + self.stored_neutral + self.product_fossil + self.product_neutral
    }

    /// Relative imbalance between inputs and outputs.
    pub fn imbalance(&self) -> f64 {
        let scale = self.inputs().abs().max(1.0);
        (self.inputs() - self.outputs()).abs() / scale
    }

    /// Lifecycle intensity, kgCO2e/GJ_HHV.
    pub fn intensity(&self) -> f64 {
        self.upstream + self.vented_fossil + self.product_fossil - self.stored_neutral
    }

    pub fn stored(&self) -> f64 {
        self.stored_fossil + self.stored_neutral
    }

    fn add(&mut self, o: &CarbonLedger) {
        self.input_fossil += o.input_fossil;
        self.input_biogenic += o.input_biogenic;
        self.input_atmospheric += o.input_atmospheric;
        self.vented_fossil += o.vented_fossil;
        self.vented_neutral += o.vented_neutral;
        self.stored_fossil += o.stored_fossil;
        self.stored_neutral += o.stored_neutral;
        self.product_fossil += o.product_fossil;
        self.product_neutral += o.product_neutral;
        self.upstream += o.upstream;
    }

    fn scaled(&self, k: f64) -> CarbonLedger {
        CarbonLedger {
            input_fossil: self.input_fossil * k,
            input_biogenic: self.input_biogenic * k,
            input_atmospheric: self.input_atmospheric * k,
            vented_fossil: self.vented_fossil * k,
            vented_neutral: self.vented_neutral * k,
            stored_fossil: self.stored_fossil * k,
            stored_neutral: self.stored_neutral * k,
            product_fossil: self.product_fossil * k,
            product_neutral: self.product_neutral * k,
            upstream: self.upstream * k,
        }
    }
}

/// Carbon flows of a hydrogen plant, per GJ_HHV of hydrogen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenPlantCarbon {
    pub ledger: CarbonLedger,
    /// kgCO2 captured before any transfer to a fuel plant.
    pub captured: f64,
    /// kgCO2 handed to a downstream fuel plant.
    pub diverted: f64,
}

impl HydrogenPlantCarbon {
    /// kgCO2 sent to transport and storage.
    pub fn stored(&self) -> f64 {
        self.ledger.stored()
    }
}

/// Hydrogen plant ledger. `divert` kgCO2/GJ_H2 of separated CO2 leaves for
/// a fuel plant, drawn from the captured stream first.
pub fn hydrogen_plant_carbon(facility: &Facility, tech: &TechnologySpec, divert: f64) -> HydrogenPlantCarbon {
    let mut l = CarbonLedger::default();
    let mut captured = 0.0;
    let mut vented_total = 0.0;
    let mut biogenic = false;
    for fs in &facility.feedstocks {
        let carbon = tech.ifi * fs.carbon_content();
        l.upstream += tech.ifi * fs.upstream_ci;
        if fs.biogenic {
            l.input_biogenic += carbon;
            biogenic = true;
        } else {
            l.input_fossil += carbon;
        }
        captured += carbon * tech.capture_rate;
        vented_total += carbon * (1.0 - tech.capture_rate);
    }
    let from_captured = divert.min(captured);
    let from_vented = divert - from_captured;
    let stored = captured - from_captured;
    let vented = vented_total - from_vented;
    if biogenic {
        l.stored_neutral = stored;
        l.vented_neutral = vented;
    } else {
        l.stored_fossil = stored;
        l.vented_fossil = vented;
    }
    // Diverted carbon leaves in the hydrogen plant's accounts as product carbon.
    l.product_neutral = if biogenic { divert } else { 0.0 };
    l.product_fossil = if biogenic { 0.0 } else { divert };
    HydrogenPlantCarbon { ledger: l, captured, diverted: divert }
}

/// Full per-chain emissions result.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainEmissions {
    /// kgCO2 per GJ_HHV of product.
    pub ledger: CarbonLedger,
    /// kgCO2e/GJ_HHV of product.
    pub ci_per_gj_hhv: f64,
    /// Hydrogen plant carbon per GJ of hydrogen, when the chain has one.
    pub hydrogen_plant: Option<HydrogenPlantCarbon>,
    /// GJ hydrogen per GJ product.
    pub h2_per_product: f64,
    /// kgCO2 stored per GJ product at the ethanol plant.
    pub ethanol_plant_stored: f64,
}

impl ChainEmissions {
    /// Hydrogen plant intensity in kgCO2e/kg H2.
    pub fn hydrogen_plant_ci_per_kg(&self, ds: &Dataset) -> Option<f64> {
        self.hydrogen_plant.map(|h| h.ledger.intensity() * ds.h2_properties().hhv_per_tonne / 1000.0)
    }
}

fn missing(chain: &PathwayChain, role: &'static str) -> EmissionsError {
    EmissionsError::MissingFacility { pathway: chain.id.clone(), role }
}

pub fn chain_emissions(ds: &Dataset, chain: &PathwayChain) -> Result<ChainEmissions, EmissionsError> {
    match chain.product {
        Product::H2 => {
            let fac = chain.hydrogen_facility().ok_or_else(|| missing(chain, "hydrogen"))?;
            let tech = fac.technology.as_ref().expect("hydrogen facility has a technology");
            let h = hydrogen_plant_carbon(fac, tech, 0.0);
            Ok(ChainEmissions {
                ledger: h.ledger,
                ci_per_gj_hhv: h.ledger.intensity(),
                hydrogen_plant: Some(h),
                h2_per_product: 1.0,
                ethanol_plant_stored: 0.0,
            })
        }
        Product::Slf => slf_chain(ds, chain),
    }
}

fn slf_chain(ds: &Dataset, chain: &PathwayChain) -> Result<ChainEmissions, EmissionsError> {
    let fuel_fac = chain.fuel_facility().ok_or_else(|| missing(chain, "fuel"))?;
    let tech = fuel_fac.technology.as_ref().expect("fuel facility has a technology");
    let product_carbon = ds.slf_properties().carbon_content;
    let mut ledger = CarbonLedger::default();
    let mut hydrogen_plant = None;
    let mut h2_per_product = 0.0;
    let mut ethanol_plant_stored = 0.0;

    if tech.co2_demand > 0.0 {
        // Hydrogen + CO2 conversion.
        let h2_fac = chain.hydrogen_facility().ok_or_else(|| missing(chain, "hydrogen"))?;
        let h2_tech = h2_fac.technology.as_ref().expect("hydrogen facility has a technology");
        h2_per_product = tech.ifi;
        let divert = match chain.co2_source {
            Co2Source::BiogenicInternal => tech.co2_demand / tech.ifi,
            _ => 0.0,
        };
        let h = hydrogen_plant_carbon(h2_fac, h2_tech, divert);
        let separated = h.captured + h.ledger.vented_neutral + h.ledger.vented_fossil + divert - h.captured.min(divert);
        if divert > 0.0 && (h.ledger.input_biogenic < 1e-12 || divert > separated + 1e-9) {
            return Err(EmissionsError::InsufficientCo2 {
                pathway: chain.id.clone(),
                available: separated * tech.ifi,
                needed: tech.co2_demand,
            });
        }
        let mut h_scaled = h.ledger.scaled(tech.ifi);
        // Transferred carbon is an internal flow, not chain output.
        h_scaled.product_neutral = 0.0;
        h_scaled.product_fossil = 0.0;
        ledger.add(&h_scaled);
        match chain.co2_source {
            Co2Source::Dac => ledger.input_atmospheric += tech.co2_demand,
            Co2Source::BiogenicInternal => {}
            _ => return Err(missing(chain, "CO2 supply")),
        }
        let fuel_vent = tech.co2_demand - product_carbon;
        ledger.vented_neutral += fuel_vent;
        ledger.product_neutral += product_carbon;
        hydrogen_plant = Some(h);
    } else {
        for fs in &fuel_fac.feedstocks {
            let carbon = tech.ifi * fs.carbon_content();
            // Ethanol feed carries capture at its source plant.
            let upstream_gross = fs.upstream_ci + fs.captured_co2;
            ledger.upstream += tech.ifi * upstream_gross;
            if fs.kind == FeedstockKind::Ethanol {
                let fermentation = tech.ifi * fs.carbon_content() / 2.0;
                let stored = tech.ifi * fs.captured_co2;
                ledger.input_biogenic += fermentation;
                ledger.stored_neutral += stored;
                ledger.vented_neutral += fermentation - stored;
                ethanol_plant_stored += stored;
            }
            if fs.biogenic {
                ledger.input_biogenic += carbon;
            } else {
                ledger.input_fossil += carbon;
            }
        }
        let available = (ledger.input_biogenic + ledger.input_fossil - ledger.stored() - ledger.vented_neutral) - product_carbon;
        let captured = available * tech.capture_rate;
        let fossil_share = if ledger.input_fossil > 0.0 { ledger.input_fossil / (ledger.input_fossil + ledger.input_biogenic) } else { 0.0 };
        ledger.stored_neutral += captured * (1.0 - fossil_share);
        ledger.stored_fossil += captured * fossil_share;
        ledger.vented_neutral += (available - captured) * (1.0 - fossil_share);
        ledger.vented_fossil += (available - captured) * fossil_share;
        ledger.product_neutral += product_carbon * (1.0 - fossil_share);
        ledger.product_fossil += product_carbon * fossil_share;
    }

    Ok(ChainEmissions { ci_per_gj_hhv: ledger.intensity(), ledger, hydrogen_plant, h2_per_product, ethanol_plant_stored })
}

/// kgCO2e/kg H2 of a hydrogen pathway.
pub fn h2_ci(ds: &Dataset, chain: &PathwayChain) -> Result<f64, EmissionsError> {
    if chain.product != Product::H2 {
        return Err(EmissionsError::NotHydrogenPathway(chain.id.clone()));
    }
    let e = chain_emissions(ds, chain)?;
    Ok(CarbonIntensity::new(e.ci_per_gj_hhv, CiBasis::PerGjHhv)
        .to_basis(CiBasis::PerKgH2, &ds.h2_properties(), &ds.constants)
        .value)
}

/// kgCO2e/MMBtu_LHV of a liquid fuel pathway.
pub fn slf_ci(ds: &Dataset, chain: &PathwayChain) -> Result<f64, EmissionsError> {
    if chain.product != Product::Slf {
        return Err(EmissionsError::NotSlfPathway(chain.id.clone()));
    }
    let e = chain_emissions(ds, chain)?;
    Ok(CarbonIntensity::new(e.ci_per_gj_hhv, CiBasis::PerGjHhv)
        .to_basis(CiBasis::PerMmbtuLhv, &ds.slf_properties(), &ds.constants)
        .value)
}

/// Fermentation CO2 capture at an ethanol plant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EthanolFermentation {
    /// kg CO2-equivalent carbon per kg ethanol.
    pub carbon_per_kg: f64,
    /// MJ/kg, HHV.
    pub hhv: f64,
    /// kgCO2e/GJ_HHV without capture.
    pub uncaptured_ci: f64,
}

impl Default for EthanolFermentation {
    fn default() -> Self {
        EthanolFermentation { carbon_per_kg: 1.91, hhv: 29.7, uncaptured_ci: 50.0 }
    }
}

impl EthanolFermentation {
    /// kgCO2/GJ of carbon in the ethanol.
    pub fn carbon_per_gj(&self) -> f64 {
        self.carbon_per_kg / self.hhv * 1000.0
    }

    /// One CO2 leaves fermentation per ethanol molecule formed, so the
    /// capturable CO2 is half the ethanol's carbon. Tabulated at whole kg/GJ.
    pub fn capturable(&self) -> f64 {
        self.carbon_per_gj().round() / 2.0
    }

    /// Same as [`Self::capturable`] without rounding the carbon content.
    pub fn capturable_exact(&self) -> f64 {
        self.carbon_per_gj() / 2.0
    }

    pub fn ci(&self, capture_fraction: f64) -> f64 {
        self.uncaptured_ci - capture_fraction * self.capturable()
    }
}

/// kgCO2e/GJ_HHV of ethanol with full fermentation CO2 capture.
pub fn ethanol_ccs_ci() -> f64 {
    EthanolFermentation::default().ci(1.0)
}

/// Parameters of the biomass-to-fuel plant in the efficiency study, per tonne biomass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiomassFuelPlant {
    /// MMBtu HHV per tonne biomass.
    pub biomass_mmbtu: f64,
    pub carbon_fraction: f64,
    /// kgCO2/MMBtu of product.
    pub product_carbon: f64,
    pub capture_rate: f64,
    /// HHV/LHV ratio applied to product energy.
    pub lhv_factor: f64,
}

impl Default for BiomassFuelPlant {
    fn default() -> Self {
        BiomassFuelPlant { biomass_mmbtu: 18.8, carbon_fraction: 0.475, product_carbon: 71.0, capture_rate: 0.87, lhv_factor: 1.05 }
    }
}

impl BiomassFuelPlant {
    pub fn without_lhv_factor(mut self) -> Self {
        self.lhv_factor = 1.0;
        self
    }

    /// kgCO2 in one tonne of biomass.
    pub fn biomass_co2(&self) -> f64 {
        1000.0 * self.carbon_fraction * 44.0 / 12.0
    }

    /// MMBtu of fuel per tonne biomass at efficiency `eta`.
    pub fn energy(&self, eta: f64) -> f64 {
        self.biomass_mmbtu * eta * self.lhv_factor
    }

    /// kgCO2 captured per tonne biomass.
    pub fn captured(&self, eta: f64) -> f64 {
        (self.biomass_co2() - self.energy(eta) * self.product_carbon) * self.capture_rate
    }

    /// kgCO2e/MMBtu.
    pub fn ci(&self, eta: f64) -> f64 {
        -self.captured(eta) / self.energy(eta)
    }
}

/// Efficiency-study fuel CI at `eta`, kgCO2e/MMBtu.
pub fn biomass_plant_slf_ci(eta: f64) -> f64 {
    BiomassFuelPlant::default().ci(eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds() -> Dataset {
        Dataset::default_dataset()
    }

    #[test]
    fn hydrogen_cis() {
        let ds = ds();
        let ci = |id: &str| h2_ci(&ds, ds.pathway(id).unwrap()).unwrap();
        assert!((ci("P1") - 1.23 * 63.8 * 0.142).abs() < 1e-9);
        assert!((ci("P2") - 3.2563).abs() < 1e-3);
        assert!((ci("P3") - 2.8542).abs() < 1e-3);
        assert_eq!(ci("P4"), 0.0);
        assert!((ci("P5") - 1.2840).abs() < 1e-3);
        assert!((ci("P6") - (5.08 * 1.78 - 0.87 * 1.78 * 87.9) * 0.142).abs() < 1e-9);
    }

    #[test]
    fn wrong_product() {
        let ds = ds();
        assert!(matches!(h2_ci(&ds, ds.pathway("P9").unwrap()), Err(EmissionsError::NotHydrogenPathway(_))));
        assert!(matches!(slf_ci(&ds, ds.pathway("P1").unwrap()), Err(EmissionsError::NotSlfPathway(_))));
    }

    #[test]
    fn fuel_cis() {
        let ds = ds();
        let ci = |id: &str| slf_ci(&ds, ds.pathway(id).unwrap()).unwrap();
        let k = 1.05 * 1.055;
        assert!(ci("P9").abs() < 1e-12);
        assert!((ci("P14") - 50.0 * 1.09 * k).abs() < 1e-9);
        assert!((ci("P15") - 18.0 * 1.09 * k).abs() < 1e-9);
        assert!((ci("P12") - (2.02 * 5.08) * k).abs() < 1e-9);
        let p13 = 2.02 * 5.08 - 0.87 * (2.02 * 87.9 - 67.7);
        assert!((ci("P13") - p13 * k).abs() < 1e-9);
        let p11 = 1.47 * 1.78 * 5.08 - (1.47 * 0.87 * 1.78 * 87.9 - 67.7);
        assert!((ci("P11") - p11 * k).abs() < 1e-9);
    }

    #[test]
    fn ethanol_capture() {
        let f = EthanolFermentation::default();
        assert!((f.carbon_per_gj() - 64.31).abs() < 0.01);
        assert_eq!(f.capturable(), 32.0);
        assert_eq!(ethanol_ccs_ci(), 18.0);
        assert_eq!(f.ci(0.0), 50.0);
        assert!((f.capturable_exact() - 32.155).abs() < 0.01);
    }

    #[test]
    fn biomass_plant_ci() {
        assert!((biomass_plant_slf_ci(0.5) - (-91.8)).abs() < 0.05);
        assert!((biomass_plant_slf_ci(0.2) - (-322.0)).abs() < 0.5);
        let bare = BiomassFuelPlant::default().without_lhv_factor();
        assert!((bare.ci(0.5) - (-99.4)).abs() < 0.1);
        assert!((bare.ci(0.2) - (-341.2)).abs() < 0.1);
    }

    #[test]
    fn basis_round_trip() {
        let ds = ds();
        let p = ds.slf_properties();
        let c = CarbonIntensity::new(-37.5, CiBasis::PerGalSlf);
        for b in [CiBasis::PerGjHhv, CiBasis::PerGjLhv, CiBasis::PerMmbtuLhv, CiBasis::PerKgH2] {
            let back = c.to_basis(b, &p, &ds.constants).to_basis(CiBasis::PerGalSlf, &p, &ds.constants);
            assert!((back.value - c.value).abs() < 1e-12);
        }
    }
}
