//! Unit-aware values and the conversion constants the model is built on.
//!
//! Units are parsed from compact strings such as `USD/GJ_HHV`, `kgCO2e/kg`
//! or `USD/kW-yr`. Each unit reduces to a [`Dimension`] (integer exponents
//! over energy, mass, volume, currency and time, plus a heating-value basis
//! for energy) and a scale to the canonical unit of that dimension.
//!
//! Canonical units: GJ, tonne, gallon, USD, year.
//!
//! ```
//! use fuelpath::quantities::{convert, FuelProperties, Quantity, Unit};
//!
//! let h2 = FuelProperties::new(142.0, 1.18, 0.0);
//! let one_kg = Quantity::new(1.0, "kg").unwrap();
//! let energy = convert(&one_kg, &Unit::parse("GJ_HHV").unwrap(), Some(&h2)).unwrap();
//! assert!((energy.value - 0.142).abs() < 1e-12);
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantityError {
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("incompatible dimensions: `{from}` cannot become `{to}`")]
    IncompatibleDimensions { from: String, to: String },
    #[error("converting `{from}` to `{to}` needs fuel properties")]
    MissingFuelProperties { from: String, to: String },
    #[error("cost index must be positive, got {0}")]
    NonPositiveIndex(f64),
}

/// Heating-value convention attached to an energy dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeatingBasis {
    Hhv,
    Lhv,
    /// Electricity and other energy with no combustion basis.
    Unspecified,
}

/// Exponents over the base dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    pub energy: i8,
    pub mass: i8,
    pub volume: i8,
    pub currency: i8,
    pub time: i8,
    /// `None` exactly when `energy == 0`.
    pub basis: Option<HeatingBasis>,
}

impl Dimension {
    pub const NONE: Dimension = Dimension {
        energy: 0,
        mass: 0,
        volume: 0,
        currency: 0,
        time: 0,
        basis: None,
    };

    fn base(energy: i8, mass: i8, volume: i8, currency: i8, time: i8, basis: Option<HeatingBasis>) -> Self {
        Dimension { energy, mass, volume, currency, time, basis }
    }

    fn mul(self, other: Dimension) -> Result<Dimension, ()> {
        let basis = match (self.basis, other.basis) {
            (Some(a), Some(b)) if a != b => return Err(()),
            (a, b) => a.or(b),
        };
        let energy = self.energy + other.energy;
        Ok(Dimension {
            energy,
            mass: self.mass + other.mass,
            volume: self.volume + other.volume,
            currency: self.currency + other.currency,
            time: self.time + other.time,
            basis: if energy == 0 { None } else { basis },
        })
    }

    fn inv(self) -> Dimension {
        Dimension {
            energy: -self.energy,
            mass: -self.mass,
            volume: -self.volume,
            currency: -self.currency,
            time: -self.time,
            basis: self.basis,
        }
    }

    pub fn is_dimensionless(&self) -> bool {
        *self == Dimension::NONE
    }

    fn same_exponents(&self, other: &Dimension) -> bool {
        self.energy == other.energy
            && self.mass == other.mass
            && self.volume == other.volume
            && self.currency == other.currency
            && self.time == other.time
    }
}

/// A parsed unit: its symbol, dimension and scale to canonical units.
#[derive(Debug, Clone)]
pub struct Unit {
    symbol: String,
    pub dimension: Dimension,
    pub scale: f64,
}

impl PartialEq for Unit {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && (self.scale - other.scale).abs() <= 1e-15 * self.scale.abs().max(other.scale.abs())
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)
    }
}

const GJ_PER_MMBTU: f64 = 1.055;
const GJ_PER_KWH: f64 = 0.0036;
const HOURS_PER_YEAR: f64 = 8760.0;

fn atom(token: &str) -> Option<(Dimension, f64)> {
    use HeatingBasis::*;
    let e = |b| Dimension::base(1, 0, 0, 0, 0, Some(b));
    let m = Dimension::base(0, 1, 0, 0, 0, None);
    let power = Dimension::base(1, 0, 0, 0, -1, Some(Unspecified));
    Some(match token {
        "1" | "fraction" | "ratio" => (Dimension::NONE, 1.0),
        "%" => (Dimension::NONE, 0.01),
        "GJ_HHV" => (e(Hhv), 1.0),
        "MJ_HHV" => (e(Hhv), 1e-3),
        "MMBtu_HHV" => (e(Hhv), GJ_PER_MMBTU),
        "GJ_LHV" => (e(Lhv), 1.0),
        "MJ_LHV" => (e(Lhv), 1e-3),
        "MMBtu_LHV" => (e(Lhv), GJ_PER_MMBTU),
        "GJ" => (e(Unspecified), 1.0),
        "MJ" => (e(Unspecified), 1e-3),
        "MMBtu" => (e(Unspecified), GJ_PER_MMBTU),
        "kWh" => (e(Unspecified), GJ_PER_KWH),
        "MWh" => (e(Unspecified), GJ_PER_KWH * 1e3),
        "kW" => (power, GJ_PER_KWH * HOURS_PER_YEAR),
        "MW" => (power, GJ_PER_KWH * HOURS_PER_YEAR * 1e3),
        "g" | "gCH4" | "gCO2" | "gCO2e" => (m, 1e-6),
        "kg" | "kgCO2" | "kgCO2e" | "kgH2" | "kgCH4" => (m, 1e-3),
        "t" | "tCO2" | "tCO2e" | "tCH4" | "tbiomass" => (m, 1.0),
        "Mt" | "MtCO2" => (m, 1e6),
        "gal" => (Dimension::base(0, 0, 1, 0, 0, None), 1.0),
        "USD" => (Dimension::base(0, 0, 0, 1, 0, None), 1.0),
        "MUSD" => (Dimension::base(0, 0, 0, 1, 0, None), 1e6),
        "yr" => (Dimension::base(0, 0, 0, 0, 1, None), 1.0),
        "hr" => (Dimension::base(0, 0, 0, 0, 1, None), 1.0 / HOURS_PER_YEAR),
        "day" => (Dimension::base(0, 0, 0, 0, 1, None), 24.0 / HOURS_PER_YEAR),
        "RIN" => (Dimension::NONE, 1.0),
        _ => return None,
    })
}

fn product(part: &str, whole: &str) -> Result<(Dimension, f64), QuantityError> {
    let mut dim = Dimension::NONE;
    let mut scale = 1.0;
    for token in part.split(['-', '*', '·']).map(str::trim) {
        let (d, s) = atom(token).ok_or_else(|| QuantityError::UnknownUnit(whole.to_string()))?;
        dim = dim.mul(d).map_err(|_| QuantityError::UnknownUnit(whole.to_string()))?;
        scale *= s;
    }
    Ok((dim, scale))
}

impl Unit {
    /// Parses `numerator[/denominator]`, where each side is a `-`-joined product of atoms.
    pub fn parse(symbol: &str) -> Result<Unit, QuantityError> {
        let trimmed = symbol.trim();
        let mut halves = trimmed.splitn(2, '/');
        let num = halves.next().unwrap_or_default();
        let (mut dim, mut scale) = product(num, trimmed)?;
        if let Some(den) = halves.next() {
            if den.contains('/') {
                return Err(QuantityError::UnknownUnit(trimmed.to_string()));
            }
            let (d, s) = product(den, trimmed)?;
            dim = dim.mul(d.inv()).map_err(|_| QuantityError::UnknownUnit(trimmed.to_string()))?;
            scale /= s;
        }
        Ok(Unit { symbol: trimmed.to_string(), dimension: dim, scale })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn is_compatible(&self, other: &Unit) -> bool {
        self.dimension == other.dimension
    }
}

/// Energy content and carbon content of a fuel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelProperties {
    /// GJ_HHV per tonne.
    pub hhv_per_tonne: f64,
    pub hhv_lhv_ratio: f64,
    /// kg CO2 per GJ_HHV.
    pub carbon_content: f64,
}

impl FuelProperties {
    pub fn new(hhv_per_tonne: f64, hhv_lhv_ratio: f64, carbon_content: f64) -> Self {
        FuelProperties { hhv_per_tonne, hhv_lhv_ratio, carbon_content }
    }

    /// GJ_LHV per GJ_HHV.
    pub fn lhv_per_hhv(&self) -> f64 {
        1.0 / self.hhv_lhv_ratio
    }
}

/// Fixed numbers used across the model. Immutable once a dataset is loaded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionConstants {
    /// GJ_HHV per tonne of hydrogen.
    pub h2_hhv: f64,
    /// GJ_LHV per gallon of SLF, used for the LCFS credit.
    pub slf_gal_lhv: f64,
    /// MMBtu_LHV per gallon of SLF, used for per-gallon costing and CI.
    pub slf_gal_mmbtu_lhv: f64,
    /// MMBtu_LHV per gallon of ethanol.
    pub ethanol_gal_lhv: f64,
    pub gj_per_mmbtu: f64,
    pub kwh_per_gj: f64,
    /// Gallons of SLF per MMBtu_LHV in the efficiency study.
    pub slf_gal_per_mmbtu: f64,
}

impl Default for ConversionConstants {
    fn default() -> Self {
        ConversionConstants {
            h2_hhv: 142.0,
            slf_gal_lhv: 0.126,
            slf_gal_mmbtu_lhv: 0.126,
            ethanol_gal_lhv: 0.077,
            gj_per_mmbtu: 1.055,
            kwh_per_gj: 277.78,
            slf_gal_per_mmbtu: 7.9,
        }
    }
}

impl ConversionConstants {
    /// GJ_HHV per kg of hydrogen.
    pub fn h2_gj_per_kg(&self) -> f64 {
        self.h2_hhv / 1000.0
    }

    /// RIN equivalence of one gallon of SLF against ethanol, by LHV.
    pub fn rin_equivalence(&self) -> f64 {
        self.slf_gal_mmbtu_lhv / self.ethanol_gal_lhv
    }
}

/// A value tagged with a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Result<Quantity, QuantityError> {
        Ok(Quantity { value, unit: Unit::parse(unit)? })
    }

    pub fn with_unit(value: f64, unit: Unit) -> Quantity {
        Quantity { value, unit }
    }

    /// Value expressed in canonical units of its dimension.
    pub fn canonical(&self) -> f64 {
        self.value * self.unit.scale
    }

    pub fn try_add(&self, other: &Quantity) -> Result<Quantity, QuantityError> {
        self.combine(other, 1.0)
    }

    pub fn try_sub(&self, other: &Quantity) -> Result<Quantity, QuantityError> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Quantity, sign: f64) -> Result<Quantity, QuantityError> {
        if self.unit.dimension != other.unit.dimension {
            return Err(QuantityError::IncompatibleDimensions {
                from: other.unit.symbol.clone(),
                to: self.unit.symbol.clone(),
            });
        }
        let rhs = other.canonical() / self.unit.scale;
        Ok(Quantity { value: self.value + sign * rhs, unit: self.unit.clone() })
    }

    pub fn scaled(&self, factor: f64) -> Quantity {
        Quantity { value: self.value * factor, unit: self.unit.clone() }
    }

    /// Shorthand for [`convert`] to a unit string.
    pub fn to(&self, unit: &str, props: Option<&FuelProperties>) -> Result<Quantity, QuantityError> {
        convert(self, &Unit::parse(unit)?, props)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Converts `q` into `target`.
///
/// Handles pure rescaling, HHV/LHV basis changes and mass/energy swaps. The
/// last two need the fuel's properties.
pub fn convert(q: &Quantity, target: &Unit, props: Option<&FuelProperties>) -> Result<Quantity, QuantityError> {
    let from = &q.unit.dimension;
    let to = &target.dimension;
    let incompatible = || QuantityError::IncompatibleDimensions {
        from: q.unit.symbol.clone(),
        to: target.symbol.clone(),
    };
    let missing = || QuantityError::MissingFuelProperties {
        from: q.unit.symbol.clone(),
        to: target.symbol.clone(),
    };
    if from == to {
        return Ok(Quantity::with_unit(q.canonical() / target.scale, target.clone()));
    }
    let others_match = from.volume == to.volume && from.currency == to.currency && from.time == to.time;
    if !others_match {
        return Err(incompatible());
    }
    // Mass exponent traded for energy exponent: tonnes -> GJ_HHV via HHV.
    let swap = to.energy - from.energy;
    if from.mass - to.mass != swap {
        return Err(incompatible());
    }
    let mut canonical = q.canonical();
    let mut basis = from.basis;
    if swap != 0 {
        let p = props.ok_or_else(missing)?;
        match (basis, to.basis) {
            (Some(HeatingBasis::Unspecified), _) | (_, Some(HeatingBasis::Unspecified)) => return Err(incompatible()),
            _ => {}
        }
        canonical *= p.hhv_per_tonne.powi(swap as i32);
        if from.energy == 0 {
            basis = Some(HeatingBasis::Hhv);
        } else if basis == Some(HeatingBasis::Lhv) {
            // The swapped-in energy is HHV; express it on the existing LHV basis.
            canonical *= p.lhv_per_hhv().powi(swap as i32);
        }
    }
    let energy = to.energy;
    if energy != 0 && basis != to.basis {
        let p = props.ok_or_else(missing)?;
        canonical *= match (basis, to.basis) {
            (Some(HeatingBasis::Hhv), Some(HeatingBasis::Lhv)) => p.lhv_per_hhv().powi(energy as i32),
            (Some(HeatingBasis::Lhv), Some(HeatingBasis::Hhv)) => p.hhv_lhv_ratio.powi(energy as i32),
            _ => return Err(incompatible()),
        };
    }
    debug_assert!(from.same_exponents(to) || swap != 0);
    Ok(Quantity::with_unit(canonical / target.scale, target.clone()))
}

/// Rescales a cost between two plant-cost index years.
pub fn escalate_cost(value: f64, index_from: f64, index_to: f64) -> Result<f64, QuantityError> {
    for idx in [index_from, index_to] {
        if !(idx > 0.0) {
            return Err(QuantityError::NonPositiveIndex(idx));
        }
    }
    Ok(value * index_to / index_from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slf() -> FuelProperties {
        FuelProperties::new(45.5, 1.05, 67.7)
    }

    #[test]
    fn hydrogen_mass_to_energy() {
        let h2 = FuelProperties::new(142.0, 1.18, 0.0);
        let q = Quantity::new(1.0, "kg").unwrap();
        let e = q.to("GJ_HHV", Some(&h2)).unwrap();
        assert!((e.value - 0.142).abs() < 1e-12);
        let lhv = q.to("GJ_LHV", Some(&h2)).unwrap();
        assert!((lhv.value - 0.142 / 1.18).abs() < 1e-12);
    }

    #[test]
    fn identity() {
        let q = Quantity::new(1.0, "GJ").unwrap();
        assert_eq!(q.to("GJ", None).unwrap().value, 1.0);
    }

    #[test]
    fn hhv_to_lhv_needs_props() {
        let q = Quantity::new(1.0, "GJ_HHV").unwrap();
        let lhv = q.to("GJ_LHV", Some(&slf())).unwrap();
        assert!((lhv.value - 0.952381).abs() < 1e-6);
        assert!((lhv.value * 1.05 - 1.0).abs() < 1e-12);
        assert!(matches!(q.to("GJ_LHV", None), Err(QuantityError::MissingFuelProperties { .. })));
    }

    #[test]
    fn intensity_basis_moves_inversely() {
        let ci = Quantity::new(10.0, "kgCO2e/GJ_HHV").unwrap();
        let per_mmbtu = ci.to("kgCO2e/MMBtu_LHV", Some(&slf())).unwrap();
        assert!((per_mmbtu.value - 10.0 * 1.05 * 1.055).abs() < 1e-12);
    }

    #[test]
    fn price_per_mwh_to_per_gj() {
        let p = Quantity::new(55.0, "USD/MWh").unwrap();
        let gj = p.to("USD/GJ", None).unwrap();
        assert!((gj.value - 55.0 / 3.6).abs() < 1e-12);
    }

    #[test]
    fn capacity_cost_units() {
        let fom = Quantity::new(19.0, "USD/kW-yr").unwrap();
        let per_gj = fom.to("USD/GJ", None).unwrap();
        assert!((per_gj.value - 19.0 / 31.536).abs() < 1e-12);
    }

    #[test]
    fn mixed_sum_rejected() {
        let a = Quantity::new(1.0, "GJ_HHV").unwrap();
        let b = Quantity::new(1.0, "GJ_LHV").unwrap();
        let c = Quantity::new(1.0, "t").unwrap();
        assert!(a.try_add(&b).is_err());
        assert!(a.try_add(&c).is_err());
        let d = Quantity::new(1.0, "MMBtu_HHV").unwrap();
        assert!((a.try_add(&d).unwrap().value - 2.055).abs() < 1e-12);
    }

    #[test]
    fn unknown_unit() {
        assert!(matches!(Unit::parse("furlong"), Err(QuantityError::UnknownUnit(_))));
        assert!(Unit::parse("USD/GJ/yr").is_err());
        assert!(Unit::parse("GJ_HHV-GJ_LHV").is_err());
    }

    #[test]
    fn escalation() {
        assert!((escalate_cost(100.0, 542.0, 576.0).unwrap() - 106.273).abs() < 1e-3);
        assert_eq!(escalate_cost(7.0, 500.0, 500.0).unwrap(), 7.0);
        assert!((escalate_cost(543.0, 576.0, 542.0).unwrap() - 510.95).abs() < 0.01);
        assert!(escalate_cost(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn rin_equivalence() {
        let c = ConversionConstants::default();
        assert!((c.rin_equivalence() - 1.64).abs() < 0.005);
    }
}
