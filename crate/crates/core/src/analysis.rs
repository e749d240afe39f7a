//! Sensitivity sweeps, competitiveness frontiers, the hydrogen subsidy
//! regression, the biogenic CO2 breakeven and the plant-efficiency study.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::emissions::{hydrogen_plant_carbon, BiomassFuelPlant};
use crate::lcof::{lcof_h2, lcof_slf, LcofError};
use crate::policy::{FuelCreditScenario, RinPrices};
use crate::techdata::{Dataset, PathwayChain, Product};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least two distinct points to fit a line")]
    DegeneratePoints,
    #[error("{high} is already at or below {low}; no breakeven price exists")]
    NoCrossing { high: String, low: String },
    #[error("invalid sweep axis: {0}")]
    InvalidAxis(String),
    #[error(transparent)]
    Lcof(#[from] LcofError),
    #[error(transparent)]
    Dataset(#[from] crate::techdata::DatasetError),
}

/// LCOF of one pathway against 45Z duration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurationCurve {
    pub pathway: String,
    /// (years, $/gal).
    pub points: Vec<(u32, f64)>,
}

impl DurationCurve {
    /// Shortest duration at which the LCOF is at or below `price`.
    pub fn min_duration_at_or_below(&self, price: f64) -> Option<u32> {
        self.points.iter().find(|(_, v)| *v <= price).map(|(d, _)| *d)
    }

    pub fn at(&self, years: u32) -> Option<f64> {
        self.points.iter().find(|(d, _)| *d == years).map(|(_, v)| *v)
    }
}

/// LCOF of every liquid fuel pathway against 45Z duration, other credits from `base`.
pub fn sweep_45z_duration(ds: &Dataset, durations: &[u32], base: &FuelCreditScenario) -> Result<Vec<DurationCurve>, AnalysisError> {
    if let Some(d) = durations.iter().find(|d| **d > ds.finance.book_life_years) {
        return Err(AnalysisError::InvalidAxis(format!("duration {d} exceeds book life")));
    }
    ds.pathways_of(Product::Slf)
        .map(|p| {
            let points = durations
                .iter()
                .map(|&d| Ok((d, lcof_slf(ds, p, &base.with_z45(d))?.net)))
                .collect::<Result<Vec<_>, LcofError>>()?;
            Ok(DurationCurve { pathway: p.id.clone(), points })
        })
        .collect()
}

/// D5 and D3 RIN prices of one frontier panel. D6 trades with D5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RinScenario {
    pub d5: f64,
    pub d3: f64,
}

impl RinScenario {
    pub fn prices(&self) -> RinPrices {
        RinPrices { d3: self.d3, d5: self.d5, d6: self.d5 }
    }

    /// File-name tag, e.g. `0.75_1.25`.
    pub fn tag(&self) -> String {
        format!("{}_{}", self.d5, self.d3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub durations: Vec<u32>,
    /// $/t CO2e.
    pub lcfs_prices: Vec<f64>,
    pub rin_scenarios: Vec<RinScenario>,
}

impl SweepAxes {
    /// Durations 0–15, LCFS 0–200 $/t by 5, the four shipped RIN panels.
    pub fn standard() -> Self {
        SweepAxes {
            durations: (0..=15).collect(),
            lcfs_prices: (0..=40).map(|i| i as f64 * 5.0).collect(),
            rin_scenarios: vec![
                RinScenario { d5: 0.75, d3: 1.25 },
                RinScenario { d5: 0.75, d3: 2.25 },
                RinScenario { d5: 1.5, d3: 2.0 },
                RinScenario { d5: 1.5, d3: 3.0 },
            ],
        }
    }

    fn validate(&self, book_life: u32) -> Result<(), AnalysisError> {
        if self.durations.iter().any(|d| *d > book_life) {
            return Err(AnalysisError::InvalidAxis("45Z duration exceeds book life".into()));
        }
        if self.lcfs_prices.iter().any(|p| !(*p >= 0.0)) {
            return Err(AnalysisError::InvalidAxis("negative LCFS price".into()));
        }
        if self.rin_scenarios.iter().any(|r| !(r.d3 >= 0.0 && r.d5 >= 0.0)) {
            return Err(AnalysisError::InvalidAxis("negative RIN price".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Winner {
    Fossil,
    Pathway(String),
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winner::Fossil => f.write_str("FOSSIL"),
            Winner::Pathway(id) => f.write_str(id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierCell {
    pub rin: RinScenario,
    pub z45_years: u32,
    pub lcfs_price: f64,
    pub winner: Winner,
    /// $/gal per pathway, in pathway order.
    pub lcof: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frontier {
    pub fossil_price: f64,
    pub cells: Vec<FrontierCell>,
}

impl Frontier {
    pub fn panel(&self, rin: RinScenario) -> impl Iterator<Item = &FrontierCell> {
        self.cells.iter().filter(move |c| c.rin == rin)
    }

    pub fn winner_at(&self, rin: RinScenario, z45_years: u32, lcfs_price: f64) -> Option<&Winner> {
        self.cells
            .iter()
            .find(|c| c.rin == rin && c.z45_years == z45_years && c.lcfs_price == lcfs_price)
            .map(|c| &c.winner)
    }
}

/// Cheapest option among fossil at `fossil_price` and each pathway. Ties go to
/// fossil, then to the lowest pathway number.
pub fn pick_winner(fossil_price: f64, lcof: &[(String, f64)], order: &[u32]) -> Winner {
    let mut best = (Winner::Fossil, fossil_price, 0u32);
    for ((id, v), idx) in lcof.iter().zip(order) {
        let better = *v < best.1 || (*v == best.1 && best.0 != Winner::Fossil && *idx < best.2);
        if better {
            best = (Winner::Pathway(id.clone()), *v, *idx);
        }
    }
    best.0
}

/// Winner of every cell of the grid. Cells are evaluated in parallel and
/// returned in axis order.
pub fn competitiveness_frontier(ds: &Dataset, axes: &SweepAxes, fossil_price: f64) -> Result<Frontier, AnalysisError> {
    if !(fossil_price > 0.0) {
        return Err(AnalysisError::InvalidAxis("fossil price must be positive".into()));
    }
    axes.validate(ds.finance.book_life_years)?;
    let mut pathways: Vec<&PathwayChain> = ds.pathways_of(Product::Slf).collect();
    pathways.sort_by_key(|p| p.index());
    let order: Vec<u32> = pathways.iter().map(|p| p.index()).collect();
    let mut grid = Vec::new();
    for rin in &axes.rin_scenarios {
        for &d in &axes.durations {
            for &l in &axes.lcfs_prices {
                grid.push((*rin, d, l));
            }
        }
    }
    let cells = grid
        .par_iter()
        .map(|&(rin, d, l)| {
            let scenario = FuelCreditScenario::baseline().with_z45(d).with_lcfs(l).with_rins(rin.prices());
            let lcof = pathways
                .iter()
                .map(|p| Ok((p.id.clone(), lcof_slf(ds, p, &scenario)?.net)))
                .collect::<Result<Vec<_>, LcofError>>()?;
            let winner = pick_winner(fossil_price, &lcof, &order);
            Ok(FrontierCell { rin, z45_years: d, lcfs_price: l, winner, lcof })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(Frontier { fossil_price, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares through `points`.
pub fn fit_subsidy_line(points: &[(f64, f64)]) -> Result<Line, AnalysisError> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(AnalysisError::DegeneratePoints);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * (1.0 + mx.abs()) {
        return Err(AnalysisError::DegeneratePoints);
    }
    let slope = sxy / sxx;
    Ok(Line { slope, intercept: my - slope * mx })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsidyPoint {
    pub pathway: String,
    /// kgCO2e/kg below gray hydrogen.
    pub ci_reduction: f64,
    /// $/kg.
    pub subsidy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsidyRegression {
    pub points: Vec<SubsidyPoint>,
    /// Fit through the reforming pathways; slope in $/kgCO2e.
    pub line: Line,
    /// $/t for the slope.
    pub slope_per_tonne: f64,
    /// Electrolytic hydrogen subsidy per tonne avoided, $/t.
    pub electrolysis_total: f64,
    /// Part of that not explained by the fitted line, $/t.
    pub electrolysis_bonus: f64,
}

/// Hydrogen plant credits against CI reduction from unabated reforming.
pub fn subsidy_regression(ds: &Dataset, reforming: &[&str], reference: &str, electrolysis: &str) -> Result<SubsidyRegression, AnalysisError> {
    let ref_ci = lcof_h2(ds, ds.pathway(reference)?)?.ci;
    let point = |id: &str| -> Result<SubsidyPoint, AnalysisError> {
        let b = lcof_h2(ds, ds.pathway(id)?)?;
        Ok(SubsidyPoint { pathway: id.to_string(), ci_reduction: ref_ci - b.ci, subsidy: -b.credits() })
    };
    let mut points = vec![point(reference)?];
    for id in reforming {
        if *id != reference {
            points.push(point(id)?);
        }
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.ci_reduction, p.subsidy)).collect();
    let line = fit_subsidy_line(&xy)?;
    let e = point(electrolysis)?;
    let total = e.subsidy / e.ci_reduction * 1000.0;
    points.push(e);
    Ok(SubsidyRegression {
        slope_per_tonne: line.slope * 1000.0,
        electrolysis_total: total,
        electrolysis_bonus: total - line.slope * 1000.0,
        points,
        line,
    })
}

/// P1–P3 fitted against P1, P4 as the electrolytic case.
pub fn standard_subsidy_regression(ds: &Dataset) -> Result<SubsidyRegression, AnalysisError> {
    subsidy_regression(ds, &["P1", "P2", "P3"], "P1", "P4")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SaleConvention {
    /// Sold CO2 still pays transport and storage.
    RetainsTransportStorage,
    /// Sold CO2 avoids transport and storage.
    AvoidsTransportStorage,
}

/// Sale price of captured biogenic CO2 at which `high` costs the same as `low`, $/t.
/// Bisection to 0.01 $/t.
pub fn breakeven_biogenic_co2_price(
    ds: &Dataset,
    high: &str,
    low: &str,
    sold_fraction: f64,
    convention: SaleConvention,
) -> Result<f64, AnalysisError> {
    let hp = ds.pathway(high)?;
    let target = lcof_h2(ds, ds.pathway(low)?)?.net;
    let base = lcof_h2(ds, hp)?.net;
    let fac = hp.hydrogen_facility().expect("hydrogen pathway");
    let tech = fac.technology.as_ref().expect("hydrogen plant");
    let per_kg = ds.constants.h2_gj_per_kg();
    let sold_t_per_kg = hydrogen_plant_carbon(fac, tech, 0.0).captured / 1000.0 * sold_fraction * per_kg;
    let avoided = match convention {
        SaleConvention::RetainsTransportStorage => 0.0,
        SaleConvention::AvoidsTransportStorage => sold_t_per_kg * ds.market.co2_transport_storage(),
    };
    let f = |price: f64| base - avoided - price * sold_t_per_kg - target;
    if f(0.0) <= 0.0 || sold_t_per_kg <= 0.0 {
        return Err(AnalysisError::NoCrossing { high: high.into(), low: low.into() });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(AnalysisError::NoCrossing { high: high.into(), low: low.into() });
        }
    }
    while hi - lo > 0.005 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakevenReport {
    pub retains_transport_storage: f64,
    pub avoids_transport_storage: f64,
}

/// P6 against P1 with 95% of captured CO2 sold, both conventions.
pub fn standard_breakeven(ds: &Dataset) -> Result<BreakevenReport, AnalysisError> {
    Ok(BreakevenReport {
        retains_transport_storage: breakeven_biogenic_co2_price(ds, "P6", "P1", 0.95, SaleConvention::RetainsTransportStorage)?,
        avoids_transport_storage: breakeven_biogenic_co2_price(ds, "P6", "P1", 0.95, SaleConvention::AvoidsTransportStorage)?,
    })
}

/// Economics of a biomass-to-fuel plant per tonne of biomass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyParams {
    pub plant: BiomassFuelPlant,
    pub gal_per_mmbtu: f64,
    /// $/gal, un-derated.
    pub z45_rate: f64,
    pub fuel_price: f64,
    /// $/t biomass.
    pub biomass_cost: f64,
    /// $/t biomass at 50% efficiency.
    pub fixed_base: f64,
    pub reference_eta: f64,
    /// $/MMBtu.
    pub vom_per_mmbtu: f64,
    /// $/t CO2.
    pub transport_storage: f64,
}

impl Default for EfficiencyParams {
    fn default() -> Self {
        EfficiencyParams {
            plant: BiomassFuelPlant::default(),
            gal_per_mmbtu: 7.9,
            z45_rate: 1.62,
            fuel_price: 2.2,
            biomass_cost: 121.0,
            fixed_base: 218.0,
            reference_eta: 0.5,
            vom_per_mmbtu: 5.43,
            transport_storage: 28.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyCase {
    pub eta: f64,
    /// Fixed-cost reduction per 10 points of efficiency lost.
    pub n: f64,
    /// kgCO2e/MMBtu.
    pub ci: f64,
    pub credit_45z: f64,
    pub revenue_slf: f64,
    pub biomass: f64,
    pub fixed: f64,
    pub vom: f64,
    pub co2_ts: f64,
    pub net_value: f64,
}

impl EfficiencyParams {
    pub fn case(&self, eta: f64, n: f64) -> EfficiencyCase {
        let e = self.plant.energy(eta);
        let ci = self.plant.ci(eta);
        let gallons = e * self.gal_per_mmbtu;
        let credit_45z = gallons * ((50.0 - ci) / 50.0).max(0.0) * self.z45_rate;
        let revenue_slf = gallons * self.fuel_price;
        let fixed = ((eta - self.reference_eta) * n / 0.1 + 1.0) * self.fixed_base;
        let vom = e * self.vom_per_mmbtu;
        let co2_ts = self.plant.captured(eta).abs() / 1000.0 * self.transport_storage;
        let net_value = credit_45z + revenue_slf - self.biomass_cost - fixed - vom - co2_ts;
        EfficiencyCase { eta, n, ci, credit_45z, revenue_slf, biomass: self.biomass_cost, fixed, vom, co2_ts, net_value }
    }

    /// Fixed-cost cut, as a fraction of the base, that lifts the net value at
    /// `eta` to the value at the reference efficiency.
    pub fn required_fixed_reduction(&self, eta: f64) -> f64 {
        let reference = self.case(self.reference_eta, 0.0).net_value;
        let low = self.case(eta, 0.0).net_value;
        (reference - low) / self.fixed_base
    }
}

pub fn efficiency_incentive_analysis(params: &EfficiencyParams, etas: &[f64], n: f64) -> Vec<EfficiencyCase> {
    etas.iter().map(|&eta| params.case(eta, n)).collect()
}

/// (max − min) net value over the cases, relative to the first case.
pub fn net_value_spread(cases: &[EfficiencyCase]) -> f64 {
    let max = cases.iter().map(|c| c.net_value).fold(f64::NEG_INFINITY, f64::max);
    let min = cases.iter().map(|c| c.net_value).fold(f64::INFINITY, f64::min);
    cases.first().map_or(0.0, |c| (max - min) / c.net_value.abs())
}

pub const STUDY_ETAS: [f64; 4] = [0.5, 0.4, 0.3, 0.2];

#[cfg(test)]
mod tests {
    use super::*;

    fn ds() -> Dataset {
        Dataset::default_dataset()
    }

    #[test]
    fn duration_sweep() {
        let ds = ds();
        let curves = sweep_45z_duration(&ds, &(0..=15).collect::<Vec<_>>(), &FuelCreditScenario::baseline()).unwrap();
        assert_eq!(curves.len(), 9);
        for c in &curves {
            for w in c.points.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-12);
            }
            let base = lcof_slf(&ds, ds.pathway(&c.pathway).unwrap(), &FuelCreditScenario::baseline()).unwrap().net;
            assert_eq!(c.at(0), Some(base));
        }
        let p14 = curves.iter().find(|c| c.pathway == "P14").unwrap();
        assert!(p14.points.iter().all(|p| p.1 == p14.points[0].1));
        let p13 = curves.iter().find(|c| c.pathway == "P13").unwrap();
        assert_eq!(p13.min_duration_at_or_below(3.72), Some(5));
        assert!(sweep_45z_duration(&ds, &[16], &FuelCreditScenario::baseline()).is_err());
    }

    #[test]
    fn tie_breaks() {
        let l = vec![("P12".to_string(), 2.0), ("P13".to_string(), 2.0)];
        assert_eq!(pick_winner(2.0, &l, &[12, 13]), Winner::Fossil);
        assert_eq!(pick_winner(2.5, &l, &[12, 13]), Winner::Pathway("P12".into()));
        assert_eq!(pick_winner(2.5, &[("P13".into(), 2.0), ("P12".into(), 2.0)], &[13, 12]), Winner::Pathway("P12".into()));
    }

    #[test]
    fn single_cell() {
        let ds = ds();
        let axes = SweepAxes { durations: vec![0], lcfs_prices: vec![0.0], rin_scenarios: vec![RinScenario { d5: 0.0, d3: 0.0 }] };
        let f = competitiveness_frontier(&ds, &axes, 2.2).unwrap();
        assert_eq!(f.cells.len(), 1);
        assert_eq!(f.cells[0].winner, Winner::Fossil);
        assert!(competitiveness_frontier(&ds, &axes, 0.0).is_err());
    }

    #[test]
    fn regression() {
        let r = standard_subsidy_regression(&ds()).unwrap();
        assert!((r.slope_per_tonne - 76.0).abs() < 1.0);
        assert!((r.electrolysis_total - 217.6).abs() < 1.0);
        assert!((r.electrolysis_bonus - 141.6).abs() < 1.5);
        assert!(matches!(fit_subsidy_line(&[(1.0, 2.0), (1.0, 2.0)]), Err(AnalysisError::DegeneratePoints)));
        assert!(matches!(fit_subsidy_line(&[(1.0, 2.0)]), Err(AnalysisError::DegeneratePoints)));
        let l = fit_subsidy_line(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((l.slope - 2.0).abs() < 1e-12 && (l.intercept - 1.0).abs() < 1e-12);
    }

    #[test]
    fn breakeven() {
        let ds = ds();
        let r = standard_breakeven(&ds).unwrap();
        assert!((r.retains_transport_storage - 50.2).abs() < 0.2);
        assert!((r.avoids_transport_storage - 22.2).abs() < 0.2);
        assert!(matches!(
            breakeven_biogenic_co2_price(&ds, "P1", "P6", 0.95, SaleConvention::RetainsTransportStorage),
            Err(AnalysisError::NoCrossing { .. })
        ));
        let mut dear = ds.clone();
        dear.market.co2_transport *= 2.0;
        dear.market.co2_storage *= 2.0;
        let r2 = breakeven_biogenic_co2_price(&dear, "P6", "P1", 0.95, SaleConvention::RetainsTransportStorage).unwrap();
        assert!(r2 > r.retains_transport_storage);
    }

    #[test]
    fn efficiency_components() {
        let p = EfficiencyParams::default();
        assert_eq!(p.case(0.5, 0.095).fixed, 218.0);
        assert!((p.case(0.4, 0.095).fixed - 197.29).abs() < 1e-9);
        assert_eq!(p.case(0.2, 0.095).biomass, 121.0);
        let cases = efficiency_incentive_analysis(&p, &STUDY_ETAS, 0.095);
        for c in &cases {
            let sum = c.credit_45z + c.revenue_slf - c.biomass - c.fixed - c.vom - c.co2_ts;
            assert_eq!(c.net_value, sum);
        }
        assert!(net_value_spread(&cases) <= 0.05);
        assert!((p.required_fixed_reduction(0.2) - 0.2898).abs() < 1e-3);
    }
}
