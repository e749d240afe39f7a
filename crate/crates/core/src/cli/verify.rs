//! Reference checks run by `fuelpath verify`, grouped by acceptance criterion.

use std::fmt::Write as _;

use crate::analysis::{
    competitiveness_frontier, efficiency_incentive_analysis, net_value_spread, standard_subsidy_regression,
    sweep_45z_duration, EfficiencyParams, Frontier, RinScenario, SweepAxes, Winner, STUDY_ETAS,
};
use crate::emissions::{chain_emissions, ethanol_ccs_ci, h2_ci};
use crate::finance::{annuity_factor, derating_factor};
use crate::lcof::{hydrogen_facility_cost, lcof_h2, lcof_h2_dual_credit, lcof_slf, lscm, LscmOptions};
use crate::policy::{dac_co2_net_cost, methane_fee_per_gj, net_input_price_45y, validate_claims, FuelCreditScenario, Instrument, RinPrices};
use crate::techdata::derive::{
    derive_compression_cost, derive_ethanol_to_jet_params, derive_integrated_capex, derive_integrated_ifi,
    integrated_mole_factor, verify_derivations,
};
use crate::techdata::{ClaimRule, Dataset, Product};

use super::{lcof_tables, CliError, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub value: String,
    pub expected: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Pass state of each criterion 1–11.
    pub fn criteria(&self) -> Vec<(u8, bool)> {
        (1..=11).map(|k| (k, self.checks.iter().filter(|c| c.criterion == k).all(|c| c.passed))).collect()
    }

    pub fn render(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
        let mut s = String::new();
        let _ = writeln!(s, "{:<3} {:<w$}  {:>14}  {:<24} result", "#", "check", "value", "expected");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<3} {:<w$}  {:>14}  {:<24} {}",
                c.criterion,
                c.name,
                c.value,
                c.expected,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn near(&mut self, k: u8, name: impl Into<String>, value: f64, target: f64, tol: f64) {
        self.0.push(Check {
            criterion: k,
            name: name.into(),
            value: format!("{value:.4}"),
            expected: if tol < 1e-6 { format!("{target:.4} ± {tol:e}") } else { format!("{target} ± {tol}") },
            passed: (value - target).abs() <= tol,
        });
    }

    fn within(&mut self, k: u8, name: impl Into<String>, value: f64, lo: f64, hi: f64) {
        self.0.push(Check {
            criterion: k,
            name: name.into(),
            value: format!("{value:.4}"),
            expected: format!("[{lo}, {hi}]"),
            passed: (lo..=hi).contains(&value),
        });
    }

    fn flag(&mut self, k: u8, name: impl Into<String>, value: impl Into<String>, expected: impl Into<String>, passed: bool) {
        self.0.push(Check { criterion: k, name: name.into(), value: value.into(), expected: expected.into(), passed });
    }

    fn error(&mut self, k: u8, name: &str, e: impl std::fmt::Display) {
        self.flag(k, name, "error", e.to_string(), false);
    }
}

fn brute_annuity(r: f64, n: u32) -> f64 {
    (1..=n).map(|t| (1.0 + r).powi(-(t as i32))).sum()
}

fn winner_in(f: &Frontier, rin: RinScenario, pred: impl Fn(u32, f64) -> bool, want: &Winner) -> (usize, usize) {
    let cells: Vec<_> = f.panel(rin).filter(|c| pred(c.z45_years, c.lcfs_price)).collect();
    (cells.iter().filter(|c| &c.winner == want).count(), cells.len())
}

/// Every reference check against `ds`.
pub fn acceptance_checks(ds: &Dataset) -> Vec<Check> {
    let mut c = Checks(Vec::new());
    criterion_1(&mut c, ds);
    criterion_2(&mut c, ds);
    criterion_3(&mut c, ds);
    criterion_4(&mut c, ds);
    criterion_5(&mut c, ds);
    criterion_6(&mut c, ds);
    criterion_7(&mut c, ds);
    criterion_8(&mut c, ds);
    criterion_9(&mut c);
    criterion_10(&mut c, ds);
    criterion_11(&mut c, ds);
    c.0
}

fn criterion_1(c: &mut Checks, ds: &Dataset) {
    let f = &ds.finance;
    for (m, target) in [(10, 0.808), (12, 0.896)] {
        match derating_factor(f.wacc, m, f.book_life_years) {
            Ok(df) => {
                c.near(1, format!("DF({}, {m}, {})", f.wacc, f.book_life_years), df, target, 0.005);
                let brute = brute_annuity(f.wacc, m) / brute_annuity(f.wacc, f.book_life_years);
                c.near(1, format!("DF {m} vs annuity sum"), df, brute, 1e-12);
            }
            Err(e) => c.error(1, "derating", e),
        }
    }
    c.near(1, "closed-form annuity 15y", annuity_factor(f.wacc, 15), brute_annuity(f.wacc, 15), 1e-12);
}

fn criterion_2(c: &mut Checks, ds: &Dataset) {
    for (id, target) in [("P1", 1.29), ("P2", 1.24), ("P3", 1.16), ("P4", 0.31), ("P5", 3.09), ("P6", 2.22)] {
        match ds.pathway(id).map_err(|e| e.to_string()).and_then(|p| lcof_h2(ds, p).map_err(|e| e.to_string())) {
            Ok(b) => c.near(2, format!("{id} LCOF $/kg"), b.net, target, 0.07),
            Err(e) => c.error(2, id, e),
        }
    }
    match ds.pathway("P6").map_err(|e| e.to_string()).and_then(|p| lcof_h2_dual_credit(ds, p).map_err(|e| e.to_string())) {
        Ok(b) => c.near(2, "P6 dual-credit LCOF $/kg", b.net, 0.84, 0.15),
        Err(e) => c.error(2, "P6 dual", e),
    }
}

fn criterion_3(c: &mut Checks, ds: &Dataset) {
    for (id, target, tol) in [("P2", 3.3, 0.2), ("P3", 2.9, 0.2), ("P5", 1.3, 0.1), ("P1", 11.0, 0.3)] {
        match ds.pathway(id).map_err(|e| e.to_string()).and_then(|p| h2_ci(ds, p).map_err(|e| e.to_string())) {
            Ok(v) => c.near(3, format!("{id} CI kgCO2e/kg"), v, target, tol),
            Err(e) => c.error(3, id, e),
        }
    }
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for p in &ds.pathways {
        match chain_emissions(ds, p) {
            Ok(e) => worst = worst.max(e.ledger.imbalance()),
            Err(_) => failed.push(p.id.clone()),
        }
    }
    c.flag(3, "carbon ledger balance", format!("{worst:.1e}"), "<= 1e-9", worst <= 1e-9 && failed.is_empty());
}

fn criterion_4(c: &mut Checks, ds: &Dataset) {
    let base = FuelCreditScenario::baseline();
    let net = |id: &str| -> Result<f64, String> {
        let p = ds.pathway(id).map_err(|e| e.to_string())?;
        lcof_slf(ds, p, &base).map(|b| b.net).map_err(|e| e.to_string())
    };
    for (id, target, tol) in [("P9", 2.9, 0.15), ("P7", 4.3, 0.2), ("P8", 4.2, 0.2), ("P14", 3.8, 0.2), ("P15", 3.6, 0.2)] {
        match net(id) {
            Ok(v) => c.near(4, format!("{id} LCOF $/gal"), v, target, tol),
            Err(e) => c.error(4, id, e),
        }
    }
    for id in ["P10", "P11", "P12", "P13"] {
        match net(id) {
            Ok(v) => c.within(4, format!("{id} LCOF $/gal"), v, 4.2, 6.0),
            Err(e) => c.error(4, id, e),
        }
    }
}

fn criterion_5(c: &mut Checks, ds: &Dataset) {
    let durations: Vec<u32> = (0..=ds.finance.book_life_years).collect();
    let band = ds.benchmarks.jet_price_high;
    match sweep_45z_duration(ds, &durations, &FuelCreditScenario::baseline()) {
        Ok(curves) => {
            for (id, want) in [("P11", 2), ("P13", 5)] {
                let got = curves.iter().find(|k| k.pathway == id).and_then(|k| k.min_duration_at_or_below(band));
                let shown = got.map_or("none".to_string(), |d| format!("{d} y"));
                c.flag(5, format!("{id} min 45Z years to <= {band}"), shown, format!("{want} y"), got == Some(want));
            }
        }
        Err(e) => c.error(5, "duration sweep", e),
    }
}

fn criterion_6(c: &mut Checks, ds: &Dataset) {
    let fossil = ds.benchmarks.fossil_jet_price;
    let f = match competitiveness_frontier(ds, &SweepAxes::standard(), fossil) {
        Ok(f) => f,
        Err(e) => return c.error(6, "frontier", e),
    };
    let low = RinScenario { d5: 0.75, d3: 1.25 };
    let high = RinScenario { d5: 1.5, d3: 3.0 };
    let p = |s: &str| Winner::Pathway(s.to_string());
    let mut share = |name: &str, rin, pred: &dyn Fn(u32, f64) -> bool, w: Winner, min_share: f64| {
        let (hit, n) = winner_in(&f, rin, pred, &w);
        let passed = n > 0 && hit as f64 >= min_share * n as f64;
        c.flag(6, name, format!("{hit}/{n}"), if min_share >= 1.0 { format!("all {w}") } else { format!("majority {w}") }, passed);
    };
    share("(0.75,1.25) lcfs<25, dur<2: FOSSIL", low, &|d, l| l < 25.0 && d < 2, Winner::Fossil, 1.0);
    share("(0.75,1.25) lcfs 25-75, dur<2: P15", low, &|d, l| (25.0..=75.0).contains(&l) && d < 2, p("P15"), 1.0);
    share("(0.75,1.25) high corner: P11", low, &|d, l| d == 15 && l == 200.0, p("P11"), 1.0);
    share("(1.5,3) low corner: P12", high, &|d, l| d == 0 && l == 0.0, p("P12"), 1.0);
    share("(1.5,3) high corner: P13", high, &|d, l| d == 15 && l == 200.0, p("P13"), 1.0);
    share("(1.5,3) dur>=8, lcfs>=100: P13", high, &|d, l| d >= 8 && l >= 100.0, p("P13"), 0.5);
    let allowed = ["FOSSIL", "P11", "P12", "P13", "P15"];
    let mut seen: Vec<String> = f.cells.iter().map(|k| k.winner.to_string()).collect();
    seen.sort();
    seen.dedup();
    let ok = seen.iter().all(|w| allowed.contains(&w.as_str()));
    c.flag(6, "winner set", seen.join(" "), "subset of FOSSIL P11 P12 P13 P15", ok);
}

fn criterion_7(c: &mut Checks, ds: &Dataset) {
    match standard_subsidy_regression(ds) {
        Ok(r) => {
            c.near(7, "P1-P3 fit slope $/t", r.slope_per_tonne, 76.0, 5.0);
            c.near(7, "P4 total $/t", r.electrolysis_total, 217.0, 10.0);
            c.near(7, "P4 bonus $/t", r.electrolysis_bonus, 141.0, 12.0);
        }
        Err(e) => c.error(7, "regression", e),
    }
}

fn criterion_8(c: &mut Checks, ds: &Dataset) {
    let band = ds.benchmarks.scc_2030;
    let opts = LscmOptions::default();
    let value = |id: &str, o: &LscmOptions| -> Result<f64, String> {
        let p = ds.pathway(id).map_err(|e| e.to_string())?;
        lscm(ds, p, o).map(|m| m.lscm).map_err(|e| e.to_string())
    };
    for id in ["P2", "P3", "P5", "P6"] {
        match value(id, &opts) {
            Ok(v) => c.flag(8, format!("{id} LSCM below SCC"), format!("{v:.4}"), format!("< {}", band.0), v < band.0),
            Err(e) => c.error(8, id, e),
        }
    }
    match value("P4", &opts) {
        Ok(v) => c.within(8, "P4 LSCM within SCC", v, band.0, band.1),
        Err(e) => c.error(8, "P4", e),
    }
    let top = ds.benchmarks.scc_2040.1;
    match value("P9", &opts) {
        Ok(v) => c.flag(8, "P9 LSCM above SCC", format!("{v:.4}"), format!("> {top}"), v > top),
        Err(e) => c.error(8, "P9", e),
    }
    match value("P6", &LscmOptions { dual_h2_credit: true, ..opts }) {
        Ok(v) => {
            c.near(8, "P6 dual-credit LSCM", v, 130.0, 15.0);
            c.flag(8, "P6 dual-credit below SCC", format!("{v:.4}"), format!("< {}", band.0), v < band.0);
        }
        Err(e) => c.error(8, "P6 dual", e),
    }
}

fn criterion_9(c: &mut Checks) {
    let p = EfficiencyParams::default();
    let cases = efficiency_incentive_analysis(&p, &STUDY_ETAS, 0.095);
    let spread = net_value_spread(&cases);
    c.flag(9, "net value spread, n = 9.5%", format!("{:.2}%", spread * 100.0), "<= 5%", spread <= 0.05);
    c.flag(9, "biomass $/t", format!("{:.4}", cases[0].biomass), "121", cases.iter().all(|k| k.biomass == 121.0));
    c.flag(9, "fixed at eta 0.5", format!("{:.4}", cases[0].fixed), "218", cases[0].fixed == 218.0);
    let r = p.required_fixed_reduction(0.2);
    c.flag(9, "required fixed cut at eta 0.2", format!("{:.2}%", r * 100.0), ">= 30%", r >= 0.30);
}

fn criterion_10(c: &mut Checks, ds: &Dataset) {
    c.near(10, "integrated IFI", derive_integrated_ifi(1.78, 1.47), 2.02, 0.01);
    let k = integrated_mole_factor();
    c.near(10, "integrated CAPEX", derive_integrated_capex(2482.0, 1004.0, 1.47, k), 3826.0, 5.0);
    c.near(10, "integrated CCS CAPEX", derive_integrated_capex(2587.0, 1004.0, 1.47, k), 3944.0, 5.0);
    let etj = derive_ethanol_to_jet_params();
    c.near(10, "ethanol-to-jet CAPEX $/kW", etj.capex, 258.0, 2.0);
    c.near(10, "ethanol-to-jet IFI", etj.ifi, 1.09, 0.005);
    c.near(10, "CO2 compression $/t", derive_compression_cost().total, 17.0, 0.6);
    let e = ethanol_ccs_ci();
    c.flag(10, "ethanol-CCS CI", format!("{e:.4}"), "18 exactly", e == 18.0);
    let leak = ds.feedstock("natural_gas").and_then(|f| f.methane_leak).unwrap_or(0.0);
    c.near(10, "methane fee $/GJ", methane_fee_per_gj(leak, ds.policy.methane_fee), 0.44, 0.01);
    let f = &ds.finance;
    let p = &ds.policy;
    let dac = ds.feedstock("dac_co2").map_or(f64::NAN, |f| f.price);
    match (f.derating(p.durations.q45), f.derating(p.durations.y45)) {
        (Ok(dq), Ok(dy)) => {
            c.near(10, "net DAC CO2 $/t", dac_co2_net_cost(dac, p.q45_rates.dac_utilization, dq), 164.0, 1.0);
            let el = ds.feedstock("renewable_electricity").map_or(f64::NAN, |f| f.price);
            c.near(10, "net renewable electricity $/MWh", net_input_price_45y(el, p.y45_rate, dy).value, 21.5, 0.2);
        }
        (Err(e), _) | (_, Err(e)) => c.error(10, "derating", e),
    }
    for d in verify_derivations(ds) {
        c.flag(10, format!("dataset row {}", d.name), format!("{:.4}", d.derived), format!("{} ± {}", d.stored, d.tolerance), d.passed());
    }
}

fn criterion_11(c: &mut Checks, ds: &Dataset) {
    // Exclusivity: stacking two exclusive credits on one plant is refused.
    let rejected = ds
        .pathways_of(Product::H2)
        .filter(|p| p.hydrogen_facility().is_some_and(|f| matches!(f.claim, ClaimRule::BestOf(_))))
        .all(|p| validate_claims(&p.with_dual_h2_credit()).is_err());
    let shipped_ok = ds.pathways.iter().all(|p| validate_claims(p).is_ok());
    c.flag(11, "credit exclusivity", if rejected && shipped_ok { "enforced" } else { "violated" }, "enforced", rejected && shipped_ok);

    // Monotone in every subsidy axis.
    let mut monotone = true;
    for p in ds.pathways_of(Product::Slf) {
        let eval = |s: FuelCreditScenario| lcof_slf(ds, p, &s).map(|b| b.net).unwrap_or(f64::NAN);
        let z: Vec<f64> = (0..=15).map(|d| eval(FuelCreditScenario::baseline().with_z45(d))).collect();
        let l: Vec<f64> = (0..=40).map(|i| eval(FuelCreditScenario::baseline().with_lcfs(i as f64 * 5.0))).collect();
        let r: Vec<f64> = (0..=12)
            .map(|i| {
                let x = i as f64 * 0.25;
                eval(FuelCreditScenario::baseline().with_rins(RinPrices { d3: x, d5: x, d6: x }))
            })
            .collect();
        monotone &= [z, l, r].iter().all(|v| v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
    c.flag(11, "LCOF monotone in 45Z, LCFS, RIN", if monotone { "yes" } else { "no" }, "yes", monotone);

    // Max selection dominance.
    let mut dominant = true;
    for p in &ds.pathways {
        for fac in p.facilities.iter().filter(|f| f.technology.as_ref().is_some_and(|t| t.product == Product::H2)) {
            match hydrogen_facility_cost(ds, fac, 0.0) {
                Ok(h) => {
                    let taken: f64 = h.claimed.iter().map(|k| k.value).sum();
                    if matches!(fac.claim, ClaimRule::BestOf(_)) {
                        dominant &= h.options.iter().all(|o| taken >= o.value);
                    }
                }
                Err(_) => dominant = false,
            }
        }
    }
    c.flag(11, "best-of credit dominance", if dominant { "yes" } else { "no" }, "yes", dominant);

    // P11 falls faster than P13 along the duration sweep.
    let durations: Vec<u32> = (0..=15).collect();
    let faster = sweep_45z_duration(ds, &durations, &FuelCreditScenario::baseline()).is_ok_and(|curves| {
        let get = |id: &str| curves.iter().find(|k| k.pathway == id).map(|k| k.points.clone()).unwrap_or_default();
        let (a, b) = (get("P11"), get("P13"));
        !a.is_empty() && a.windows(2).zip(b.windows(2)).all(|(x, y)| x[0].1 - x[1].1 > y[0].1 - y[1].1)
    });
    c.flag(11, "P11 declines faster than P13", if faster { "yes" } else { "no" }, "yes", faster);

    // Ordering with credits, reversed without.
    let base = FuelCreditScenario::baseline();
    let net = |id: &str| ds.pathway(id).ok().and_then(|p| lcof_slf(ds, p, &base).ok());
    let (p10, p11, p12, p13) = (net("P10"), net("P11"), net("P12"), net("P13"));
    let ok = match (p10, p11, p12, p13) {
        (Some(a), Some(b), Some(x), Some(y)) => {
            a.net < x.net && b.net < y.net && a.gross() > x.gross() && b.gross() > y.gross()
        }
        _ => false,
    };
    c.flag(11, "P10/P11 vs P12/P13 ordering reversal", if ok { "yes" } else { "no" }, "yes", ok);

    // Repeated renders are byte-identical.
    let render = || -> Result<String, CliError> {
        let (h, s) = lcof_tables(ds, &RunConfig::default())?;
        Ok(h.to_csv()? + &s.to_csv()? + &h.to_json() + &s.to_json())
    };
    let same = matches!((render(), render()), (Ok(a), Ok(b)) if a == b);
    c.flag(11, "repeated output identical", if same { "yes" } else { "no" }, "yes", same);

    // The dual-credit what-if never leaks into default runs.
    let default_p6 = ds.pathway("P6").ok().and_then(|p| lcof_h2(ds, p).ok());
    let single = default_p6.is_some_and(|b| b.claims.iter().filter(|k| k.instrument != Instrument::Rfs).count() == 1);
    c.flag(11, "P6 default takes one credit", if single { "yes" } else { "no" }, "yes", single);
}

/// Loads the dataset, runs every check and returns the report.
pub fn cmd_verify(config: &RunConfig) -> Result<VerifyReport, CliError> {
    let ds = config.load_dataset()?;
    Ok(VerifyReport { checks: acceptance_checks(&ds) })
}
