//! Reference values for the bundled dataset, pinned tightly so any change in
//! the cost or carbon model shows up here first.

use fuelpath::analysis::{standard_breakeven, standard_subsidy_regression, sweep_45z_duration};
use fuelpath::emissions::{h2_ci, slf_ci};
use fuelpath::finance::derating_factor;
use fuelpath::lcof::{lcof_h2, lcof_h2_dual_credit, lcof_slf, lscm, LcofError, LscmOptions};
use fuelpath::policy::FuelCreditScenario;
use fuelpath::techdata::Dataset;

const TOL: f64 = 5e-4;

fn close(got: f64, want: f64, what: &str) {
    assert!((got - want).abs() <= TOL, "{what}: got {got:.5}, want {want}");
}

#[test]
fn derating_factors() {
    close(derating_factor(0.1, 10, 15).unwrap(), 0.8078, "DF10");
    close(derating_factor(0.1, 12, 15).unwrap(), 0.8958, "DF12");
    close(derating_factor(0.1, 15, 15).unwrap(), 1.0, "DF15");
}

#[test]
fn hydrogen_costs() {
    let ds = Dataset::default_dataset();
    for (id, net, ci) in [
        ("P1", 1.2796, 11.1433),
        ("P2", 1.2314, 3.2563),
        ("P3", 1.1558, 2.8542),
        ("P4", 0.3068, 0.0),
        ("P5", 3.0689, 1.2840),
        ("P6", 2.2009, -18.0453),
    ] {
        let p = ds.pathway(id).unwrap();
        let b = lcof_h2(&ds, p).unwrap();
        close(b.net, net, id);
        close(b.ci, ci, id);
        close(h2_ci(&ds, p).unwrap(), ci, id);
        close(b.items.iter().map(|i| i.value).sum::<f64>(), b.net, id);
    }
    close(lcof_h2_dual_credit(&ds, ds.pathway("P6").unwrap()).unwrap().net, 0.7291, "P6 dual");
}

#[test]
fn liquid_fuel_costs() {
    let ds = Dataset::default_dataset();
    let base = FuelCreditScenario::baseline();
    for (id, net) in [
        ("P7", 4.2519),
        ("P8", 4.1427),
        ("P9", 2.9160),
        ("P10", 5.3616),
        ("P11", 4.1075),
        ("P12", 5.4494),
        ("P13", 5.9138),
        ("P14", 3.7046),
        ("P15", 3.5530),
    ] {
        let p = ds.pathway(id).unwrap();
        let b = lcof_slf(&ds, p, &base).unwrap();
        close(b.net, net, id);
        close(b.ci, slf_ci(&ds, p).unwrap(), id);
    }
}

#[test]
fn duration_thresholds() {
    let ds = Dataset::default_dataset();
    let years: Vec<u32> = (0..=15).collect();
    let curves = sweep_45z_duration(&ds, &years, &FuelCreditScenario::baseline()).unwrap();
    let get = |id: &str| curves.iter().find(|c| c.pathway == id).unwrap();
    close(get("P11").at(1).unwrap(), 3.4051, "P11 1y");
    close(get("P13").at(5).unwrap(), 3.5875, "P13 5y");
    assert_eq!(get("P11").min_duration_at_or_below(3.72), Some(1));
    assert_eq!(get("P13").min_duration_at_or_below(3.72), Some(5));
    assert_eq!(get("P10").min_duration_at_or_below(3.72), None);
}

#[test]
fn mitigation_costs() {
    let ds = Dataset::default_dataset();
    let opts = LscmOptions::default();
    let m = |id: &str| lscm(&ds, ds.pathway(id).unwrap(), &opts);
    close(m("P2").unwrap().lscm, 70.1757, "P2");
    close(m("P4").unwrap().lscm, 316.7300, "P4");
    close(m("P9").unwrap().lscm, 724.2574, "P9");
    assert!(matches!(m("P1"), Err(LcofError::NoMitigation { .. })));
    assert!(matches!(m("P14"), Err(LcofError::NotApplicable(_))));
    let dual = lscm(&ds, ds.pathway("P6").unwrap(), &LscmOptions { dual_h2_credit: true, ..opts }).unwrap();
    close(dual.lscm, 134.1138, "P6 dual");
}

#[test]
fn regression_and_breakeven() {
    let ds = Dataset::default_dataset();
    let r = standard_subsidy_regression(&ds).unwrap();
    assert!((r.slope_per_tonne - 75.954).abs() < 0.01);
    assert!((r.electrolysis_total - 217.489).abs() < 0.01);
    assert!((r.electrolysis_bonus - 141.535).abs() < 0.01);
    let b = standard_breakeven(&ds).unwrap();
    assert!((b.retains_transport_storage - 50.2).abs() < 0.1, "{}", b.retains_transport_storage);
    assert!((b.avoids_transport_storage - 22.2).abs() < 0.1, "{}", b.avoids_transport_storage);
}
