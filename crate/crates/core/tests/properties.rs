use fuelpath::analysis::{fit_subsidy_line, pick_winner, Winner};
use fuelpath::emissions::chain_emissions;
use fuelpath::finance::{annuity_factor, derating_factor};
use fuelpath::lcof::{lcof_h2, lcof_slf, select_credits, CreditOption};
use fuelpath::policy::{FuelCreditScenario, Instrument, RinPrices};
use fuelpath::quantities::{FuelProperties, Quantity};
use fuelpath::techdata::{load_dataset, ClaimRule, Dataset, Product, DEFAULT_DATASET_JSON};
use proptest::prelude::*;
use serde_json::{json, Value};

fn slf_ids() -> Vec<String> {
    Dataset::default_dataset().pathways_of(Product::Slf).map(|p| p.id.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derating_is_a_fraction_rising_with_term(r in 0.01f64..0.2, n in 2u32..40, m in 1u32..40) {
        let m = m.min(n);
        let df = derating_factor(r, m, n).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&df));
        if m < n {
            prop_assert!(derating_factor(r, m + 1, n).unwrap() > df);
        } else {
            prop_assert!((df - 1.0).abs() < 1e-12);
        }
        let brute: f64 = (1..=m).map(|t| (1.0 + r).powi(-(t as i32))).sum();
        prop_assert!((annuity_factor(r, m) - brute).abs() < 1e-9);
    }

    #[test]
    fn energy_round_trips_through_bases(v in 1e-3f64..1e4, hhv in 10.0f64..150.0, ratio in 1.0f64..1.3) {
        let props = FuelProperties::new(hhv, ratio, 20.0);
        let q = Quantity::new(v, "GJ_HHV").unwrap();
        let back = q.to("MMBtu_LHV", Some(&props)).unwrap().to("t", Some(&props)).unwrap().to("GJ_HHV", Some(&props)).unwrap();
        prop_assert!((back.value - v).abs() <= 1e-9 * v);
    }

    #[test]
    fn best_of_never_takes_less_than_any_option(a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let options = [
            CreditOption { instrument: Instrument::Credit45V, value: a },
            CreditOption { instrument: Instrument::Credit45Q, value: b },
        ];
        let rule = ClaimRule::BestOf(vec![Instrument::Credit45Q, Instrument::Credit45V]);
        let taken = select_credits(&rule, &options);
        prop_assert_eq!(taken.len(), 1);
        prop_assert!(taken[0].value >= a && taken[0].value >= b);
    }

    #[test]
    fn slf_cost_falls_with_every_subsidy(
        idx in 0usize..9,
        years in 0u32..15,
        lcfs in 0.0f64..250.0,
        d5 in 0.0f64..3.0,
        d3 in 0.0f64..4.0,
        bump in 0.01f64..1.0,
    ) {
        let ds = Dataset::default_dataset();
        let p = ds.pathway(&slf_ids()[idx]).unwrap();
        let rins = RinPrices { d5, d3, d6: d5 };
        let base = FuelCreditScenario::baseline().with_z45(years).with_lcfs(lcfs).with_rins(rins);
        let net = |s: FuelCreditScenario| lcof_slf(&ds, p, &s).unwrap().net;
        let v = net(base);
        prop_assert!(net(base.with_z45(years + 1)) <= v + 1e-12);
        prop_assert!(net(base.with_lcfs(lcfs + bump * 10.0)) <= v + 1e-12);
        let more = RinPrices { d5: d5 + bump, d3: d3 + bump, d6: d5 + bump };
        prop_assert!(net(base.with_rins(more)) <= v + 1e-12);
    }

    #[test]
    fn winner_is_never_dearer_than_fossil(fossil in 0.5f64..5.0, costs in prop::collection::vec(0.0f64..6.0, 1..9)) {
        let lcof: Vec<(String, f64)> = costs.iter().enumerate().map(|(i, v)| (format!("P{}", i + 7), *v)).collect();
        let order: Vec<u32> = (7..7 + costs.len() as u32).collect();
        match pick_winner(fossil, &lcof, &order) {
            Winner::Fossil => prop_assert!(costs.iter().all(|c| *c >= fossil)),
            Winner::Pathway(id) => {
                let v = lcof.iter().find(|(p, _)| *p == id).unwrap().1;
                prop_assert!(v < fossil);
                prop_assert!(costs.iter().all(|c| *c >= v));
            }
        }
    }

    #[test]
    fn line_fit_recovers_exact_lines(slope in -500.0f64..500.0, intercept in -5.0f64..5.0, xs in prop::collection::btree_set(0i32..100, 2..8)) {
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x as f64 / 10.0, slope * x as f64 / 10.0 + intercept)).collect();
        let line = fit_subsidy_line(&pts).unwrap();
        prop_assert!((line.slope - slope).abs() < 1e-6 * (1.0 + slope.abs()));
        prop_assert!((line.intercept - intercept).abs() < 1e-6 * (1.0 + intercept.abs() + slope.abs()));
    }

    #[test]
    fn carbon_balances_for_any_capture_rate(tech in 0usize..11, capture in 0.0f64..=1.0) {
        let mut doc: Value = serde_json::from_str(DEFAULT_DATASET_JSON).unwrap();
        doc["technologies"][tech]["capture_rate"] = json!(capture);
        let ds = load_dataset(&doc.to_string()).unwrap();
        for p in &ds.pathways {
            let e = chain_emissions(&ds, p).unwrap();
            prop_assert!(e.ledger.imbalance() <= 1e-9, "{} imbalance {}", p.id, e.ledger.imbalance());
        }
    }

    #[test]
    fn cheaper_gas_never_raises_reforming_cost(price in 0.5f64..12.0) {
        let mut doc: Value = serde_json::from_str(DEFAULT_DATASET_JSON).unwrap();
        doc["feedstocks"][0]["price"] = json!({ "value": price, "unit": "USD/GJ_HHV" });
        let lo = load_dataset(&doc.to_string()).unwrap();
        doc["feedstocks"][0]["price"] = json!({ "value": price + 0.5, "unit": "USD/GJ_HHV" });
        let hi = load_dataset(&doc.to_string()).unwrap();
        for id in ["P1", "P2", "P3"] {
            let a = lcof_h2(&lo, lo.pathway(id).unwrap()).unwrap().net;
            let b = lcof_h2(&hi, hi.pathway(id).unwrap()).unwrap().net;
            prop_assert!(a < b);
        }
    }
}
