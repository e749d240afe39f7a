//! Report commands behind the `fuelpath` binary.
//!
//! Each command evaluates the model and writes CSV or JSON tables. Numbers are
//! printed with four decimals and rows come out in a fixed order, so repeated
//! runs produce identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};
use thiserror::Error;

use crate::analysis::{
    competitiveness_frontier, standard_breakeven, standard_subsidy_regression, sweep_45z_duration, AnalysisError,
    RinScenario, SweepAxes,
};
use crate::lcof::{lcof_h2, lcof_h2_dual_credit, lcof_slf, lscm, CostItem, LcofBreakdown, LcofError, LscmOptions};
use crate::policy::{FuelCreditScenario, PolicyError, RinPrices};
use crate::techdata::{Dataset, DatasetError, Product};

pub mod verify;

pub use verify::{acceptance_checks, cmd_verify, Check, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Lcof(#[from] LcofError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("writing {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<PolicyError> for CliError {
    fn from(e: PolicyError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Settings for one command run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `None` uses the dataset shipped with the crate.
    pub dataset_path: Option<PathBuf>,
    /// 45Z term; `None` means 0 for costs and 15 for mitigation.
    pub z45_years: Option<u32>,
    pub lcfs_price: f64,
    pub rin_d5: Option<f64>,
    pub rin_d3: Option<f64>,
    pub rin_d6: Option<f64>,
    /// $/gal; `None` uses the dataset benchmark.
    pub fossil_price: Option<f64>,
    pub p6_dual_credit: bool,
    pub out_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset_path: None,
            z45_years: None,
            lcfs_price: 0.0,
            rin_d5: None,
            rin_d3: None,
            rin_d6: None,
            fossil_price: None,
            p6_dual_credit: false,
            out_dir: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn load_dataset(&self) -> Result<Dataset, CliError> {
        match &self.dataset_path {
            Some(p) => Ok(Dataset::from_path(p)?),
            None => Ok(Dataset::default_dataset()),
        }
    }

    pub fn rin_prices(&self) -> RinPrices {
        let d5 = self.rin_d5.unwrap_or(0.0);
        RinPrices { d5, d3: self.rin_d3.unwrap_or(0.0), d6: self.rin_d6.unwrap_or(d5) }
    }

    /// Fuel-credit scenario for cost reports.
    pub fn scenario(&self, ds: &Dataset) -> Result<FuelCreditScenario, CliError> {
        let s = FuelCreditScenario::baseline()
            .with_z45(self.z45_years.unwrap_or(0))
            .with_lcfs(self.lcfs_price)
            .with_rins(self.rin_prices());
        s.validate(ds.finance.book_life_years)?;
        Ok(s)
    }

    pub fn validate(&self, ds: &Dataset) -> Result<(), CliError> {
        self.scenario(ds)?;
        if let Some(p) = self.fossil_price {
            if !(p > 0.0) {
                return Err(CliError::Validation(format!("fossil price {p} must be positive")));
            }
        }
        let rins = self.rin_prices();
        if [rins.d3, rins.d5, rins.d6].iter().any(|r| !(*r >= 0.0)) {
            return Err(CliError::Validation("RIN prices must be non-negative".into()));
        }
        Ok(())
    }
}

/// A table cell: a number printed to four decimals, or text.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fixed4(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Four-decimal rendering with negative zero folded to zero.
pub fn fixed4(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(headers: &[&str]) -> Table {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf-8 input"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (h, c) in self.headers.iter().zip(r) {
                    let v = match c {
                        Cell::Num(x) => serde_json::from_str(&fixed4(*x)).unwrap_or(Value::Null),
                        Cell::Text(s) => Value::String(s.clone()),
                    };
                    m.insert(h.clone(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

fn write_table(dir: &Path, stem: &str, table: &Table, format: Format) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.display().to_string(), source: e })?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let body = table.render(format)?;
    fs::write(&path, body).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    Ok(path)
}

fn breakdown_table(rows: &[LcofBreakdown], ci_header: &str) -> Table {
    let mut headers = vec!["pathway"];
    headers.extend(CostItem::ALL.iter().map(|c| c.label()));
    headers.extend(["gross", "net", ci_header]);
    let mut t = Table::new(&headers);
    for b in rows {
        let mut r = vec![Cell::text(&b.pathway)];
        r.extend(b.items.iter().map(|i| Cell::Num(i.value)));
        r.extend([Cell::Num(b.gross()), Cell::Num(b.net), Cell::Num(b.ci)]);
        t.rows.push(r);
    }
    t
}

/// Hydrogen and liquid fuel breakdown tables.
pub fn lcof_tables(ds: &Dataset, config: &RunConfig) -> Result<(Table, Table), CliError> {
    config.validate(ds)?;
    let scenario = config.scenario(ds)?;
    let mut h2 = Vec::new();
    for p in ds.pathways_of(Product::H2) {
        let b = if config.p6_dual_credit && p.id == "P6" { lcof_h2_dual_credit(ds, p)? } else { lcof_h2(ds, p)? };
        h2.push(b);
    }
    let slf = ds
        .pathways_of(Product::Slf)
        .map(|p| lcof_slf(ds, p, &scenario))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((breakdown_table(&h2, "ci_kgco2e_per_kg"), breakdown_table(&slf, "ci_kgco2e_per_mmbtu")))
}

/// Writes `h2_lcof` and `slf_lcof`.
pub fn cmd_lcof(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let ds = config.load_dataset()?;
    let (h2, slf) = lcof_tables(&ds, config)?;
    Ok(vec![
        write_table(&config.out_dir, "h2_lcof", &h2, config.format)?,
        write_table(&config.out_dir, "slf_lcof", &slf, config.format)?,
    ])
}

/// `sweep_45z` plus one frontier table per RIN panel, keyed by file stem.
pub fn sweep_tables(ds: &Dataset, config: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    config.validate(ds)?;
    let base = FuelCreditScenario::baseline().with_lcfs(config.lcfs_price).with_rins(config.rin_prices());
    let durations: Vec<u32> = (0..=ds.finance.book_life_years).collect();
    let curves = sweep_45z_duration(ds, &durations, &base)?;
    let mut sweep = Table::new(&["pathway", "z45_years", "lcof"]);
    for c in &curves {
        for (d, v) in &c.points {
            sweep.rows.push(vec![Cell::text(&c.pathway), Cell::text(d.to_string()), Cell::Num(*v)]);
        }
    }
    let mut out = vec![("sweep_45z".to_string(), sweep)];

    let mut axes = SweepAxes::standard();
    axes.durations = durations;
    if let (Some(d5), Some(d3)) = (config.rin_d5, config.rin_d3) {
        axes.rin_scenarios = vec![RinScenario { d5, d3 }];
    }
    let fossil = config.fossil_price.unwrap_or(ds.benchmarks.fossil_jet_price);
    let frontier = competitiveness_frontier(ds, &axes, fossil)?;
    for rin in &axes.rin_scenarios {
        let cells: Vec<_> = frontier.panel(*rin).collect();
        let mut headers = vec!["d5".to_string(), "d3".to_string(), "z45_years".to_string(), "lcfs_price".to_string(), "winner".to_string()];
        if let Some(first) = cells.first() {
            headers.extend(first.lcof.iter().map(|(id, _)| id.clone()));
        }
        let mut t = Table { headers, rows: Vec::new() };
        for c in cells {
            let mut r = vec![
                Cell::Num(rin.d5),
                Cell::Num(rin.d3),
                Cell::text(c.z45_years.to_string()),
                Cell::Num(c.lcfs_price),
                Cell::text(c.winner.to_string()),
            ];
            r.extend(c.lcof.iter().map(|(_, v)| Cell::Num(*v)));
            t.rows.push(r);
        }
        out.push((format!("frontier_{}", rin.tag()), t));
    }
    Ok(out)
}

/// Writes `sweep_45z` and `frontier_<d5>_<d3>` files.
pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let ds = config.load_dataset()?;
    sweep_tables(&ds, config)?
        .iter()
        .map(|(stem, t)| write_table(&config.out_dir, stem, t, config.format))
        .collect()
}

/// Position of a value against a band.
pub fn classify(v: f64, band: (f64, f64)) -> &'static str {
    if v < band.0 {
        "below"
    } else if v > band.1 {
        "above"
    } else {
        "within"
    }
}

/// Mitigation subsidy per pathway, the hydrogen subsidy regression and the CO2 breakeven.
pub fn lscm_tables(ds: &Dataset, config: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    config.validate(ds)?;
    let b30 = ds.benchmarks.scc_2030;
    let b40 = ds.benchmarks.scc_2040;
    let mut t = Table::new(&[
        "pathway",
        "lscm",
        "total_subsidy",
        "ci_delta",
        "scc_2030_low",
        "scc_2030_high",
        "scc_2040_low",
        "scc_2040_high",
        "class_2030",
        "class_2040",
    ]);
    let opts = LscmOptions { z45_years: config.z45_years.unwrap_or(ds.finance.book_life_years), dual_h2_credit: false };
    let bands = [Cell::Num(b30.0), Cell::Num(b30.1), Cell::Num(b40.0), Cell::Num(b40.1)];
    for p in &ds.pathways {
        let dual = config.p6_dual_credit && p.id == "P6";
        let o = LscmOptions { dual_h2_credit: dual, ..opts };
        let mut r = vec![Cell::text(&p.id)];
        match lscm(ds, p, &o) {
            Ok(m) => {
                r.extend([Cell::Num(m.lscm), Cell::Num(m.total_subsidy), Cell::Num(m.ci_delta)]);
                r.extend(bands.iter().cloned());
                r.extend([Cell::text(classify(m.lscm, b30)), Cell::text(classify(m.lscm, b40))]);
            }
            Err(LcofError::NoMitigation { .. } | LcofError::NotApplicable(_)) => {
                r.extend((0..3).map(|_| Cell::text("N/A")));
                r.extend(bands.iter().cloned());
                r.extend([Cell::text("N/A"), Cell::text("N/A")]);
            }
            Err(e) => return Err(e.into()),
        }
        t.rows.push(r);
    }

    let reg = standard_subsidy_regression(ds)?;
    let mut s = Table::new(&["pathway", "ci_reduction", "subsidy"]);
    for p in &reg.points {
        s.rows.push(vec![Cell::text(&p.pathway), Cell::Num(p.ci_reduction), Cell::Num(p.subsidy)]);
    }
    s.rows.push(vec![Cell::text("fit_slope_per_t"), Cell::text(""), Cell::Num(reg.slope_per_tonne)]);
    s.rows.push(vec![Cell::text("fit_intercept"), Cell::text(""), Cell::Num(reg.line.intercept)]);
    s.rows.push(vec![Cell::text("P4_total_per_t"), Cell::text(""), Cell::Num(reg.electrolysis_total)]);
    s.rows.push(vec![Cell::text("P4_bonus_per_t"), Cell::text(""), Cell::Num(reg.electrolysis_bonus)]);

    let be = standard_breakeven(ds)?;
    let mut b = Table::new(&["convention", "breakeven_co2_price"]);
    b.rows.push(vec![Cell::text("retains_transport_storage"), Cell::Num(be.retains_transport_storage)]);
    b.rows.push(vec![Cell::text("avoids_transport_storage"), Cell::Num(be.avoids_transport_storage)]);

    Ok(vec![("lscm".into(), t), ("subsidy_regression".into(), s), ("co2_sale_breakeven".into(), b)])
}

/// Writes `lscm`, `subsidy_regression` and `co2_sale_breakeven`.
pub fn cmd_lscm(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let ds = config.load_dataset()?;
    lscm_tables(&ds, config)?
        .iter()
        .map(|(stem, t)| write_table(&config.out_dir, stem, t, config.format))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fixed4(-0.00001), "0.0000");
        assert_eq!(fixed4(1.23456), "1.2346");
        assert_eq!(fixed4(-2.5), "-2.5000");
    }

    #[test]
    fn lcof_rows() {
        let ds = Dataset::default_dataset();
        let (h2, slf) = lcof_tables(&ds, &RunConfig::default()).unwrap();
        assert_eq!(h2.rows.len() + slf.rows.len(), 15);
        assert_eq!(h2.headers.len(), 16);
        let p4 = &h2.rows[3];
        assert_eq!(p4[0], Cell::text("P4"));
        let net = h2.headers.iter().position(|h| h == "net").unwrap();
        assert_eq!(p4[net].render(), "0.3068");
        let dual = RunConfig { p6_dual_credit: true, ..Default::default() };
        let (h2d, _) = lcof_tables(&ds, &dual).unwrap();
        assert_eq!(h2d.rows[5][net].render(), "0.7291");
    }

    #[test]
    fn json_numbers() {
        let mut t = Table::new(&["a", "b"]);
        t.rows.push(vec![Cell::text("x"), Cell::Num(1.0 / 3.0)]);
        assert_eq!(t.to_json(), "[\n  {\n    \"a\": \"x\",\n    \"b\": 0.3333\n  }\n]\n");
    }

    #[test]
    fn rejects_bad_overrides() {
        let ds = Dataset::default_dataset();
        let bad = RunConfig { z45_years: Some(16), ..Default::default() };
        assert!(matches!(bad.validate(&ds), Err(CliError::Validation(_))));
        let bad = RunConfig { fossil_price: Some(0.0), ..Default::default() };
        assert!(bad.validate(&ds).is_err());
        let bad = RunConfig { rin_d5: Some(-1.0), ..Default::default() };
        assert!(bad.validate(&ds).is_err());
    }

    #[test]
    fn lscm_rows() {
        let ds = Dataset::default_dataset();
        let tables = lscm_tables(&ds, &RunConfig::default()).unwrap();
        let t = &tables[0].1;
        let row = |id: &str| t.rows.iter().find(|r| r[0] == Cell::text(id)).unwrap().clone();
        assert_eq!(row("P1")[1], Cell::text("N/A"));
        assert_eq!(row("P14")[1], Cell::text("N/A"));
        assert_eq!(row("P4")[8], Cell::text("within"));
        assert_eq!(row("P9")[9], Cell::text("above"));
        assert_eq!(row("P2")[8], Cell::text("below"));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(100.0, (140.0, 380.0)), "below");
        assert_eq!(classify(140.0, (140.0, 380.0)), "within");
        assert_eq!(classify(381.0, (140.0, 380.0)), "above");
    }
}
