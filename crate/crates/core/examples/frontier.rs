//! Cheapest fuel over 45Z duration and LCFS price, one map per RIN panel.
//!
//! Each character is the winner of one cell: `.` is fossil jet, digits are
//! the last digit of the pathway number (`1` is P11, `5` is P15).

use fuelpath::analysis::{competitiveness_frontier, SweepAxes, Winner};
use fuelpath::techdata::Dataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = Dataset::default_dataset();
    let axes = SweepAxes::standard();
    let frontier = competitiveness_frontier(&ds, &axes, ds.benchmarks.fossil_jet_price)?;

    for rin in &axes.rin_scenarios {
        println!("D5 {} / D3 {}  (rows: 45Z years, columns: LCFS 0..200 $/t)", rin.d5, rin.d3);
        for &y in axes.durations.iter().rev() {
            let row: String = axes
                .lcfs_prices
                .iter()
                .map(|&l| match frontier.winner_at(*rin, y, l) {
                    Some(Winner::Fossil) | None => '.',
                    Some(Winner::Pathway(id)) => id.chars().last().unwrap_or('?'),
                })
                .collect();
            println!("{y:>3} {row}");
        }
        println!();
    }
    Ok(())
}
