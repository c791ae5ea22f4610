//! Ratio scans of the lattice series against their asymptotic orders.
//!
//! Run with `cargo run --release --example series_scan`.

use cflab::series::{asymptotic_ratio_scan, geometric_grid, SeriesId, SeriesParams};

fn main() -> cflab::Result<()> {
    let grid = geometric_grid(1e2, 1e6, 9);
    let cases = [
        (SeriesId::S01, "ell=2"),
        (SeriesId::S01, "ell=3"),
        (SeriesId::S02, "r=2,j=1"),
        (SeriesId::S02, "r=1,j=2"),
        (SeriesId::S03, "ell=1"),
        (SeriesId::S04, "ell=2"),
        (SeriesId::S05, "ell=2,s=0.5"),
        (SeriesId::S06, "t=1.5"),
        (SeriesId::S07, "t=1.5"),
    ];
    for (id, params) in cases {
        let p: SeriesParams = params.parse()?;
        let scan = asymptotic_ratio_scan(id, &p, &grid)?;
        println!("{id} ({params})");
        for row in &scan.rows {
            println!(
                "  M={:>10.0}  value={:.6e}  ratio={:.4}",
                row.m, row.value, row.ratio
            );
        }
        println!(
            "  top decade ratio in [{:.4}, {:.4}], within band: {}",
            scan.top_decade_min, scan.top_decade_max, scan.within_band
        );
    }
    Ok(())
}
