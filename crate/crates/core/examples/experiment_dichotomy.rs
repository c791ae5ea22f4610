//! Hitting fractions of the two-block event for a divergent and a convergent threshold.
//!
//! Run with `cargo run --release --example experiment_dichotomy [samples]`.

use cflab::harness::{run_dichotomy, ExperimentConfig};

fn main() -> cflab::Result<()> {
    let samples: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1000);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    // φ(n) is small at small n, so first hits from n = 1 saturate at once;
    // starting the search later shows the difference between the two laws
    let cases = [
        ("n log^2 n", "1,2", 1),
        ("n^1.2", "1.2,0", 1),
        ("n log^2 n", "1,2", 1000),
        ("n^1.2", "1.2,0", 1000),
    ];
    for (label, params, from) in cases {
        let cfg = ExperimentConfig::parse(&format!(
            "kind = dichotomy\nell = 3\nphi_family = powerlog\nphi_params = {params}\n\
             horizon = 100000\nfrom = {from}\nsamples = {samples}\nseed = 42\n\
             checkpoints = 1000,10000,100000\nthreads = {threads}\n"
        ))?;
        let start = std::time::Instant::now();
        let table = run_dichotomy(&cfg)?;
        println!(
            "phi(n) = {label}, ell = 3, n >= {from}, S = {samples}  ({:.1?})",
            start.elapsed()
        );
        println!("  {:>8}  {:>8}  {:>8}", "n", "F", "E");
        for row in &table.rows {
            println!("  {:>8}  {:>8.4}  {:>8.4}", row[0], row[1], row[2]);
        }
    }
    Ok(())
}
