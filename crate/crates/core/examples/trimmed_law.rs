//! Medians of the trimmed block sums `(S_{n,ℓ} − max)/(n log^ℓ n)` against `1/(ℓ log 2)`.
//!
//! Run with `cargo run --release --example trimmed_law [samples]`.

use cflab::harness::{run_trimmed, ExperimentConfig};

fn main() -> cflab::Result<()> {
    let samples: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    for ell in 1..=3usize {
        let cfg = ExperimentConfig::parse(&format!(
            "kind = trimmed\nell = {ell}\nhorizon = 1000000\nsamples = {samples}\nseed = 7\n\
             checkpoints = 10000,100000,1000000\nthreads = {threads}\n"
        ))?;
        let target = 1.0 / (ell as f64 * std::f64::consts::LN_2);
        let start = std::time::Instant::now();
        let table = run_trimmed(&cfg)?;
        println!("ell = {ell}, target {target:.5}  ({:.1?})", start.elapsed());
        println!(
            "  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}",
            "n", "mean", "median", "q10", "q90", "rel err"
        );
        for r in &table.rows {
            println!(
                "  {:>8}  {:>8.4}  {:>8.4}  {:>8.4}  {:>8.4}  {:>+8.4}",
                r[0],
                r[1],
                r[2],
                r[3],
                r[4],
                r[2] / target - 1.0
            );
        }
    }
    Ok(())
}
