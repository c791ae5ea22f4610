//! Partial quotients of Lebesgue-random numbers against the Gauss–Kuzmin law.
//!
//! Run with `cargo run --release --example gauss_kuzmin [streams]`.

use cflab::cf::LebesgueStream;
use cflab::harness::sample_rng;

fn main() {
    let streams: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200_000);
    let depth = 30;
    let mut first = [0u64; 11];
    let mut last = [0u64; 11];
    let mut log_sum = 0.0;
    for id in 0..streams {
        let digits: Vec<u64> = LebesgueStream::new(sample_rng(2024, id))
            .take(depth)
            .collect();
        if digits[0] <= 10 {
            first[digits[0] as usize] += 1;
        }
        if digits[depth - 1] <= 10 {
            last[digits[depth - 1] as usize] += 1;
        }
        log_sum += digits.iter().map(|&a| (a as f64).ln()).sum::<f64>() / depth as f64;
    }
    let n = streams as f64;
    println!(
        "  {:>2}  {:>9}  {:>9}  {:>9}  {:>9}",
        "k", "P(a1=k)", "1/k(k+1)", "P(a30=k)", "Gauss"
    );
    for k in 1..=10u64 {
        let kf = k as f64;
        let gauss = (1.0 + 1.0 / (kf * (kf + 2.0))).log2();
        println!(
            "  {k:>2}  {:>9.5}  {:>9.5}  {:>9.5}  {:>9.5}",
            first[k as usize] as f64 / n,
            1.0 / (kf * (kf + 1.0)),
            last[k as usize] as f64 / n,
            gauss
        );
    }
    println!(
        "geometric mean of a1..a30, averaged: {:.4} (Khinchin's constant 2.6854)",
        (log_sum / n).exp()
    );
}
