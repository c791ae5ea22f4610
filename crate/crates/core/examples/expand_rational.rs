//! Continued fraction of a rational with its convergents and cylinder interval.
//!
//! Run with `cargo run --example expand_rational [num den]`.

use cflab::cf::{convergents, expand_rational, fundamental_interval, rational_to_f64};

fn main() -> cflab::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (num, den) = match args[..] {
        [n, d] => (n, d),
        _ => (113, 355),
    };
    let seq = expand_rational(num, den, 64)?;
    println!("{num}/{den} = {:?}", seq.terms());
    println!("  {:>3}  {:>6}  {:>12}  {:>12}", "n", "a_n", "p_n", "q_n");
    for (i, (c, a)) in convergents(&seq, seq.len())?
        .iter()
        .zip(seq.terms())
        .enumerate()
    {
        println!("  {:>3}  {:>6}  {:>12}  {:>12}", i + 1, a, c.p, c.q);
    }
    let iv = fundamental_interval(&seq, seq.len())?;
    println!(
        "cylinder [{}, {}] of length {} ({:.3e})",
        iv.left,
        iv.right,
        iv.length,
        rational_to_f64(&iv.length)
    );
    Ok(())
}
