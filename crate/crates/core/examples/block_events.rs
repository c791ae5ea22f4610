//! First hitting times of the single-block and two-block events on random
//! streams, counted from `n = 1000` so that small thresholds do not trivially fire.
//!
//! Run with `cargo run --release --example block_events`.

use cflab::cf::LebesgueStream;
use cflab::events::hitting_times_from;
use cflab::growth::GrowthFunction;
use cflab::harness::sample_rng;

fn main() -> cflab::Result<()> {
    let horizon = 100_000;
    for (ell, params) in [(1, "1,1"), (2, "1,1"), (3, "1,2")] {
        let phi = GrowthFunction::parse("powerlog", params)?;
        println!("ell = {ell}, phi = powerlog({params})");
        println!(
            "  {:>6}  {:>8}  {:>8}  {:>6}  {:>6}  {:>7}",
            "stream", "tau_E", "tau_F", "j", "k", "overlap"
        );
        for id in 0..8 {
            let stream = LebesgueStream::new(sample_rng(11, id));
            let t = hitting_times_from(stream, ell, &phi, 1000, horizon)?;
            let show = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
            match t.f_event {
                Some(f) => println!(
                    "  {id:>6}  {:>8}  {:>8}  {:>6}  {:>6}  {:>7}",
                    show(t.e_event),
                    f.tau,
                    f.record.j,
                    f.record.k,
                    f.record.overlap
                ),
                None => println!("  {id:>6}  {:>8}  {:>8}", show(t.e_event), "-"),
            }
        }
    }
    Ok(())
}
