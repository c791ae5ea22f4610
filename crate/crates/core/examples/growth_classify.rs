//! Growth constants and convergence of the zero-one law series for common thresholds.
//!
//! Run with `cargo run --example growth_classify`.

use cflab::growth::{classify_series, growth_constants, GrowthFunction, Theorem};

fn main() -> cflab::Result<()> {
    let cases = [
        ("powerlog", "1,0.5"),
        ("powerlog", "1,1"),
        ("powerlog", "1,2"),
        ("powerlog", "1,3"),
        ("powerlog", "1.2,0"),
        ("exp", "2"),
        ("dexp", "2,3"),
    ];
    let theorems = [
        Theorem::Hwx(1),
        Theorem::Hwx(3),
        Theorem::Ttw,
        Theorem::Tz,
        Theorem::Main3,
    ];
    print!("{:<18} {:>8} {:>5}", "phi", "B", "b");
    for t in theorems {
        print!(" {:>7}", t.label());
    }
    println!();
    for (family, params) in cases {
        let phi = GrowthFunction::parse(family, params)?;
        let c = growth_constants(&phi)?;
        print!(
            "{:<18} {:>8.3} {:>5.2}",
            format!("{family}({params})"),
            c.big_b(),
            c.small_b()
        );
        for t in theorems {
            let mark = match classify_series(&phi, t) {
                cflab::growth::Classification::Convergent => "conv",
                cflab::growth::Classification::Divergent => "div",
                cflab::growth::Classification::Inconclusive => "?",
            };
            print!(" {mark:>7}");
        }
        println!();
    }
    Ok(())
}
