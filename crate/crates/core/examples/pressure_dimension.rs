//! Dimension roots for `F₁, F₂, F₃, E₃` under exponential growth, with the
//! `s_m(B)` upper bounds and the block-ladder construction at `B = 2`.
//!
//! Run with `cargo run --release --example pressure_dimension`.

use cflab::growth::GrowthFunction;
use cflab::pressure::{
    default_s_m_truncation, hausdorff_dim, s_m_oracle, shulga_hussain_dims, transfer_pressure,
    x_functions, DimSet, Potential, PressureSolverParams,
};

fn main() -> cflab::Result<()> {
    let params = PressureSolverParams::default();

    println!("P(s) at s = 1 over growing alphabets");
    for n in [100, 1_000, 10_000] {
        println!("  N={n:>6}  P={:.3e}", transfer_pressure(1.0, n, &params)?);
    }

    for base in [1.05, 2.0, 10.0, 1e6] {
        let phi = GrowthFunction::exponential(base)?;
        print!("B={base:<8}");
        for set in [DimSet::F1, DimSet::F2, DimSet::F3, DimSet::E(3)] {
            let r = hausdorff_dim(set, &phi, &params)?;
            print!("  {set}={:.6}", r.s);
        }
        println!();
    }

    let b: f64 = 2.0;
    let f3 = hausdorff_dim(DimSet::F3, &GrowthFunction::exponential(b)?, &params)?;
    for step in &f3.diagnostics {
        println!("  N={:>6} root={:.8}", step.alphabet, step.root);
    }
    for m in 1..=3 {
        let s = s_m_oracle(b.ln(), m, &Potential::G3, default_s_m_truncation(m), 1e-7)?;
        println!("s_{m}(2) = {s:.6}");
    }

    let (x1, x2, x3) = x_functions(f3.s);
    let ladder = [b.powf(x1), b.powf(x2), b.powf(x3), b.powf(x1)];
    let (d, min) = shulga_hussain_dims(&ladder, &params)?;
    println!("d_i = {d:.6?}, min = {min:.6}, F3 root = {:.6}", f3.s);
    Ok(())
}
