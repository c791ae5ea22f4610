//! Computational toolkit for products of consecutive continued-fraction
//! partial quotients.
//!
//! The crate is organised around six subsystems:
//!
//! - [`cf`]: exact expansions, convergents, fundamental intervals, the Gauss
//!   map and an exact sampler for the partial quotients of a
//!   Lebesgue-random number.
//! - [`growth`]: growth functions `φ`, their `(B, b)` constants and the
//!   convergence classification of the zero-one law series.
//! - [`events`]: block-product ledgers, hitting-time detectors for the
//!   limsup sets `E_ℓ(φ)` and `F_ℓ(φ)`, trimmed sums and running maxima.
//! - [`series`]: divisor-function sieves and certified evaluation of the
//!   multiple series controlling the measure estimates.
//! - [`pressure`]: transfer-operator pressure of the Gauss system and the
//!   Hausdorff-dimension solvers built on it.
//! - [`harness`]: seeded, reproducible Monte Carlo experiments with CSV and
//!   manifest output.
//!
//! The [`cli`] module backs the `cflab` binary.

pub mod cf;
pub mod cli;
pub mod error;
pub mod events;
pub mod growth;
pub mod harness;
pub mod natural;
pub mod pressure;
pub mod series;

pub use error::{Error, Result};
