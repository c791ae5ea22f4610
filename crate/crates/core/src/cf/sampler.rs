//! Exact sequential sampling of the partial quotients of a uniformly random
//! `x ∈ [0, 1)`.
//!
//! Conditioned on `a₁, …, a_n`, the point `x` is uniform on the cylinder
//! `I_n`, of length `1 / (q_n (q_n + q_{n−1}))`. The sub-cylinder with
//! `a_{n+1} = k` has continuant `q_{n+1} = k q_n + q_{n−1}`, so the ratio of
//! the two lengths depends on the past only through `r = q_{n−1} / q_n`:
//!
//! ```text
//! P(a_{n+1} = k | a₁, …, a_n) = (1 + r) / ((k + r)(k + 1 + r))
//! P(a_{n+1} ≤ k | a₁, …, a_n) = 1 − (1 + r) / (k + 1 + r)
//! ```
//!
//! The probabilities telescope to one. Inverting the distribution function
//! at `u ∈ (0, 1)` gives `a = ⌈(1 + r) u / (1 − u)⌉` (at least one), and the
//! state advances by `r' = q_n / q_{n+1} = 1 / (a + r)`.
//!
//! The ratio is held as an `f64`. It stays in `[0, 1)`, where the map
//! `r ↦ 1 / (a + r)` is a contraction, so rounding errors do not accumulate.

use rand_xoshiro::rand_core::RngCore;

use crate::error::{Error, Result};

/// `r = q_{n−1} / q_n` after `depth` quotients have been drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuantRatioState {
    r: f64,
    depth: u64,
}

impl Default for ContinuantRatioState {
    fn default() -> Self {
        Self::new()
    }
}

impl ContinuantRatioState {
    pub fn new() -> Self {
        ContinuantRatioState { r: 0.0, depth: 0 }
    }

    /// State with a prescribed ratio, for tests and conditional queries.
    pub fn with_ratio(r: f64, depth: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::domain(format!("continuant ratio {r} not in [0, 1)")));
        }
        Ok(ContinuantRatioState { r, depth })
    }

    pub fn ratio(&self) -> f64 {
        self.r
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// Conditional probability that the next quotient equals `k`.
    pub fn probability(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let k = k as f64;
        (1.0 + self.r) / ((k + self.r) * (k + 1.0 + self.r))
    }

    /// Conditional probability that the next quotient is at most `k`.
    pub fn cdf(&self, k: u64) -> f64 {
        1.0 - (1.0 + self.r) / (k as f64 + 1.0 + self.r)
    }

    /// State after appending quotient `a`.
    pub fn advance(self, a: u64) -> Self {
        ContinuantRatioState {
            r: 1.0 / (a as f64 + self.r),
            depth: self.depth + 1,
        }
    }
}

/// Draws the next partial quotient by inversion at `u ∈ (0, 1)`.
pub fn sample_next_quotient(
    state: ContinuantRatioState,
    u: f64,
) -> Result<(u64, ContinuantRatioState)> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("uniform variate {u} not in (0, 1)")));
    }
    Ok(draw(state, u))
}

#[inline]
fn draw(state: ContinuantRatioState, u: f64) -> (u64, ContinuantRatioState) {
    let t = (1.0 + state.r) * u / (1.0 - u);
    // saturating cast; t ≤ 2^54 for u drawn by `open_unit`
    let a = (t.ceil() as u64).max(1);
    (a, state.advance(a))
}

/// Uniform variate in the open interval `(0, 1)` with 53 random bits.
#[inline]
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Endless stream of the partial quotients of a Lebesgue-random number.
#[derive(Clone, Debug)]
pub struct LebesgueStream<R> {
    rng: R,
    state: ContinuantRatioState,
}

impl<R: RngCore> LebesgueStream<R> {
    pub fn new(rng: R) -> Self {
        LebesgueStream {
            rng,
            state: ContinuantRatioState::new(),
        }
    }

    pub fn state(&self) -> ContinuantRatioState {
        self.state
    }
}

impl<R: RngCore> Iterator for LebesgueStream<R> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let u = open_unit(&mut self.rng);
        let (a, next) = draw(self.state, u);
        self.state = next;
        Some(a)
    }
}
