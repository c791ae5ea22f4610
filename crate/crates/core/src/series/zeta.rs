//! Riemann zeta values and tails for real `t > 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Terms summed directly before the Euler–Maclaurin correction in [`zeta`].
pub const DIRECT_TERMS: u64 = 100_000;

/// Start of the Euler–Maclaurin expansion in [`zeta_tail`].
const TAIL_CUTOFF: u64 = 64;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// A real value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounded {
    pub value: f64,
    pub error: f64,
}

fn check_exponent(t: f64) -> Result<()> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "zeta sum diverges for exponent t = {t}; need t > 1"
        )));
    }
    Ok(())
}

/// `B_{2j} / (2j)!` for `j = 1..=7`.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    7.0 / 74724249600.0,
];

/// `Σ_{v ≥ n} v^{−t}` by Euler–Maclaurin at `n`, six correction terms.
fn euler_maclaurin(t: f64, n: f64) -> Bounded {
    let p = n.powf(-t);
    let mut s = CompensatedSum::default();
    s.add(n * p / (t - 1.0));
    s.add(p / 2.0);
    // term j is c_j · t(t+1)⋯(t+2j−2) · n^{−t−2j+1}
    let mut term = t * p / n;
    let mut error = 0.0;
    for (i, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if i + 1 == BERNOULLI_OVER_FACTORIAL.len() {
            // first omitted term bounds the remainder of a completely
            // monotone summand
            error = (c * term).abs();
            break;
        }
        s.add(c * term);
        let k = 2.0 * (i + 1) as f64;
        term *= (t + k - 1.0) * (t + k) / (n * n);
    }
    let value = s.value();
    Bounded {
        value,
        error: error + 4.0 * f64::EPSILON * value,
    }
}

/// `ζ(t)` for `t > 1`; `π²/6` exactly at `t = 2`.
pub fn zeta(t: f64) -> Result<Bounded> {
    check_exponent(t)?;
    if t == 2.0 {
        let value = PI * PI / 6.0;
        return Ok(Bounded {
            value,
            error: f64::EPSILON * value,
        });
    }
    let mut s: CompensatedSum = (1..DIRECT_TERMS).map(|v| (v as f64).powf(-t)).collect();
    let tail = euler_maclaurin(t, DIRECT_TERMS as f64);
    s.add(tail.value);
    let value = s.value();
    Ok(Bounded {
        value,
        error: tail.error + 4.0 * f64::EPSILON * value,
    })
}

/// `Σ_{v ≥ m} v^{−t}` for `t > 1`; `m = 0` is treated as `1`.
pub fn zeta_tail(t: f64, m: u64) -> Result<Bounded> {
    check_exponent(t)?;
    let m = m.max(1);
    if m == 1 {
        return zeta(t);
    }
    let start = m.max(TAIL_CUTOFF);
    let mut s: CompensatedSum = (m..start).map(|v| (v as f64).powf(-t)).collect();
    let tail = euler_maclaurin(t, start as f64);
    s.add(tail.value);
    let value = s.value();
    Ok(Bounded {
        value,
        error: tail.error + 4.0 * f64::EPSILON * value,
    })
}
