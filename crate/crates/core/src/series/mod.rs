//! Hybrid exact/zeta-tail evaluation of lattice series over products of
//! positive integers, and ratio scans against their asymptotic orders.
//!
//! Every series is grouped on the value `v` of a product, so that an
//! `ℓ`-fold sum collapses to a one-dimensional sum weighted by `d_ℓ(v)`.
//! Finite parts are summed exactly in floating point with compensation;
//! infinite parts come from `ζ(t)^k` minus a finite head.
//!
//! A real threshold `M` is applied to integer products as `v ≥ ⌈M⌉` and
//! `v ≤ ⌊M⌋`.

mod sieve;
mod zeta;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use sieve::{dirichlet_piltz, divisor_table, DivisorSieve, MEMORY_BUDGET};
pub use zeta::{zeta, zeta_tail, Bounded, CompensatedSum, DIRECT_TERMS};

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactFinite,
    HybridTail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: Method,
}

fn check_m(m: f64) -> Result<()> {
    if !m.is_finite() || m < 1.0 {
        return Err(Error::domain(format!("threshold M must be ≥ 1, got {m}")));
    }
    Ok(())
}

/// `⌈M⌉`, the least integer product satisfying `v ≥ M`.
fn ceil_threshold(m: f64) -> Result<usize> {
    check_m(m)?;
    Ok(m.ceil() as usize)
}

fn floor_threshold(m: f64) -> Result<usize> {
    check_m(m)?;
    Ok(m.floor() as usize)
}

fn check_arity(name: &str, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain(format!("{name} must be ≥ 1")));
    }
    Ok(())
}

/// Cumulative `P[c] = Σ_{v<c} d(v)·v^{−t}` for `c = 0..=len`.
fn prefix_sums(d: &[u64], t: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    out.push(0.0);
    let mut acc = CompensatedSum::default();
    for c in 1..=len {
        let v = c - 1;
        if v >= 1 {
            acc.add(d[v] as f64 * weight(v, t));
        }
        out.push(acc.value());
    }
    out
}

#[inline]
fn weight(v: usize, t: f64) -> f64 {
    if t == 2.0 {
        let x = v as f64;
        1.0 / (x * x)
    } else if t == 1.0 {
        1.0 / v as f64
    } else {
        (v as f64).powf(-t)
    }
}

/// `Σ_{v<m} d_k(v) v^{−t}`.
fn head(sieve: &DivisorSieve, k: usize, t: f64, m: usize) -> f64 {
    let d = sieve.level(k);
    (1..m)
        .map(|v| d[v] as f64 * weight(v, t))
        .collect::<CompensatedSum>()
        .value()
}

/// `Σ_{v ≥ m} d_k(v) v^{−t} = ζ(t)^k − head`.
fn hybrid_tail(k: usize, m: usize, t: f64) -> Result<SeriesValue> {
    let z = zeta(t)?;
    let zk = z.value.powi(k as i32);
    let zk_err = k as f64 * z.value.powi(k as i32 - 1) * z.error + 2.0 * k as f64 * EPS * zk;
    if m <= 1 {
        return Ok(SeriesValue {
            value: zk,
            abs_error_bound: zk_err,
            method: Method::HybridTail,
        });
    }
    let sieve = divisor_table(k, m - 1)?;
    let h = head(&sieve, k, t, m);
    Ok(SeriesValue {
        value: zk - h,
        abs_error_bound: zk_err + 8.0 * EPS * (zk + h),
        method: Method::HybridTail,
    })
}

/// `Σ_{a₁⋯a_ℓ ≥ M} (a₁⋯a_ℓ)^{−2}`.
pub fn series_block_tail(ell: usize, m: f64) -> Result<SeriesValue> {
    check_arity("ell", ell)?;
    hybrid_tail(ell, ceil_threshold(m)?, 2.0)
}

/// `Σ_{a₁⋯a_k ≥ M} (a₁⋯a_k)^{−t}` for `t > 1`.
pub fn series_power_tail(k: usize, m: f64, t: f64) -> Result<SeriesValue> {
    check_arity("k", k)?;
    let m = ceil_threshold(m)?;
    zeta(t)?;
    hybrid_tail(k, m, t)
}

/// Sum of `(Πa Πb Πc)^{−2}` over `a ∈ ℕ^r, b ∈ ℕ^j, c ∈ ℕ^r` with
/// `(Πa)(Πb) ≥ M` and `(Πb)(Πc) ≥ M`.
pub fn series_overlap(r: usize, j: usize, m: f64) -> Result<SeriesValue> {
    check_arity("r", r)?;
    check_arity("j", j)?;
    let m = ceil_threshold(m)?;
    let z = zeta(2.0)?.value;
    let total_k = (2 * r + j) as i32;
    let z_all = z.powi(total_k);
    if m <= 1 {
        return Ok(SeriesValue {
            value: z_all,
            abs_error_bound: 4.0 * total_k as f64 * EPS * z_all,
            method: Method::HybridTail,
        });
    }
    let sieve = divisor_table(r.max(j), m - 1)?;
    let zr = z.powi(r as i32);
    let zj = z.powi(j as i32);
    // Πb ≥ M: both constraints hold for all a, c
    let first = z.powi(2 * r as i32) * (zj - head(&sieve, j, 2.0, m));
    // Πb = v < M: Πa ≥ ⌈M/v⌉ and Πc ≥ ⌈M/v⌉ independently
    let pr = prefix_sums(sieve.level(r), 2.0, m);
    let dj = sieve.level(j);
    let second = (1..m)
        .map(|v| {
            let c = m.div_ceil(v);
            let w = zr - pr[c];
            dj[v] as f64 * weight(v, 2.0) * w * w
        })
        .collect::<CompensatedSum>()
        .value();
    Ok(SeriesValue {
        value: first + second,
        abs_error_bound: 48.0 * total_k as f64 * EPS * z_all,
        method: Method::HybridTail,
    })
}

/// `Σ_{a₁⋯a_ℓ ≤ M} (a₁⋯a_ℓ)^{−1}`.
pub fn series_harmonic_box(ell: usize, m: f64) -> Result<SeriesValue> {
    series_power_box(ell, m, 1.0)
}

/// `Σ_{a₁⋯a_ℓ ≤ M} (a₁⋯a_ℓ)^{−s}`, a finite sum.
pub fn series_power_box(ell: usize, m: f64, s: f64) -> Result<SeriesValue> {
    check_arity("ell", ell)?;
    if !s.is_finite() || s < 0.0 {
        return Err(Error::domain(format!("exponent s must be ≥ 0, got {s}")));
    }
    let n = floor_threshold(m)?;
    let sieve = divisor_table(ell, n)?;
    let value = head(&sieve, ell, s, n + 1);
    Ok(SeriesValue {
        value,
        abs_error_bound: 8.0 * EPS * value,
        method: Method::ExactFinite,
    })
}

/// `Σ (a₁⋯a_{ℓ+1})^{−2}` over `a₁⋯a_ℓ < M ≤ a₂⋯a_{ℓ+1}`.
pub fn series_shifted(ell: usize, m: f64) -> Result<SeriesValue> {
    check_arity("ell", ell)?;
    let m = ceil_threshold(m)?;
    if m <= 1 {
        return Ok(SeriesValue {
            value: 0.0,
            abs_error_bound: 0.0,
            method: Method::HybridTail,
        });
    }
    // group on w = a₂⋯a_ℓ; a₁ ≤ ⌊(m−1)/w⌋ and a_{ℓ+1} ≥ ⌈m/w⌉
    let inner = ell - 1;
    let sieve = if inner > 0 {
        Some(divisor_table(inner, m - 1)?)
    } else {
        None
    };
    let h2 = prefix_sums(&vec![1u64; m], 2.0, m);
    let mut small_tails = Vec::new();
    let mut tail = |c: usize| -> Result<f64> {
        const CACHED: usize = 128;
        if c < CACHED {
            if small_tails.is_empty() {
                small_tails = (0..CACHED)
                    .map(|c| zeta_tail(2.0, c as u64).map(|b| b.value))
                    .collect::<Result<Vec<f64>>>()?;
            }
            Ok(small_tails[c])
        } else {
            Ok(zeta_tail(2.0, c as u64)?.value)
        }
    };
    let mut acc = CompensatedSum::default();
    let w_max = if inner == 0 { 1 } else { m - 1 };
    for w in 1..=w_max {
        let dw = match &sieve {
            Some(s) => s.d(inner, w),
            None => 1,
        };
        let a_max = (m - 1) / w;
        if a_max == 0 || dw == 0 {
            continue;
        }
        let first = h2[a_max + 1];
        acc.add(dw as f64 * weight(w, 2.0) * first * tail(m.div_ceil(w))?);
    }
    let value = acc.value();
    let z = zeta(2.0)?.value;
    Ok(SeriesValue {
        value,
        abs_error_bound: 16.0 * EPS * z.powi(ell as i32 + 1),
        method: Method::HybridTail,
    })
}

/// Series with a registered asymptotic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesId {
    /// block tail, `≍ log^{ℓ−1}M / M`
    S01,
    /// overlapping pair, `≪ log^{2(j−1)}M / M`
    S02,
    /// harmonic box, `≍ log^ℓ M`
    S03,
    /// shifted pair, `≍ log^{ℓ−1}M / M`
    S04,
    /// power box, `≍ log^{ℓ−1}M · M^{1−s} / (ℓ−1)!`
    S05,
    /// two-fold power tail, `≍ M^{1−t} log M / (t−1)`
    S06,
    /// three-fold power tail, claimed `≪ (1/(t−1) + log M) M^{1−t}`
    S07,
}

impl SeriesId {
    pub const ALL: [SeriesId; 7] = [
        SeriesId::S01,
        SeriesId::S02,
        SeriesId::S03,
        SeriesId::S04,
        SeriesId::S05,
        SeriesId::S06,
        SeriesId::S07,
    ];
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .trim()
            .trim_start_matches(['S', 's'])
            .trim_start_matches('0');
        Ok(match digits {
            "1" => SeriesId::S01,
            "2" => SeriesId::S02,
            "3" => SeriesId::S03,
            "4" => SeriesId::S04,
            "5" => SeriesId::S05,
            "6" => SeriesId::S06,
            "7" => SeriesId::S07,
            _ => return Err(Error::domain(format!("unknown series id '{s}'"))),
        })
    }
}

/// Parameters shared by the registered series; unused fields are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesParams {
    pub ell: usize,
    pub r: usize,
    pub j: usize,
    pub t: f64,
    pub s: f64,
}

impl Default for SeriesParams {
    fn default() -> Self {
        SeriesParams {
            ell: 2,
            r: 2,
            j: 1,
            t: 2.0,
            s: 0.5,
        }
    }
}

impl FromStr for SeriesParams {
    type Err = Error;

    /// `key=value` pairs separated by commas, e.g. `ell=2,t=1.5`.
    fn from_str(text: &str) -> Result<Self> {
        let mut p = SeriesParams::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("expected key=value, got '{item}'")))?;
            let bad = || Error::domain(format!("bad value for {key}: '{value}'"));
            let int = || value.trim().parse::<usize>().map_err(|_| bad());
            let real = || value.trim().parse::<f64>().map_err(|_| bad());
            match key.trim() {
                "ell" | "l" | "k" => p.ell = int()?,
                "r" => p.r = int()?,
                "j" => p.j = int()?,
                "t" => p.t = real()?,
                "s" => p.s = real()?,
                other => return Err(Error::domain(format!("unknown series parameter '{other}'"))),
            }
        }
        Ok(p)
    }
}

/// Evaluates a registered series at threshold `M`.
pub fn evaluate(id: SeriesId, p: &SeriesParams, m: f64) -> Result<SeriesValue> {
    match id {
        SeriesId::S01 => series_block_tail(p.ell, m),
        SeriesId::S02 => series_overlap(p.r, p.j, m),
        SeriesId::S03 => series_harmonic_box(p.ell, m),
        SeriesId::S04 => series_shifted(p.ell, m),
        SeriesId::S05 => series_power_box(p.ell, m, p.s),
        SeriesId::S06 => series_power_tail(2, m, p.t),
        SeriesId::S07 => series_power_tail(3, m, p.t),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// The asymptotic order registered for `id`, without implied constants.
pub fn predicted(id: SeriesId, p: &SeriesParams, m: f64) -> f64 {
    let lm = m.ln();
    let pow = |e: usize| lm.powi(e as i32);
    match id {
        SeriesId::S01 | SeriesId::S04 => pow(p.ell.saturating_sub(1)) / m,
        SeriesId::S02 => pow(2 * p.j.saturating_sub(1)) / m,
        SeriesId::S03 => pow(p.ell),
        SeriesId::S05 => {
            let l1 = p.ell.saturating_sub(1);
            pow(l1) / factorial(l1) * m.powf(1.0 - p.s)
        }
        SeriesId::S06 => m.powf(1.0 - p.t) * lm / (p.t - 1.0),
        SeriesId::S07 => (1.0 / (p.t - 1.0) + lm) * m.powf(1.0 - p.t),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub m: f64,
    pub value: f64,
    pub error_bound: f64,
    pub predicted: f64,
    pub ratio: f64,
}

/// Largest allowed `max/min` of the ratio over the top decade.
pub const BAND_FACTOR: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioScan {
    pub rows: Vec<ScanRow>,
    pub top_decade_min: f64,
    pub top_decade_max: f64,
    /// Whether `top_decade_max / top_decade_min ≤ BAND_FACTOR`.
    pub within_band: bool,
}

/// `points` values from `lo` to `hi` in geometric progression.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == points - 1 {
                hi
            } else {
                (lo.ln() + step * i as f64).exp()
            }
        })
        .collect()
}

/// Evaluates `id` on every grid point and compares with its registered order.
pub fn asymptotic_ratio_scan(id: SeriesId, p: &SeriesParams, grid: &[f64]) -> Result<RatioScan> {
    if grid.is_empty() {
        return Err(Error::domain("empty M grid"));
    }
    let rows = grid
        .par_iter()
        .map(|&m| {
            let v = evaluate(id, p, m)?;
            let pred = predicted(id, p, m);
            Ok(ScanRow {
                m,
                value: v.value,
                error_bound: v.abs_error_bound,
                predicted: pred,
                ratio: v.value / pred,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let top = grid.iter().copied().fold(f64::MIN, f64::max);
    let (lo, hi) = rows
        .iter()
        .filter(|r| r.m >= top / 10.0 * (1.0 - 1e-12))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.ratio), hi.max(r.ratio))
        });
    Ok(RatioScan {
        rows,
        top_decade_min: lo,
        top_decade_max: hi,
        within_band: lo > 0.0 && hi / lo <= BAND_FACTOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const Z2: f64 = PI * PI / 6.0;

    #[test]
    fn closed_form_examples() {
        assert!((series_block_tail(1, 1.0).unwrap().value - Z2).abs() < 1e-15);
        assert!((series_block_tail(1, 2.0).unwrap().value - (Z2 - 1.0)).abs() < 1e-15);
        assert!((series_overlap(1, 1, 1.0).unwrap().value - Z2.powi(3)).abs() < 1e-14);
        assert_eq!(series_harmonic_box(1, 1.0).unwrap().value, 1.0);
        let h10 = 7381.0 / 2520.0;
        assert!((series_harmonic_box(1, 10.0).unwrap().value - h10).abs() < 1e-15);
        assert!((series_shifted(1, 2.0).unwrap().value - (Z2 - 1.0)).abs() < 1e-14);
        assert!((series_power_tail(1, 1.0, 2.0).unwrap().value - Z2).abs() < 1e-15);
    }

    #[test]
    fn shifted_single_block() {
        let direct: f64 =
            (1..5).map(|a| 1.0 / (a * a) as f64).sum::<f64>() * zeta_tail(2.0, 5).unwrap().value;
        assert!((series_shifted(1, 5.0).unwrap().value - direct).abs() < 1e-15);
    }

    #[test]
    fn real_thresholds_round_up() {
        let a = series_block_tail(2, 10.2).unwrap().value;
        let b = series_block_tail(2, 11.0).unwrap().value;
        assert_eq!(a, b);
        assert_eq!(
            series_harmonic_box(2, 10.9).unwrap(),
            series_harmonic_box(2, 10.0).unwrap()
        );
    }

    #[test]
    fn domain_errors() {
        assert!(series_power_tail(2, 10.0, 1.0).is_err());
        assert!(series_block_tail(2, 0.5).is_err());
        assert!(series_block_tail(0, 5.0).is_err());
        assert!("S9".parse::<SeriesId>().is_err());
        assert!("ell=x".parse::<SeriesParams>().is_err());
    }

    #[test]
    fn id_and_params_parse() {
        assert_eq!("S1".parse::<SeriesId>().unwrap(), SeriesId::S01);
        assert_eq!("S07".parse::<SeriesId>().unwrap(), SeriesId::S07);
        let p: SeriesParams = "ell=3, t=1.5".parse().unwrap();
        assert_eq!((p.ell, p.t), (3, 1.5));
    }

    #[test]
    fn grid_endpoints() {
        let g = geometric_grid(1e2, 1e6, 9);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 1e2);
        assert_eq!(g[8], 1e6);
        assert!((g[2] - 1e3).abs() < 1e-9);
    }
}
