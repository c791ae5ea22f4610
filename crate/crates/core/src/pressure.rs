//! Pressure of `−s log|T'|` plus constant potentials over the Gauss map, and
//! the dimension roots built on it.
//!
//! The pressure `P(s)` is the log of the leading eigenvalue of
//!
//! ```text
//! (L_s f)(x) = Σ_{a=1}^{N} (a+x)^{−2s} f(1/(a+x)),   x ∈ [0, 1],
//! ```
//!
//! discretized by collocation at Chebyshev nodes. Digits `a > 200` only
//! probe `f` near `0`, so their contribution is aggregated through a Taylor
//! expansion of the interpolant at `0` and Hurwitz-type power sums, which
//! makes the cost independent of `N`. With tail correction enabled the
//! digits `a > N` are added through the first two Taylor terms.
//!
//! A potential `−s log|T'| + c(s)` has pressure `P(s) + c(s)`, so every
//! dimension is a root of `P(s) + c(s)` in `s`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{growth_constants, GrowthFunction};
use crate::series::{zeta, zeta_tail, CompensatedSum};

/// `g₃(s) = (3s³ − 5s² + 4s − 1)/(s² − s + 1)`.
pub fn g3(s: f64) -> f64 {
    (((3.0 * s - 5.0) * s + 4.0) * s - 1.0) / ((s - 1.0) * s + 1.0)
}

/// `(X₁, X₂, X₃)` with `X₁ = (1−s)²/(s²−s+1)`, `X₂ = s²/(s²−s+1)`, `X₃ = 1 − X₁ − X₂`.
pub fn x_functions(s: f64) -> (f64, f64, f64) {
    let d = (s - 1.0) * s + 1.0;
    let x1 = (1.0 - s) * (1.0 - s) / d;
    let x2 = s * s / d;
    (x1, x2, s * (1.0 - s) / d)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn g3_exact(s: &BigRational) -> BigRational {
    let s2 = s * s;
    let s3 = &s2 * s;
    let num = rat(3, 1) * &s3 - rat(5, 1) * &s2 + rat(4, 1) * s - BigRational::one();
    let den = &s2 - s + BigRational::one();
    num / den
}

pub fn x_functions_exact(s: &BigRational) -> (BigRational, BigRational, BigRational) {
    let one = BigRational::one();
    let d = s * s - s + &one;
    let x1 = (&one - s) * (&one - s) / &d;
    let x2 = s * s / &d;
    let x3 = &one - &x1 - &x2;
    (x1, x2, x3)
}

/// `f_ℓ(s)` from `f₁ = s`, `f_{n+1} = s f_n / (1 − s + f_n)`.
///
/// At `s = 0` every `f_ℓ` is `0`. `ell = 0` is treated as `1`.
pub fn wang_wu_f(ell: usize, s: f64) -> f64 {
    let mut f = s;
    for _ in 1..ell {
        f = s * f / (1.0 - s + f);
    }
    f
}

pub fn wang_wu_f_exact(ell: usize, s: &BigRational) -> BigRational {
    let one = BigRational::one();
    let mut f = s.clone();
    for _ in 1..ell {
        f = s * &f / (&one - s + &f);
    }
    f
}

/// Shape of the constant part of a potential `−s log|T'| + c(s)`.
#[derive(Clone)]
pub enum Potential {
    /// `c(s) = −f_ℓ(s) log B`
    WangWu(usize),
    /// `c(s) = −(3s − 1) log B`
    Ttw,
    /// `c(s) = −(3s − 1 − s²) log B`
    Tz,
    /// `c(s) = −g₃(s) log B`
    G3,
    /// `c(s) = −s u + (1 − s) v`, independent of `log B`
    AffineBeta { u: f64, v: f64 },
    /// `c(s) = −f(s) log B`
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::WangWu(l) => write!(f, "WangWu({l})"),
            Potential::Ttw => write!(f, "Ttw"),
            Potential::Tz => write!(f, "Tz"),
            Potential::G3 => write!(f, "G3"),
            Potential::AffineBeta { u, v } => write!(f, "AffineBeta {{ u: {u}, v: {v} }}"),
            Potential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Potential {
    /// The multiplier `f(s)` of `−log B`; `None` for `AffineBeta`.
    pub fn f(&self, s: f64) -> Option<f64> {
        Some(match self {
            Potential::WangWu(l) => wang_wu_f(*l, s),
            Potential::Ttw => 3.0 * s - 1.0,
            Potential::Tz => 3.0 * s - 1.0 - s * s,
            Potential::G3 => g3(s),
            Potential::AffineBeta { .. } => return None,
            Potential::Custom(f) => f(s),
        })
    }

    /// `f(s)` in exact arithmetic where the family allows it.
    pub fn f_exact(&self, s: &BigRational) -> Option<BigRational> {
        let one = BigRational::one();
        let three = rat(3, 1);
        Some(match self {
            Potential::WangWu(l) => wang_wu_f_exact(*l, s),
            Potential::Ttw => &three * s - one,
            Potential::Tz => &three * s - one - s * s,
            Potential::G3 => g3_exact(s),
            _ => return None,
        })
    }

    /// Checks that `f` is finite and non-decreasing on a grid of `[1/2, 1]`.
    pub fn check_monotone(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=200 {
            let s = 0.5 + 0.5 * i as f64 / 200.0;
            let v = match self {
                Potential::AffineBeta { .. } => return Ok(()),
                p => p.f(s).expect("f defined"),
            };
            if !v.is_finite() || v < prev - 1e-12 {
                return Err(Error::domain(format!(
                    "potential multiplier is not non-decreasing on [1/2, 1] (at s = {s})"
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

/// A potential together with its `log B`.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub family: Potential,
    pub log_b: f64,
}

impl PotentialSpec {
    pub fn new(family: Potential, log_b: f64) -> Self {
        PotentialSpec { family, log_b }
    }

    /// The constant part `c(s)`.
    pub fn shift(&self, s: f64) -> f64 {
        match &self.family {
            Potential::AffineBeta { u, v } => -s * u + (1.0 - s) * v,
            p => -p.f(s).expect("f defined") * self.log_b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureSolverParams {
    /// Alphabet `{1..N}` for [`transfer_pressure`].
    pub alphabet_max: u64,
    pub grid_points: usize,
    pub power_iter_tol: f64,
    pub bisect_tol: f64,
    pub max_iter: usize,
    /// Alphabet escalation schedule for dimension roots.
    pub escalation: Vec<u64>,
}

impl Default for PressureSolverParams {
    fn default() -> Self {
        PressureSolverParams {
            alphabet_max: 10_000,
            grid_points: 64,
            power_iter_tol: 1e-10,
            bisect_tol: 1e-6,
            max_iter: 10_000,
            escalation: vec![100, 1_000, 10_000],
        }
    }
}

impl PressureSolverParams {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t.is_finite();
        if !tol_ok(self.power_iter_tol) || !tol_ok(self.bisect_tol) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.grid_points < 2 || self.max_iter == 0 || self.alphabet_max == 0 {
            return Err(Error::domain(
                "grid points must be ≥ 2; iteration cap and alphabet ≥ 1",
            ));
        }
        if self.escalation.is_empty() || self.escalation.contains(&0) {
            return Err(Error::domain(
                "escalation schedule must be non-empty and positive",
            ));
        }
        Ok(())
    }
}

/// Digits up to this bound are applied through exact interpolation.
const EXPLICIT_DIGITS: u64 = 200;
/// Taylor terms `k = 0..=TAYLOR_ORDER` for digits in `(EXPLICIT_DIGITS, N]`.
const TAYLOR_ORDER: usize = 6;
/// Taylor terms for the tail `a > N`.
const TAIL_ORDER: usize = 1;
/// Chebyshev modes entering the Taylor rows; higher modes carry only
/// rounding noise, which differentiation would amplify.
const TAYLOR_MODES: usize = 24;

/// Chebyshev collocation on `[0, 1]`.
struct Collocation {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `taylor[k][j]`: `k`-th Taylor coefficient at `0` of the `j`-th Lagrange basis polynomial.
    taylor: Vec<Vec<f64>>,
}

impl Collocation {
    fn new(n: usize) -> Self {
        let theta: Vec<f64> = (0..n)
            .map(|i| PI * (2 * i + 1) as f64 / (2 * n) as f64)
            .collect();
        let nodes = theta.iter().map(|t| 0.5 * (1.0 + t.cos())).collect();
        let weights = theta
            .iter()
            .enumerate()
            .map(|(i, t)| if i % 2 == 0 { t.sin() } else { -t.sin() })
            .collect();
        // Chebyshev coefficients b_m = Σ_j C[m][j] f_j, then derivatives at t = −1
        // from T_m^{(k)}(1) = Π_{i<k} (m² − i²)/(2i + 1) and parity (−1)^{m+k}.
        let mut taylor = vec![vec![0.0; n]; TAYLOR_ORDER + 1];
        for m in 0..n.min(TAYLOR_MODES) {
            let mut deriv = 1.0; // T_m^{(k)}(1)
            let mut scale = 1.0; // 2^k / k!
            for (k, row) in taylor.iter_mut().enumerate() {
                if k > 0 {
                    let kk = (k - 1) as f64;
                    deriv *= ((m * m) as f64 - kk * kk) / (2.0 * kk + 1.0);
                    scale *= 2.0 / k as f64;
                }
                let sign = if (m + k) % 2 == 0 { 1.0 } else { -1.0 };
                let factor = sign * deriv * scale;
                if factor == 0.0 {
                    continue;
                }
                let norm = if m == 0 { 1.0 } else { 2.0 } / n as f64;
                for (j, t) in theta.iter().enumerate() {
                    row[j] += factor * norm * (m as f64 * t).cos();
                }
            }
        }
        Collocation {
            nodes,
            weights,
            taylor,
        }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Values of every Lagrange basis polynomial at `y`.
    fn basis(&self, y: f64, out: &mut [f64]) {
        if let Some(j) = self.nodes.iter().position(|&x| x == y) {
            out.fill(0.0);
            out[j] = 1.0;
            return;
        }
        let mut total = 0.0;
        for ((o, &x), &w) in out.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *o = w / (y - x);
            total += *o;
        }
        for o in out.iter_mut() {
            *o /= total;
        }
    }
}

/// `Σ_{a=from}^{to} (a + x)^{−σ}`, `to = None` meaning `∞` (requires `σ > 1`).
fn power_sum(sigma: f64, from: u64, to: Option<u64>, x: f64) -> f64 {
    if let Some(to) = to {
        if to < from {
            return 0.0;
        }
    }
    if to.is_none() && sigma <= 1.0 {
        return f64::INFINITY;
    }
    let direct_end = match to {
        Some(t) => t.min(EXPLICIT_DIGITS.max(from + 63)),
        None => EXPLICIT_DIGITS.max(from + 63),
    };
    let mut acc = CompensatedSum::default();
    for a in from..=direct_end {
        acc.add((a as f64 + x).powf(-sigma));
    }
    if to == Some(direct_end) {
        return acc.value();
    }
    // Euler–Maclaurin on [q1, q2)
    let q1 = (direct_end + 1) as f64 + x;
    let q2 = to.map(|t| (t + 1) as f64 + x);
    let integral = match q2 {
        None => q1.powf(1.0 - sigma) / (sigma - 1.0),
        Some(q2) => {
            let l = (q2 / q1).ln();
            if (sigma - 1.0).abs() < 1e-12 {
                l
            } else {
                -q1.powf(1.0 - sigma) * ((1.0 - sigma) * l).exp_m1() / (sigma - 1.0)
            }
        }
    };
    let r = |q: f64| {
        let p = q.powf(-sigma);
        p / 2.0 + sigma * p / (12.0 * q)
            - sigma * (sigma + 1.0) * (sigma + 2.0) * p / (720.0 * q * q * q)
    };
    acc.add(integral + r(q1) - q2.map_or(0.0, r));
    acc.value()
}

fn operator_matrix(col: &Collocation, s: f64, alphabet: u64, tail: bool) -> Option<Vec<Vec<f64>>> {
    let n = col.len();
    let mut k = vec![vec![0.0; n]; n];
    let mut basis = vec![0.0; n];
    for (i, &x) in col.nodes.iter().enumerate() {
        let row = &mut k[i];
        for a in 1..=alphabet.min(EXPLICIT_DIGITS) {
            let z = a as f64 + x;
            let w = z.powf(-2.0 * s);
            col.basis(1.0 / z, &mut basis);
            for (r, b) in row.iter_mut().zip(&basis) {
                *r += w * b;
            }
        }
        let mut add_taylor = |order: usize, from: u64, to: Option<u64>| -> bool {
            for (kk, coeffs) in col.taylor.iter().enumerate().take(order + 1) {
                let h = power_sum(2.0 * s + kk as f64, from, to, x);
                if !h.is_finite() {
                    return false;
                }
                for (r, c) in row.iter_mut().zip(coeffs) {
                    *r += h * c;
                }
            }
            true
        };
        if alphabet > EXPLICIT_DIGITS {
            add_taylor(TAYLOR_ORDER, EXPLICIT_DIGITS + 1, Some(alphabet));
        }
        if tail && !add_taylor(TAIL_ORDER, alphabet + 1, None) {
            return None;
        }
    }
    Some(k)
}

fn leading_eigenvalue(k: &[Vec<f64>], params: &PressureSolverParams) -> Result<f64> {
    let n = k.len();
    let mut v = vec![1.0; n];
    let mut w = vec![0.0; n];
    let mut trace = Vec::new();
    let mut prev = f64::NAN;
    for _ in 0..params.max_iter {
        for (wi, row) in w.iter_mut().zip(k) {
            *wi = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let lambda = vw / vv;
        trace.push(lambda);
        if (lambda - prev).abs() < params.power_iter_tol * lambda.abs() {
            return Ok(lambda);
        }
        prev = lambda;
        let scale = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 || !scale.is_finite() {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / scale;
        }
    }
    let keep = trace.len().saturating_sub(10);
    Err(Error::Numeric {
        message: "power iteration did not converge".into(),
        trace: trace.split_off(keep),
    })
}

fn check_s(s: f64) -> Result<()> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::domain(format!(
            "s must be a finite non-negative real, got {s}"
        )));
    }
    Ok(())
}

/// `P(s)` of `−s log|T'|` restricted to the alphabet `{1..N}`.
pub fn transfer_pressure(s: f64, alphabet: u64, params: &PressureSolverParams) -> Result<f64> {
    check_s(s)?;
    params.validate()?;
    if alphabet == 0 {
        return Err(Error::domain("alphabet must be non-empty"));
    }
    let col = Collocation::new(params.grid_points);
    let k = operator_matrix(&col, s, alphabet, false).expect("finite alphabet");
    Ok(leading_eigenvalue(&k, params)?.ln())
}

/// `P(s)` over the full alphabet: digits `≤ N` exactly, the rest through a
/// first-order tail model. `+∞` for `s ≤ 1/2`.
pub fn tail_corrected_pressure(
    s: f64,
    alphabet: u64,
    params: &PressureSolverParams,
) -> Result<f64> {
    check_s(s)?;
    params.validate()?;
    if s <= 0.5 {
        return Ok(f64::INFINITY);
    }
    let col = Collocation::new(params.grid_points);
    match operator_matrix(&col, s, alphabet.max(1), true) {
        Some(k) => Ok(leading_eigenvalue(&k, params)?.ln()),
        None => Ok(f64::INFINITY),
    }
}

/// Default enumeration budget for the word oracles.
pub const WORD_BUDGET: u64 = 10_000_000;

fn enumerate_log_continuants(alphabet: &[u64], n: usize, budget: u64) -> Result<Vec<f64>> {
    let count = (alphabet.len() as u64).checked_pow(n as u32);
    match count {
        Some(c) if c <= budget => {}
        _ => {
            return Err(Error::resource(format!(
                "{}^{n} words exceed the enumeration budget {budget}",
                alphabet.len()
            )))
        }
    }
    let mut out = Vec::with_capacity(count.unwrap_or(0) as usize);
    fn walk(alphabet: &[u64], depth: usize, prev: u128, q: u128, out: &mut Vec<f64>) {
        if depth == 0 {
            out.push((q as f64).ln());
            return;
        }
        for &a in alphabet {
            let next = (a as u128).checked_mul(q).and_then(|x| x.checked_add(prev));
            match next {
                Some(next) => walk(alphabet, depth - 1, q, next, out),
                None => {
                    // beyond u128: continue in floating point
                    let (mut p, mut c) = (prev as f64, q as f64);
                    let nq = a as f64 * c + p;
                    p = c;
                    c = nq;
                    walk_f64(alphabet, depth - 1, p, c, out);
                }
            }
        }
    }
    fn walk_f64(alphabet: &[u64], depth: usize, prev: f64, q: f64, out: &mut Vec<f64>) {
        if depth == 0 {
            out.push(q.ln());
            return;
        }
        for &a in alphabet {
            walk_f64(alphabet, depth - 1, q, a as f64 * q + prev, out);
        }
    }
    walk(alphabet, n, 0, 1, &mut out);
    Ok(out)
}

/// `(1/n) log Σ_{a ∈ Aⁿ} q_n(a)^{−2s}` by enumeration of all words.
pub fn word_pressure_oracle(s: f64, alphabet: &[u64], n: usize) -> Result<f64> {
    check_s(s)?;
    if n == 0 || alphabet.is_empty() || alphabet.contains(&0) {
        return Err(Error::domain(
            "need n ≥ 1 and a non-empty alphabet of positive digits",
        ));
    }
    let logs = enumerate_log_continuants(alphabet, n, WORD_BUDGET)?;
    Ok(log_sum_exp(logs.iter().map(|l| -2.0 * s * l)) / n as f64)
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let sum: CompensatedSum = xs.map(|x| (x - m).exp()).collect();
    m + sum.value().ln()
}

/// Default truncation of each digit in [`s_m_oracle`].
pub fn default_s_m_truncation(m: usize) -> u64 {
    match m {
        1 | 2 => 1_000,
        _ => 100,
    }
}

/// `inf{s : Σ_{a ∈ ℕ^m} q_m(a)^{−2s} ≤ B^{m f(s)}}`.
///
/// Words over `{1..N}^m` are enumerated; the rest is bounded above through
/// `q_m ≥ a₁⋯a_m` by `ζ(2s)^m − H_N(2s)^m`, so the returned value can only
/// overestimate the infimum. Sub-multiplicativity of the sums makes the
/// sequence non-increasing in `m`, bounded below by the pressure root.
pub fn s_m_oracle(log_b: f64, m: usize, family: &Potential, n_trunc: u64, tol: f64) -> Result<f64> {
    if !(1..=3).contains(&m) {
        return Err(Error::domain(format!("m must be 1, 2 or 3, got {m}")));
    }
    if !(log_b > 0.0) || !log_b.is_finite() {
        return Err(Error::domain("s_m oracle needs 1 < B < ∞"));
    }
    if family.f(0.75).is_none() {
        return Err(Error::domain(
            "s_m oracle needs a potential of the form −f(s) log B",
        ));
    }
    if n_trunc == 0 || !(tol > 0.0) {
        return Err(Error::domain("truncation and tolerance must be positive"));
    }
    let alphabet: Vec<u64> = (1..=n_trunc).collect();
    let logs = enumerate_log_continuants(&alphabet, m, WORD_BUDGET)?;
    let excess = |s: f64| -> Result<f64> {
        if s <= 0.5 {
            return Ok(f64::INFINITY);
        }
        let sigma = 2.0 * s;
        let head: CompensatedSum = logs.iter().map(|l| (-sigma * l).exp()).collect();
        let h: CompensatedSum = alphabet.iter().map(|&a| (a as f64).powf(-sigma)).collect();
        let h = h.value();
        let gap = zeta_tail(sigma, n_trunc + 1)?.value;
        let z = zeta(sigma)?.value;
        // ζ^m − H^m = (ζ − H) Σ_{i<m} ζ^i H^{m−1−i}
        let spread: f64 = (0..m)
            .map(|i| z.powi(i as i32) * h.powi((m - 1 - i) as i32))
            .sum();
        let total = head.value() + gap * spread;
        Ok(total.ln() - m as f64 * family.f(s).expect("checked") * log_b)
    };
    let mut lo = 0.5;
    let mut hi = 1.0;
    while excess(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::Numeric {
                message: "s_m oracle found no admissible s".into(),
                trace: vec![lo, hi],
            });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Limsup sets with a dimension formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DimSet {
    E(usize),
    F1,
    F2,
    F3,
}

impl DimSet {
    pub fn potential(&self) -> Potential {
        match self {
            DimSet::E(l) => Potential::WangWu(*l),
            DimSet::F1 => Potential::Ttw,
            DimSet::F2 => Potential::Tz,
            DimSet::F3 => Potential::G3,
        }
    }
}

impl fmt::Display for DimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimSet::E(l) => write!(f, "E{l}"),
            DimSet::F1 => write!(f, "F1"),
            DimSet::F2 => write!(f, "F2"),
            DimSet::F3 => write!(f, "F3"),
        }
    }
}

impl FromStr for DimSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        match t.as_str() {
            "F1" => Ok(DimSet::F1),
            "F2" => Ok(DimSet::F2),
            "F3" => Ok(DimSet::F3),
            _ => match t.strip_prefix('E').and_then(|d| d.parse::<usize>().ok()) {
                Some(l) if l >= 1 => Ok(DimSet::E(l)),
                _ => Err(Error::domain(format!("unknown set '{s}'"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `B = 1`, dimension `1`.
    #[serde(rename = "B=1")]
    Full,
    /// `1 < B < ∞`, pressure root.
    #[serde(rename = "pressure")]
    Pressure,
    /// `B = ∞`, dimension `1/(1+b)`.
    #[serde(rename = "B=inf")]
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EscalationStep {
    pub alphabet: u64,
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionResult {
    pub s: f64,
    pub lo: f64,
    pub hi: f64,
    /// Last alphabet size used (`0` for closed-form branches).
    pub alphabet: u64,
    pub branch: Branch,
    /// Whether the last two escalation steps agreed within `2·bisect_tol`.
    pub converged: bool,
    pub diagnostics: Vec<EscalationStep>,
}

impl DimensionResult {
    fn closed(s: f64, branch: Branch) -> Self {
        DimensionResult {
            s,
            lo: s,
            hi: s,
            alphabet: 0,
            branch,
            converged: true,
            diagnostics: Vec::new(),
        }
    }
}

/// Root of `P(s) + c(s)` at one alphabet size.
fn bisect_root(
    spec: &PotentialSpec,
    alphabet: u64,
    params: &PressureSolverParams,
) -> Result<EscalationStep> {
    let mut evaluations = 0;
    let mut g = |s: f64| -> Result<f64> {
        evaluations += 1;
        Ok(tail_corrected_pressure(s, alphabet, params)? + spec.shift(s))
    };
    let (mut lo, mut hi) = (0.45, 1.0);
    while g(hi)? > 0.0 {
        lo = hi;
        hi += 0.5;
        if hi > 8.0 {
            return Err(Error::Numeric {
                message: "dimension root not bracketed".into(),
                trace: vec![lo, hi],
            });
        }
    }
    if g(lo)? <= 0.0 {
        // root below the default bracket; the infimum is over s ≥ 0
        lo = 0.0;
        if g(lo)? <= 0.0 {
            return Ok(EscalationStep {
                alphabet,
                root: 0.0,
                lo: 0.0,
                hi: 0.0,
                evaluations,
            });
        }
    }
    let mut iter = 0;
    while hi - lo > params.bisect_tol && iter < params.max_iter {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    Ok(EscalationStep {
        alphabet,
        root: 0.5 * (lo + hi),
        lo,
        hi,
        evaluations,
    })
}

/// `inf{s ≥ 0 : P(T, −s log|T'| + c(s)) ≤ 0}` with alphabet escalation.
pub fn pressure_root(
    spec: &PotentialSpec,
    params: &PressureSolverParams,
) -> Result<DimensionResult> {
    params.validate()?;
    spec.family.check_monotone()?;
    let mut steps: Vec<EscalationStep> = Vec::new();
    let mut converged = false;
    for &n in &params.escalation {
        let step = bisect_root(spec, n, params)?;
        let agree = steps
            .last()
            .is_some_and(|p| (p.root - step.root).abs() < 2.0 * params.bisect_tol);
        steps.push(step);
        if agree {
            converged = true;
            break;
        }
    }
    if params.escalation.len() == 1 {
        converged = true;
    }
    let last = *steps.last().expect("non-empty schedule");
    Ok(DimensionResult {
        s: last.root,
        lo: last.lo,
        hi: last.hi,
        alphabet: last.alphabet,
        branch: Branch::Pressure,
        converged,
        diagnostics: steps,
    })
}

/// Hausdorff dimension of `set` for the growth function `phi`.
pub fn hausdorff_dim(
    set: DimSet,
    phi: &GrowthFunction,
    params: &PressureSolverParams,
) -> Result<DimensionResult> {
    let c = growth_constants(phi)?;
    if c.log_big_b <= 0.0 {
        return Ok(DimensionResult::closed(1.0, Branch::Full));
    }
    if c.log_big_b.is_infinite() {
        let b = c.small_b();
        return Ok(DimensionResult::closed(1.0 / (1.0 + b), Branch::Infinite));
    }
    pressure_root(&PotentialSpec::new(set.potential(), c.log_big_b), params)
}

/// `β` ladder and roots `d_i` of `P(−s log|T'| − s log β_i + (1−s) log β_{i−1})`.
pub fn shulga_hussain_dims(a: &[f64], params: &PressureSolverParams) -> Result<(Vec<f64>, f64)> {
    if a.is_empty() || a.iter().any(|&x| !(x > 1.0) || !x.is_finite()) {
        return Err(Error::domain("every A_i must be a finite real > 1"));
    }
    let mut log_prev = 0.0;
    let mut dims = Vec::with_capacity(a.len());
    for &ai in a {
        let log_beta = log_prev + ai.ln();
        let spec = PotentialSpec::new(
            Potential::AffineBeta {
                u: log_beta,
                v: log_prev,
            },
            0.0,
        );
        dims.push(pressure_root(&spec, params)?.s);
        log_prev = log_beta;
    }
    let min = dims.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((dims, min))
}

/// One evaluated relation of the auxiliary algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxRow {
    pub relation: &'static str,
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Whether the relation is claimed at this `s` (failures are then errors).
    pub asserted: bool,
}

/// Evaluates the `g₃`/`X` relations on a grid of rationals in `[0, 1]`.
///
/// * `aux01`: `g₃ = (2s−1) + s X₁`, exact identity, asserted everywhere.
/// * `aux02`: `g₃ < (1−s) X₁ − s`, reported only.
/// * `aux03`: `g₃ ≤ (3s−1)(X₁+X₂) + s`, asserted on `[1/2, 1]`.
/// * `g3_le_3s_minus_1`: asserted for `s ≥ 2/5`.
/// * `strict_upper`: `(3s−1) + X₁(s−1) > g₃`, asserted on `[1/2, 1]`.
pub fn aux_inequality_report(grid: &[BigRational]) -> Result<Vec<AuxRow>> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let half = rat(1, 2);
    let two_fifths = rat(2, 5);
    let mut rows = Vec::new();
    for s in grid {
        if s < &zero || s > &one {
            return Err(Error::domain("grid points must lie in [0, 1]"));
        }
        let g = g3_exact(s);
        let (x1, x2, _) = x_functions_exact(s);
        let three_s_1 = rat(3, 1) * s - &one;
        let sf = s.to_f64().unwrap_or(f64::NAN);
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        let mut push = |relation, rhs: BigRational, holds: bool, asserted: bool| {
            rows.push(AuxRow {
                relation,
                s: sf,
                lhs: f(&g),
                rhs: f(&rhs),
                holds,
                asserted,
            })
        };
        let in_upper = s >= &half;
        let r = rat(2, 1) * s - &one + &x1 * s;
        push("aux01", r.clone(), g == r, true);
        let r = (&one - s) * &x1 - s;
        push("aux02", r.clone(), g < r, false);
        let r = &three_s_1 * (&x1 + &x2) + s;
        push("aux03", r.clone(), g <= r, in_upper);
        push(
            "g3_le_3s_minus_1",
            three_s_1.clone(),
            g <= three_s_1,
            s >= &two_fifths,
        );
        let r = &three_s_1 + &x1 * (s - &one);
        push("strict_upper", r.clone(), r > g, in_upper);
    }
    Ok(rows)
}

/// `n + 1` equally spaced rationals `i/n` in `[0, 1]`.
pub fn rational_grid(n: u32) -> Vec<BigRational> {
    (0..=n).map(|i| rat(i as i64, n as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PressureSolverParams {
        PressureSolverParams::default()
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(g3(1.0), 1.0);
        assert_eq!(g3_exact(&rat(1, 2)), rat(1, 6));
        for &s in &[0.4, 0.6, 0.8, 1.0] {
            let (_, x2, _) = x_functions(s);
            assert!((g3(s) - (3.0 * s - 1.0 - x2)).abs() < 1e-15);
        }
        assert_eq!(x_functions(1.0), (0.0, 1.0, 0.0));
        let (a, b, c) = x_functions_exact(&rat(1, 2));
        assert_eq!((a, b, c), (rat(1, 3), rat(1, 3), rat(1, 3)));
        assert_eq!(wang_wu_f(1, 0.3), 0.3);
        assert_eq!(wang_wu_f(4, 1.0), 1.0);
        assert_eq!(wang_wu_f_exact(2, &rat(1, 2)), rat(1, 4));
        assert_eq!(wang_wu_f(3, 0.0), 0.0);
    }

    #[test]
    fn taylor_rows_recover_geometric_series() {
        let col = Collocation::new(64);
        let f: Vec<f64> = col.nodes.iter().map(|x| 1.0 / (1.0 + x)).collect();
        for (k, row) in col.taylor.iter().enumerate() {
            let c: f64 = row.iter().zip(&f).map(|(a, b)| a * b).sum();
            let expected = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!(
                (c - expected).abs() < 1e-8 * 10f64.powi(k as i32),
                "k={k}: {c}"
            );
        }
    }

    #[test]
    fn power_sum_matches_direct() {
        for &sigma in &[0.9, 1.0, 1.3, 2.0, 3.5] {
            let direct: f64 = (5..=3000).map(|a| (a as f64 + 0.25).powf(-sigma)).sum();
            let fast = power_sum(sigma, 5, Some(3000), 0.25);
            assert!((direct - fast).abs() < 1e-12 * direct, "σ={sigma}");
        }
        let tail = power_sum(2.0, 1, None, 0.0);
        assert!((tail - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn single_digit_is_golden_mean() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for &s in &[0.6, 1.0] {
            let p = transfer_pressure(s, 1, &params()).unwrap();
            assert!((p + 2.0 * s * phi.ln()).abs() < 1e-6, "{p}");
        }
    }

    #[test]
    fn full_operator_has_unit_eigenvalue_at_one() {
        let p = tail_corrected_pressure(1.0, 1000, &params()).unwrap();
        assert!(p.abs() < 1e-9, "{p}");
        let p = transfer_pressure(1.0, 10_000, &params()).unwrap();
        assert!(p <= 0.0 && p > -1e-3, "{p}");
    }

    #[test]
    fn word_oracle_examples() {
        assert!((word_pressure_oracle(0.0, &[1, 2, 3], 1).unwrap() - 3f64.ln()).abs() < 1e-15);
        let p = word_pressure_oracle(1.0, &[1], 10).unwrap();
        // q_10 over all ones is Fibonacci(11) = 89
        assert!((p + 2.0 * 89f64.ln() / 10.0).abs() < 1e-14);
        assert!(matches!(
            word_pressure_oracle(1.0, &[1, 2, 3], 20),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn closed_form_branches() {
        let pl = GrowthFunction::power_log(1.0, 2.0).unwrap();
        let r = hausdorff_dim(DimSet::F3, &pl, &params()).unwrap();
        assert_eq!((r.s, r.branch), (1.0, Branch::Full));
        let d = GrowthFunction::doubly_exponential(2.0, 3.0).unwrap();
        let r = hausdorff_dim(DimSet::F3, &d, &params()).unwrap();
        assert_eq!((r.s, r.branch), (0.25, Branch::Infinite));
    }

    #[test]
    fn set_names_parse() {
        assert_eq!("E3".parse::<DimSet>().unwrap(), DimSet::E(3));
        assert_eq!("f2".parse::<DimSet>().unwrap(), DimSet::F2);
        assert!("G1".parse::<DimSet>().is_err());
        assert!("E0".parse::<DimSet>().is_err());
    }

    #[test]
    fn aux_report_fixture() {
        let rows = aux_inequality_report(&[rat(1, 2), rat(2, 5), rat(7, 10)]).unwrap();
        let at = |rel: &str, s: f64| {
            rows.iter()
                .find(|r| r.relation == rel && (r.s - s).abs() < 1e-12)
                .unwrap()
                .clone()
        };
        let r = at("aux02", 0.5);
        assert!(!r.holds && !r.asserted);
        assert!((r.lhs - 1.0 / 6.0).abs() < 1e-15 && (r.rhs + 1.0 / 3.0).abs() < 1e-15);
        let r = at("g3_le_3s_minus_1", 0.4);
        assert!(r.holds && r.asserted);
        assert!(((r.rhs - r.lhs) - 4.0 / 19.0).abs() < 1e-15);
        assert!(at("aux01", 0.7).holds);
        assert!(rows.iter().filter(|r| r.asserted).all(|r| r.holds));
    }
}
