//! Growth functions `φ: ℕ → [2, ∞)` and their asymptotic invariants.
//!
//! Every family is evaluated in log space so that doubly exponential
//! thresholds never overflow. Values are clamped to be non-decreasing and at
//! least 2.

use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::natural::Natural;

/// Minimum table length accepted by [`growth_constants`].
pub const MIN_TABLE_LEN: usize = 100;

const E_SQUARED: f64 = 7.38905609893065;

#[derive(Clone, Debug, PartialEq)]
pub enum GrowthFunction {
    /// `φ(n) = n^α (log n)^β`.
    PowerLog { alpha: f64, beta: f64 },
    /// `φ(n) = B₀ⁿ`.
    Exponential { base: f64 },
    /// `φ(n) = b₀^(c₀ⁿ)`.
    DoublyExponential { base: f64, rate: f64 },
    /// Explicit values `φ(1), φ(2), …`; the last value repeats past the end.
    Table(Vec<f64>),
    /// `ψ(n) = max{φ(n), x_n}` with `x_n / log² x_n = n`.
    Normalized(Box<GrowthFunction>),
}

impl GrowthFunction {
    pub fn power_log(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::domain(format!(
                "power-log exponents must be finite and non-negative, got ({alpha}, {beta})"
            )));
        }
        Ok(GrowthFunction::PowerLog { alpha, beta })
    }

    pub fn exponential(base: f64) -> Result<Self> {
        if !(base > 1.0 && base.is_finite()) {
            return Err(Error::domain(format!(
                "exponential base {base} must exceed 1"
            )));
        }
        Ok(GrowthFunction::Exponential { base })
    }

    pub fn doubly_exponential(base: f64, rate: f64) -> Result<Self> {
        if !(base > 1.0 && rate > 1.0 && base.is_finite() && rate.is_finite()) {
            return Err(Error::domain(format!(
                "doubly exponential parameters must exceed 1, got ({base}, {rate})"
            )));
        }
        Ok(GrowthFunction::DoublyExponential { base, rate })
    }

    /// Builds a table, clamping to a non-decreasing sequence bounded below by 2.
    pub fn table(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("growth table is empty"));
        }
        if values
            .iter()
            .any(|v| !(v.is_finite() || *v == f64::INFINITY) || v.is_nan())
        {
            return Err(Error::domain("growth table contains NaN"));
        }
        let mut running = 2.0f64;
        let clamped = values
            .into_iter()
            .map(|v| {
                running = running.max(v);
                running
            })
            .collect();
        Ok(GrowthFunction::Table(clamped))
    }

    /// `φ ≡ c` (clamped to at least 2).
    pub fn constant(c: f64) -> Result<Self> {
        Self::table(vec![c])
    }

    /// The normalization `ψ(n) = max{φ(n), x_n}` used for the block-length-3
    /// divergence argument.
    pub fn normalized(self) -> Self {
        GrowthFunction::Normalized(Box::new(self))
    }

    /// Parses a family name and comma-separated parameters.
    ///
    /// Families: `powerlog α,β`, `exp B₀`, `dexp b₀,c₀`, `const c`,
    /// `table v₁,v₂,…`.
    pub fn parse(family: &str, params: &str) -> Result<Self> {
        let nums: Vec<f64> = params
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::domain(format!("bad growth parameter {s:?}")))
            })
            .collect::<Result<_>>()?;
        let want = |k: usize| -> Result<()> {
            if nums.len() != k {
                return Err(Error::domain(format!(
                    "family {family} takes {k} parameter(s), got {}",
                    nums.len()
                )));
            }
            Ok(())
        };
        match family.to_ascii_lowercase().as_str() {
            "powerlog" | "power" | "pl" => {
                want(2)?;
                Self::power_log(nums[0], nums[1])
            }
            "exp" | "exponential" => {
                want(1)?;
                Self::exponential(nums[0])
            }
            "dexp" | "doubly" | "doublyexponential" => {
                want(2)?;
                Self::doubly_exponential(nums[0], nums[1])
            }
            "const" | "constant" => {
                want(1)?;
                Self::constant(nums[0])
            }
            "table" => Self::table(nums),
            other => Err(Error::domain(format!("unknown growth family {other:?}"))),
        }
    }

    /// Canonical `(family, params)` pair, inverse of [`GrowthFunction::parse`].
    pub fn to_spec(&self) -> (String, String) {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            GrowthFunction::PowerLog { alpha, beta } => ("powerlog".into(), join(&[*alpha, *beta])),
            GrowthFunction::Exponential { base } => ("exp".into(), join(&[*base])),
            GrowthFunction::DoublyExponential { base, rate } => {
                ("dexp".into(), join(&[*base, *rate]))
            }
            GrowthFunction::Table(v) if v.len() == 1 => ("const".into(), join(v)),
            GrowthFunction::Table(v) => ("table".into(), join(v)),
            GrowthFunction::Normalized(inner) => {
                let (f, p) = inner.to_spec();
                (format!("normalized-{f}"), p)
            }
        }
    }

    /// `log φ(n)` (natural log), never below `log 2`.
    pub fn log_phi(&self, n: u64) -> f64 {
        let n = n.max(1);
        let raw = match self {
            GrowthFunction::PowerLog { alpha, beta } => {
                let ln = (n as f64).ln();
                let mut v = alpha * ln;
                if *beta != 0.0 {
                    v += beta * ln.max(LN_2).ln();
                }
                v
            }
            GrowthFunction::Exponential { base } => n as f64 * base.ln(),
            GrowthFunction::DoublyExponential { base, rate } => rate.powf(n as f64) * base.ln(),
            GrowthFunction::Table(v) => {
                let idx = (n as usize).min(v.len()) - 1;
                v[idx].ln()
            }
            GrowthFunction::Normalized(inner) => {
                return inner.log_phi(n).max(wlog_threshold(n).ln());
            }
        };
        raw.max(LN_2)
    }

    /// `φ(n)` in floating point; `+∞` when it overflows.
    pub fn phi(&self, n: u64) -> f64 {
        self.log_phi(n).exp()
    }

    /// `φ(n)` as an exact integer when the family makes that possible.
    pub fn exact_value(&self, n: u64) -> Option<BigUint> {
        const MAX_BITS: f64 = 1.0e6;
        let n = n.max(1);
        if self.log_phi(n) == LN_2 && !matches!(self, GrowthFunction::Normalized(_)) {
            return Some(BigUint::from(2u32));
        }
        let integral = |x: f64| x.fract() == 0.0 && x >= 0.0 && x < 2f64.powi(63);
        match self {
            GrowthFunction::PowerLog { alpha, beta } if *beta == 0.0 && integral(*alpha) => {
                if *alpha * (n as f64).log2() > MAX_BITS {
                    return None;
                }
                Some(BigUint::from(n).pow(*alpha as u32).max(BigUint::from(2u32)))
            }
            GrowthFunction::Exponential { base } if integral(*base) => {
                if n as f64 * base.log2() > MAX_BITS {
                    return None;
                }
                Some(BigUint::from(*base as u64).pow(n as u32))
            }
            GrowthFunction::DoublyExponential { base, rate }
                if integral(*base) && integral(*rate) =>
            {
                let exponent = rate.powf(n as f64);
                if exponent * base.log2() > MAX_BITS {
                    return None;
                }
                Some(BigUint::from(*base as u64).pow(exponent as u32))
            }
            GrowthFunction::Table(v) => {
                let x = v[(n as usize).min(v.len()) - 1];
                if integral(x) {
                    Some(BigUint::from(x as u64))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Exact comparison of an integer with `φ(n)`, when `φ(n)` is an integer.
    pub fn cmp_exact(&self, n: u64, value: &Natural) -> Option<Ordering> {
        self.exact_value(n).map(|phi| value.to_biguint().cmp(&phi))
    }

    fn order(&self) -> Option<Order> {
        match self {
            GrowthFunction::PowerLog { alpha, beta } => Some(Order::new(*alpha, *beta, 0.0)),
            GrowthFunction::Exponential { .. } | GrowthFunction::DoublyExponential { .. } => {
                Some(Order::EXPONENTIAL)
            }
            GrowthFunction::Table(_) => None,
            GrowthFunction::Normalized(inner) => {
                Some(inner.order()?.max(Order::new(1.0, 2.0, 0.0)))
            }
        }
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (family, params) = self.to_spec();
        write!(f, "{family}({params})")
    }
}

/// Solves `x / log² x = n` on the branch `x > e²` by Newton's method in
/// `u = log x`, starting from `n · log²(n + e²)`.
///
/// For `n ≤ e²/4` the equation has no solution on that branch and `e²` is
/// returned, which keeps the sequence non-decreasing.
pub fn wlog_threshold(n: u64) -> f64 {
    let n = n as f64;
    if n <= E_SQUARED / 4.0 {
        return E_SQUARED;
    }
    let ln_n = n.ln();
    let start = n * (n + E_SQUARED).ln().powi(2);
    let mut u = start.ln().max(2.0 + 1e-9);
    for _ in 0..100 {
        let g = u - 2.0 * u.ln() - ln_n;
        let step = g / (1.0 - 2.0 / u);
        let next = (u - step).max(2.0 + 1e-12);
        if (next - u).abs() <= 1e-12 * u {
            u = next;
            break;
        }
        u = next;
    }
    u.exp()
}

/// `(log B, log b)` from the liminf definitions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthConstants {
    pub log_big_b: f64,
    pub log_small_b: f64,
    /// Horizon used by the numerical fallback for tables.
    pub horizon: Option<usize>,
}

impl GrowthConstants {
    pub fn big_b(&self) -> f64 {
        self.log_big_b.exp()
    }

    pub fn small_b(&self) -> f64 {
        self.log_small_b.exp()
    }

    pub fn is_subexponential(&self) -> bool {
        self.log_big_b == 0.0
    }

    pub fn is_superexponential(&self) -> bool {
        self.log_big_b == f64::INFINITY
    }
}

/// Closed-form growth constants; tables use the running liminf over the
/// second half of the table.
pub fn growth_constants(f: &GrowthFunction) -> Result<GrowthConstants> {
    let closed = |log_big_b, log_small_b| GrowthConstants {
        log_big_b,
        log_small_b,
        horizon: None,
    };
    match f {
        GrowthFunction::PowerLog { .. } => Ok(closed(0.0, 0.0)),
        GrowthFunction::Exponential { base } => Ok(closed(base.ln(), 0.0)),
        GrowthFunction::DoublyExponential { rate, .. } => Ok(closed(f64::INFINITY, rate.ln())),
        GrowthFunction::Normalized(inner) => growth_constants(inner),
        GrowthFunction::Table(values) => {
            if values.len() < MIN_TABLE_LEN {
                return Err(Error::domain(format!(
                    "insufficient data: table has {} values, need at least {MIN_TABLE_LEN}",
                    values.len()
                )));
            }
            let len = values.len();
            let log_big_b = (len / 2..=len)
                .map(|n| f.log_phi(n as u64) / n as f64)
                .fold(f64::INFINITY, f64::min);
            // a finite table cannot witness B = ∞, so b stays 1
            Ok(GrowthConstants {
                log_big_b,
                log_small_b: 0.0,
                horizon: Some(len),
            })
        }
    }
}

/// Which zero-one law series to classify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `Σ log^{ℓ−1} φ(n) / φ(n)` (single blocks of length ℓ).
    Hwx(u32),
    /// `Σ n / φ(n)²` (pairs of single quotients).
    Ttw,
    /// `Σ n log φ(n) / φ(n)² + 1 / φ(n)` (pairs of length-2 blocks).
    Tz,
    /// `Σ n log⁴ φ(n) / φ(n)² + log φ(n) / φ(n)` (pairs of length-3 blocks).
    Main3,
}

impl Theorem {
    pub fn label(&self) -> String {
        match self {
            Theorem::Hwx(l) => format!("HWX{l}"),
            Theorem::Ttw => "TTW".into(),
            Theorem::Tz => "TZ".into(),
            Theorem::Main3 => "MAIN3".into(),
        }
    }

    /// Each term as `(power of n, power of log φ, power of 1/φ)`.
    fn terms(&self) -> Vec<(f64, f64, f64)> {
        match self {
            Theorem::Hwx(l) => vec![(0.0, (*l as f64) - 1.0, 1.0)],
            Theorem::Ttw => vec![(1.0, 0.0, 2.0)],
            Theorem::Tz => vec![(1.0, 1.0, 2.0), (0.0, 0.0, 1.0)],
            Theorem::Main3 => vec![(1.0, 4.0, 2.0), (0.0, 1.0, 1.0)],
        }
    }

    /// The `n`-th term of the series for a concrete `φ`.
    pub fn term(&self, f: &GrowthFunction, n: u64) -> f64 {
        let log_phi = f.log_phi(n);
        self.terms()
            .into_iter()
            .map(|(a, b, c)| ((n as f64).ln() * a + log_phi.ln() * b - c * log_phi).exp())
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Exponents of `n^p (log n)^q (log log n)^r`, or exponential growth.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Order {
    Poly([f64; 3]),
    Exp,
}

const ORDER_EPS: f64 = 1e-12;

impl Order {
    const EXPONENTIAL: Order = Order::Exp;

    fn new(p: f64, q: f64, r: f64) -> Self {
        Order::Poly([p, q, r])
    }

    fn cmp_lex(a: &[f64; 3], b: &[f64; 3]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            if (x - y).abs() > ORDER_EPS {
                return x.partial_cmp(y).unwrap_or(Ordering::Equal);
            }
        }
        Ordering::Equal
    }

    fn max(self, other: Order) -> Order {
        match (self, other) {
            (Order::Exp, _) | (_, Order::Exp) => Order::Exp,
            (Order::Poly(a), Order::Poly(b)) => {
                if Self::cmp_lex(&a, &b) == Ordering::Less {
                    Order::Poly(b)
                } else {
                    Order::Poly(a)
                }
            }
        }
    }

    /// Order of `log φ` for `φ` of this order.
    fn log(self) -> [f64; 3] {
        match self {
            Order::Exp => unreachable!("log of exponential order is not tracked"),
            Order::Poly([p, q, _]) => {
                if p > ORDER_EPS {
                    [0.0, 1.0, 0.0]
                } else if q > ORDER_EPS {
                    [0.0, 0.0, 1.0]
                } else {
                    [0.0, 0.0, 0.0]
                }
            }
        }
    }
}

/// Integral test for `Σ n^p (log n)^q (log log n)^r`.
fn sum_converges(e: [f64; 3]) -> bool {
    Order::cmp_lex(&e, &[-1.0, -1.0, -1.0]) == Ordering::Less
}

/// Convergence of a zero-one law series for `φ`.
///
/// Parametric families are classified exactly by comparing exponents.
/// Tables fall back to a partial-sum heuristic that may be inconclusive.
pub fn classify_series(f: &GrowthFunction, theorem: Theorem) -> Classification {
    match f.order() {
        Some(Order::Exp) => Classification::Convergent,
        Some(order @ Order::Poly(phi)) => {
            let log_phi = order.log();
            let all = theorem.terms().into_iter().all(|(a, b, c)| {
                let e = [
                    a + b * log_phi[0] - c * phi[0],
                    b * log_phi[1] - c * phi[1],
                    b * log_phi[2] - c * phi[2],
                ];
                sum_converges(e)
            });
            if all {
                Classification::Convergent
            } else {
                Classification::Divergent
            }
        }
        None => classify_by_partial_sums(f, theorem),
    }
}

fn classify_by_partial_sums(f: &GrowthFunction, theorem: Theorem) -> Classification {
    let len = match f {
        GrowthFunction::Table(v) => v.len() as u64,
        _ => 1_000_000,
    };
    let half = len / 2;
    let mut head = 0.0;
    let mut total = 0.0;
    for n in 1..=len {
        let t = theorem.term(f, n);
        total += t;
        if n <= half {
            head += t;
        }
    }
    if total == 0.0 {
        return Classification::Convergent;
    }
    let share = (total - head) / total;
    if share >= 0.3 {
        Classification::Divergent
    } else if share <= 0.01 {
        Classification::Convergent
    } else {
        Classification::Inconclusive
    }
}
