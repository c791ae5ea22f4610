//! Exact regular continued fractions of numbers in `[0, 1)`.
//!
//! A number `x = [a₁, a₂, …]` is represented by its partial quotients. The
//! convergents satisfy `p₀ = 0, q₀ = 1, p₁ = 1, q₁ = a₁` and
//! `p_{n+1} = a_{n+1} p_n + p_{n−1}`, `q_{n+1} = a_{n+1} q_n + q_{n−1}`;
//! all of them are kept as arbitrary-precision integers.

mod sampler;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use sampler::{open_unit, sample_next_quotient, ContinuantRatioState, LebesgueStream};

/// A finite word of partial quotients, every term at least one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuotientSequence(Vec<u64>);

impl QuotientSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if let Some(pos) = terms.iter().position(|&a| a == 0) {
            return Err(Error::domain(format!(
                "partial quotient at position {} is zero",
                pos + 1
            )));
        }
        Ok(QuotientSequence(terms))
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    fn require(&self, n: usize) -> Result<&[u64]> {
        if n > self.0.len() {
            return Err(Error::Length {
                needed: n,
                available: self.0.len(),
            });
        }
        Ok(&self.0[..n])
    }
}

impl TryFrom<Vec<u64>> for QuotientSequence {
    type Error = Error;

    fn try_from(terms: Vec<u64>) -> Result<Self> {
        QuotientSequence::new(terms)
    }
}

impl AsRef<[u64]> for QuotientSequence {
    fn as_ref(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for QuotientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// The `n`-th convergent `p_n / q_n`, always in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub p: BigUint,
    pub q: BigUint,
}

impl ConvergentPair {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }
}

/// The cylinder `I_n(a)` of numbers whose first `n` partial quotients are `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalInterval {
    pub left: BigRational,
    pub right: BigRational,
    pub length: BigRational,
}

/// Regular continued fraction of `num / den` by the Euclidean algorithm,
/// truncated after `max_terms` quotients.
///
/// `0/den` has the empty expansion. The last quotient of a complete
/// expansion of length > 1 is always at least 2.
pub fn expand_rational(num: u64, den: u64, max_terms: usize) -> Result<QuotientSequence> {
    if den == 0 {
        return Err(Error::domain("denominator must be positive"));
    }
    if num >= den {
        return Err(Error::domain(format!("{num}/{den} is not in [0, 1)")));
    }
    if max_terms == 0 {
        return Err(Error::domain("max_terms must be positive"));
    }
    let (mut num, mut den) = (num, den);
    let mut terms = Vec::new();
    while num != 0 && terms.len() < max_terms {
        terms.push(den / num);
        (num, den) = (den % num, num);
    }
    Ok(QuotientSequence(terms))
}

/// Continuant pair `(q_{n−1}, q_n)` of a word; the empty word gives `(0, 1)`.
pub fn continuant_pair(word: &[u64]) -> (BigUint, BigUint) {
    let mut prev = BigUint::zero();
    let mut cur = BigUint::one();
    for &a in word {
        let next = &cur * a + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    (prev, cur)
}

/// The continuant `q_n(a₁, …, a_n)`.
pub fn continuant(word: &[u64]) -> BigUint {
    continuant_pair(word).1
}

/// Continuant in `u128`, or `None` on overflow.
pub fn continuant_u128(word: &[u64]) -> Option<u128> {
    let mut prev: u128 = 0;
    let mut cur: u128 = 1;
    for &a in word {
        let next = cur.checked_mul(a as u128)?.checked_add(prev)?;
        prev = cur;
        cur = next;
    }
    Some(cur)
}

/// Convergents `(p₁, q₁), …, (p_n, q_n)`.
pub fn convergents(seq: &QuotientSequence, n: usize) -> Result<Vec<ConvergentPair>> {
    let word = seq.require(n)?;
    let (mut p_prev, mut p) = (BigUint::one(), BigUint::zero());
    let (mut q_prev, mut q) = (BigUint::zero(), BigUint::one());
    let mut out = Vec::with_capacity(n);
    for &a in word {
        let p_next = &p * a + &p_prev;
        let q_next = &q * a + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(ConvergentPair {
            p: p.clone(),
            q: q.clone(),
        });
    }
    Ok(out)
}

/// Exact fundamental interval of the first `n` quotients of `seq`.
///
/// The endpoints are `p_n/q_n` and `(p_n + p_{n−1})/(q_n + q_{n−1})`; the
/// first is the left endpoint when `n` is even. The length is
/// `1 / (q_n (q_n + q_{n−1}))`.
pub fn fundamental_interval(seq: &QuotientSequence, n: usize) -> Result<FundamentalInterval> {
    let word = seq.require(n)?;
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for &a in word {
        let p_next = &p * a + &p_prev;
        let q_next = &q * a + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    let convergent = BigRational::new(p.clone(), q.clone());
    let other = BigRational::new(&p + &p_prev, &q + &q_prev);
    let length = BigRational::new(BigInt::one(), &q * (&q + &q_prev));
    let (left, right) = if n % 2 == 0 {
        (convergent, other)
    } else {
        (other, convergent)
    };
    Ok(FundamentalInterval {
        left,
        right,
        length,
    })
}

/// One step of the Gauss map in floating point: `a = ⌊1/x⌋`, `T(x) = 1/x − a`.
///
/// Returns `Ok(None)` at the terminal point `x = 0`.
pub fn gauss_step(x: f64) -> Result<Option<(u64, f64)>> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("{x} is not in [0, 1)")));
    }
    if x == 0.0 {
        return Ok(None);
    }
    let inv = 1.0 / x;
    let a = inv.floor();
    if a >= u64::MAX as f64 {
        return Err(Error::domain(format!("quotient of {x} exceeds u64")));
    }
    Ok(Some((a as u64, inv - a)))
}

/// Exact Gauss map on rationals.
pub fn gauss_step_exact(x: &BigRational) -> Result<Option<(BigUint, BigRational)>> {
    if x.numer().sign() == num_bigint::Sign::Minus || x >= &BigRational::one() {
        return Err(Error::domain(format!("{x} is not in [0, 1)")));
    }
    if x.is_zero() {
        return Ok(None);
    }
    let inv = x.recip();
    let a = inv.floor();
    let image = inv - &a;
    let a = a
        .to_integer()
        .to_biguint()
        .expect("floor of 1/x is positive");
    Ok(Some((a, image)))
}

/// Evaluates `[a₁, …, a_n]` as an `f64`.
pub fn evaluate(word: &[u64]) -> f64 {
    let mut x = 0.0;
    for &a in word.iter().rev() {
        x = 1.0 / (a as f64 + x);
    }
    x
}

/// Converts an exact rational to the nearest `f64`, for reporting only.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
