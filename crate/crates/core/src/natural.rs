//! Exact non-negative integers with a `u128` fast path.
//!
//! Block products of partial quotients almost always fit in 128 bits, but
//! a single huge quotient can push a product or a running sum past it. The
//! value spills into a `BigUint` only when that happens.

use std::cmp::Ordering;
use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Natural {
    Small(u128),
    Big(BigUint),
}

impl Natural {
    pub fn zero() -> Self {
        Natural::Small(0)
    }

    pub fn one() -> Self {
        Natural::Small(1)
    }

    /// Exact product of a slice of quotients.
    pub fn product(terms: impl IntoIterator<Item = u64>) -> Self {
        let mut acc = Natural::one();
        for a in terms {
            acc.mul_u64(a);
        }
        acc
    }

    pub fn mul_u64(&mut self, a: u64) {
        match self {
            Natural::Small(v) => match v.checked_mul(a as u128) {
                Some(p) => *v = p,
                None => *self = Natural::Big(BigUint::from(*v) * a),
            },
            Natural::Big(b) => *b *= a,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Natural::Small(v) => BigUint::from(*v),
            Natural::Big(b) => b.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Natural::Small(v) => *v as f64,
            Natural::Big(b) => b.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// Natural logarithm, accurate to a few ulps even for huge values.
    pub fn ln(&self) -> f64 {
        match self {
            Natural::Small(v) => (*v as f64).ln(),
            Natural::Big(b) => {
                let bits = b.bits();
                if bits <= 1000 {
                    return b.to_f64().map_or(f64::INFINITY, f64::ln);
                }
                let shift = bits - 64;
                let top = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
                top.ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Natural::Small(v) => *v == 0,
            Natural::Big(b) => b.is_zero(),
        }
    }

    /// `self − other`, saturating at zero.
    pub fn saturating_sub(&self, other: &Natural) -> Natural {
        match (self, other) {
            (Natural::Small(a), Natural::Small(b)) => Natural::Small(a.saturating_sub(*b)),
            _ => {
                let (a, b) = (self.to_biguint(), other.to_biguint());
                if a <= b {
                    Natural::zero()
                } else {
                    Natural::Big(a - b).normalized()
                }
            }
        }
    }

    fn normalized(self) -> Natural {
        match self {
            Natural::Big(b) => match b.to_u128() {
                Some(v) => Natural::Small(v),
                None => Natural::Big(b),
            },
            small => small,
        }
    }
}

impl Default for Natural {
    fn default() -> Self {
        Natural::zero()
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural::Small(v as u128)
    }
}

impl From<u128> for Natural {
    fn from(v: u128) -> Self {
        Natural::Small(v)
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural::Big(v).normalized()
    }
}

impl AddAssign<&Natural> for Natural {
    fn add_assign(&mut self, rhs: &Natural) {
        match (&mut *self, rhs) {
            (Natural::Small(a), Natural::Small(b)) => match a.checked_add(*b) {
                Some(s) => *a = s,
                None => *self = Natural::Big(BigUint::from(*a) + *b),
            },
            (Natural::Big(a), Natural::Small(b)) => *a += *b,
            (Natural::Big(a), Natural::Big(b)) => *a += b,
            (Natural::Small(a), Natural::Big(b)) => *self = Natural::Big(b + *a),
        }
    }
}

impl PartialEq for Natural {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Natural {}

impl PartialOrd for Natural {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Natural {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Natural::Small(a), Natural::Small(b)) => a.cmp(b),
            _ => self.to_biguint().cmp(&other.to_biguint()),
        }
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Natural::Small(v) => write!(f, "{v}"),
            Natural::Big(b) => write!(f, "{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spills_into_bigint() {
        let big = Natural::product([u64::MAX, u64::MAX, 3]);
        assert!(matches!(big, Natural::Big(_)));
        let expected = BigUint::from(u64::MAX) * u64::MAX * 3u32;
        assert_eq!(big.to_biguint(), expected);
        let mut sum = Natural::from(u128::MAX);
        sum += &Natural::one();
        assert_eq!(sum.to_biguint(), BigUint::from(u128::MAX) + 1u32);
        assert!(sum > Natural::from(u128::MAX));
    }

    #[test]
    fn log_of_huge_value() {
        let v = Natural::from(BigUint::from(3u32).pow(2000));
        let expected = 2000.0 * 3f64.ln();
        assert!((v.ln() - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn subtraction_saturates() {
        let a = Natural::from(5u64);
        let b = Natural::from(9u64);
        assert!(a.saturating_sub(&b).is_zero());
        assert_eq!(b.saturating_sub(&a), Natural::from(4u64));
    }
}
