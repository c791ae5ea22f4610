//! Nested-loop evaluation of the lattice series.
//!
//! Products are enumerated one variable at a time. Infinite ranges are closed
//! with a Hurwitz tail `Σ_{k≥m} k^{−t}` built from its asymptotic expansion
//! at a large shift, independent of the library's zeta code.

/// `B_{2j} / (2j)!` for `j = 1..=6`.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

const SHIFT: u64 = 2000;

/// `Σ_{k≥n} k^{−t}` for `n ≥ SHIFT` by its asymptotic series.
fn hurwitz_asymptotic(t: f64, n: u64) -> f64 {
    let x = n as f64;
    let mut s = x.powf(1.0 - t) / (t - 1.0) + 0.5 * x.powf(-t);
    // −f^{(2j−1)}(x) = t (t+1) ⋯ (t+2j−2) x^{−t−2j+1}
    let mut rising = t;
    for (i, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let j = (i + 1) as f64;
        s += c * rising * x.powf(-t - 2.0 * j + 1.0);
        rising *= (t + 2.0 * j - 1.0) * (t + 2.0 * j);
    }
    s
}

pub struct Oracle {
    t: f64,
    /// `tails[m] = Σ_{k≥m} k^{−t}` for `1 ≤ m ≤ SHIFT`.
    tails: Vec<f64>,
}

fn pow_neg(a: u64, t: f64) -> f64 {
    if t == 2.0 {
        let x = a as f64;
        1.0 / (x * x)
    } else {
        (a as f64).powf(-t)
    }
}

impl Oracle {
    pub fn new(t: f64) -> Self {
        assert!(t > 1.0);
        let mut tails = vec![0.0; SHIFT as usize + 1];
        tails[SHIFT as usize] = hurwitz_asymptotic(t, SHIFT);
        for m in (1..SHIFT).rev() {
            tails[m as usize] = tails[m as usize + 1] + pow_neg(m, t);
        }
        Oracle { t, tails }
    }

    /// `Σ_{k≥m} k^{−t}`.
    pub fn tail(&self, m: u64) -> f64 {
        let m = m.max(1);
        if m <= SHIFT {
            self.tails[m as usize]
        } else {
            hurwitz_asymptotic(self.t, m)
        }
    }

    pub fn zeta(&self) -> f64 {
        self.tails[1]
    }

    /// `Σ (a₁⋯a_k)^{−t}` over tuples with product at least `c`.
    pub fn product_tail(&self, k: usize, c: u64) -> f64 {
        if c <= 1 {
            return self.zeta().powi(k as i32);
        }
        match k {
            0 => 0.0,
            1 => self.tail(c),
            _ => {
                let mut s = self.zeta().powi(k as i32 - 1) * self.tail(c);
                for a in 1..c {
                    s += pow_neg(a, self.t) * self.product_tail(k - 1, c.div_ceil(a));
                }
                s
            }
        }
    }
}

/// Calls `f(product, weight)` for every `k`-tuple with product `≤ limit`,
/// `weight = product^{−t}`.
pub fn each_tuple(k: usize, limit: u64, t: f64, f: &mut impl FnMut(u64, f64)) {
    fn go(k: usize, limit: u64, t: f64, prod: u64, w: f64, f: &mut impl FnMut(u64, f64)) {
        if k == 0 {
            f(prod, w);
            return;
        }
        let mut a = 1;
        while prod * a <= limit {
            go(k - 1, limit, t, prod * a, w * pow_neg(a, t), f);
            a += 1;
        }
    }
    go(k, limit, t, 1, 1.0, f)
}

/// `Σ_{a₁⋯a_ℓ ≥ M} (a₁⋯a_ℓ)^{−t}`.
pub fn power_tail(ell: usize, m: f64, t: f64) -> f64 {
    Oracle::new(t).product_tail(ell, m.ceil() as u64)
}

/// `Σ_{a₁⋯a_ℓ ≤ M} (a₁⋯a_ℓ)^{−s}`.
pub fn power_box(ell: usize, m: f64, s: f64) -> f64 {
    let mut total = 0.0;
    each_tuple(ell, m.floor() as u64, 1.0, &mut |p, _| {
        total += (p as f64).powf(-s)
    });
    total
}

/// Overlapping pair: `a ∈ ℕ^r, b ∈ ℕ^j, c ∈ ℕ^r` with `AB ≥ M`, `BC ≥ M`.
pub fn overlap(r: usize, j: usize, m: f64) -> f64 {
    let o = Oracle::new(2.0);
    let c = m.ceil() as u64;
    let mut total = o.zeta().powi(2 * r as i32) * o.product_tail(j, c);
    if c > 1 {
        each_tuple(j, c - 1, 2.0, &mut |b, w| {
            let side = o.product_tail(r, c.div_ceil(b));
            total += w * side * side;
        });
    }
    total
}

/// `Σ (a₁⋯a_{ℓ+1})^{−2}` over `a₁⋯a_ℓ < M ≤ a₂⋯a_{ℓ+1}`.
pub fn shifted(ell: usize, m: f64) -> f64 {
    let o = Oracle::new(2.0);
    let c = m.ceil() as u64;
    if c <= 1 {
        return 0.0;
    }
    let mut total = 0.0;
    each_tuple(ell - 1, c - 1, 2.0, &mut |w, weight| {
        let mut first = 0.0;
        let mut a = 1;
        while a * w < c {
            first += pow_neg(a, 2.0);
            a += 1;
        }
        total += weight * first * o.tail(c.div_ceil(w));
    });
    total
}
