//! Products of blocks of consecutive partial quotients and hitting-time
//! detectors for the limsup sets
//!
//! ```text
//! E_ℓ(φ) = {x : a_n ⋯ a_{n+ℓ−1} ≥ φ(n) for infinitely many n}
//! F_ℓ(φ) = {x : two blocks starting at 1 ≤ j < k ≤ n both reach φ(n), i.m. n}
//! ```
//!
//! Block products are compared with `φ(n)` in log space. Whenever the two
//! logarithms are within a relative band of `1e-9` the comparison is
//! redone with exact integers, provided `φ(n)` is itself an integer.

use std::collections::{BTreeSet, VecDeque};

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::natural::Natural;

/// Relative width of the band in which log-space comparisons are re-checked.
pub const EXACT_BAND: f64 = 1e-9;

/// One block product, 1-based start index.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockProduct {
    pub start: usize,
    pub log_value: f64,
    pub exact: Natural,
}

fn log_product(block: &[u64]) -> f64 {
    block.iter().map(|&a| (a as f64).ln()).sum()
}

/// Decides `product ≥ φ(n)`.
fn reaches(log_value: f64, exact: impl FnOnce() -> Natural, n: u64, phi: &GrowthFunction) -> bool {
    let threshold = phi.log_phi(n);
    let diff = log_value - threshold;
    let band = EXACT_BAND * threshold.abs().max(1.0);
    if diff.abs() > band {
        return diff > 0.0;
    }
    match phi.cmp_exact(n, &exact()) {
        Some(ord) => ord.is_ge(),
        None => diff >= 0.0,
    }
}

/// All products of `ell` consecutive terms; entry `i` covers positions
/// `i..i+ell−1`.
pub fn block_products(seq: &[u64], ell: usize) -> Result<Vec<BlockProduct>> {
    if ell == 0 {
        return Err(Error::domain("block length must be positive"));
    }
    if seq.len() < ell {
        return Err(Error::Length {
            needed: ell,
            available: seq.len(),
        });
    }
    Ok(seq
        .windows(ell)
        .enumerate()
        .map(|(i, w)| BlockProduct {
            start: i + 1,
            log_value: log_product(w),
            exact: Natural::product(w.iter().copied()),
        })
        .collect())
}

/// Incrementally built table of block products with an order-maintained
/// index over their logarithms.
#[derive(Clone, Debug)]
pub struct BlockProductLedger {
    ell: usize,
    quotients: Vec<u64>,
    log_products: Vec<f64>,
    sorted: BTreeSet<(OrderedFloat<f64>, usize)>,
}

impl BlockProductLedger {
    pub fn new(ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::domain("block length must be positive"));
        }
        Ok(BlockProductLedger {
            ell,
            quotients: Vec::new(),
            log_products: Vec::new(),
            sorted: BTreeSet::new(),
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Appends a quotient; returns the start index of the block it completes.
    pub fn push(&mut self, a: u64) -> Option<usize> {
        self.quotients.push(a);
        if self.quotients.len() < self.ell {
            return None;
        }
        let start = self.quotients.len() - self.ell;
        let log = log_product(&self.quotients[start..]);
        self.log_products.push(log);
        self.sorted.insert((OrderedFloat(log), start + 1));
        Some(start + 1)
    }

    /// Number of committed blocks.
    pub fn committed(&self) -> usize {
        self.log_products.len()
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// `log` of the block product starting at `i` (1-based).
    pub fn log_product(&self, i: usize) -> f64 {
        self.log_products[i - 1]
    }

    /// Exact block product starting at `i` (1-based).
    pub fn exact_product(&self, i: usize) -> Natural {
        Natural::product(self.quotients[i - 1..i - 1 + self.ell].iter().copied())
    }

    /// Whether the block starting at `i` reaches `φ(n)`.
    pub fn qualifies(&self, i: usize, n: u64, phi: &GrowthFunction) -> bool {
        reaches(self.log_product(i), || self.exact_product(i), n, phi)
    }

    /// Counts committed blocks reaching `φ(n)`, stopping once `limit` are found.
    pub fn count_reaching(&self, n: u64, phi: &GrowthFunction, limit: usize) -> usize {
        let threshold = phi.log_phi(n);
        let band = EXACT_BAND * threshold.abs().max(1.0);
        let mut count = 0;
        for &(OrderedFloat(log), i) in self.sorted.range((OrderedFloat(threshold - band), 0)..) {
            if count >= limit {
                break;
            }
            if log > threshold + band || self.qualifies(i, n, phi) {
                count += 1;
            }
        }
        count
    }

    /// The entries of the sorted index, in increasing order.
    pub fn sorted_logs(&self) -> impl Iterator<Item = f64> + '_ {
        self.sorted.iter().map(|(l, _)| l.0)
    }
}

/// A pair of qualifying blocks at level `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventRecord {
    pub n: u64,
    pub j: usize,
    pub k: usize,
    /// Number of shared positions, `max(0, j + ℓ − k)`.
    pub overlap: usize,
}

impl EventRecord {
    pub fn new(n: u64, j: usize, k: usize, ell: usize) -> Self {
        EventRecord {
            n,
            j,
            k,
            overlap: (j + ell).saturating_sub(k),
        }
    }
}

/// First hitting time of the `F_ℓ(φ)` event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FEvent {
    pub tau: u64,
    pub record: EventRecord,
}

/// Hitting times of both events along one stream.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HittingTimes {
    pub f_event: Option<FEvent>,
    pub e_event: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Track {
    F,
    E,
    Both,
}

fn scan(
    stream: impl IntoIterator<Item = u64>,
    ell: usize,
    phi: &GrowthFunction,
    from: u64,
    horizon: u64,
    track: Track,
) -> Result<HittingTimes> {
    let mut ledger = BlockProductLedger::new(ell)?;
    let mut out = HittingTimes::default();
    let want_f = track != Track::E;
    let want_e = track != Track::F;
    let mut stream = stream.into_iter();
    for n in 1..=horizon {
        // consume up to index n + ℓ − 1 so the block at n is complete
        while ledger.committed() < n as usize {
            match stream.next() {
                Some(a) => {
                    ledger.push(a);
                }
                None => return Ok(out),
            }
        }
        if n < from {
            continue;
        }
        let idx = n as usize;
        if want_e && out.e_event.is_none() && ledger.qualifies(idx, n, phi) {
            out.e_event = Some(n);
        }
        if want_f && out.f_event.is_none() && ledger.count_reaching(n, phi, 2) >= 2 {
            let mut hits = (1..=idx).filter(|&i| ledger.qualifies(i, n, phi));
            let j = hits.next().expect("two qualifying blocks");
            let k = hits.next().expect("two qualifying blocks");
            out.f_event = Some(FEvent {
                tau: n,
                record: EventRecord::new(n, j, k, ell),
            });
        }
        let done_f = !want_f || out.f_event.is_some();
        let done_e = !want_e || out.e_event.is_some();
        if done_f && done_e {
            break;
        }
    }
    Ok(out)
}

/// Smallest `n ≤ horizon` such that two distinct start indices `j < k ≤ n`
/// carry block products at least `φ(n)`. Blocks may overlap.
pub fn first_f_event(
    stream: impl IntoIterator<Item = u64>,
    ell: usize,
    phi: &GrowthFunction,
    horizon: u64,
) -> Result<Option<FEvent>> {
    Ok(scan(stream, ell, phi, 1, horizon, Track::F)?.f_event)
}

/// Smallest `n ≤ horizon` whose own block reaches `φ(n)`.
pub fn first_e_event(
    stream: impl IntoIterator<Item = u64>,
    ell: usize,
    phi: &GrowthFunction,
    horizon: u64,
) -> Result<Option<u64>> {
    Ok(scan(stream, ell, phi, 1, horizon, Track::E)?.e_event)
}

/// Both hitting times in one pass; stops reading once both are known.
pub fn hitting_times(
    stream: impl IntoIterator<Item = u64>,
    ell: usize,
    phi: &GrowthFunction,
    horizon: u64,
) -> Result<HittingTimes> {
    scan(stream, ell, phi, 1, horizon, Track::Both)
}

/// [`hitting_times`] restricted to levels `from ≤ n ≤ horizon`. Blocks
/// starting before `from` still count towards the `F` event.
pub fn hitting_times_from(
    stream: impl IntoIterator<Item = u64>,
    ell: usize,
    phi: &GrowthFunction,
    from: u64,
    horizon: u64,
) -> Result<HittingTimes> {
    scan(stream, ell, phi, from.max(1), horizon, Track::Both)
}

/// Membership of `A_{n,k}`: both the block at `k` and the block at `n` reach `φ(n)`.
pub fn a_nk_membership(
    seq: &[u64],
    n: usize,
    k: usize,
    ell: usize,
    phi: &GrowthFunction,
) -> Result<bool> {
    if ell == 0 {
        return Err(Error::domain("block length must be positive"));
    }
    if k == 0 || k >= n {
        return Err(Error::domain(format!("need 1 ≤ k < n, got k={k}, n={n}")));
    }
    if seq.len() < n + ell - 1 {
        return Err(Error::Length {
            needed: n + ell - 1,
            available: seq.len(),
        });
    }
    let check = |i: usize| {
        let block = &seq[i - 1..i - 1 + ell];
        reaches(
            log_product(block),
            || Natural::product(block.iter().copied()),
            n as u64,
            phi,
        )
    };
    Ok(check(k) && check(n))
}

/// Streaming sums of progression products `a_j a_{j+d} ⋯ a_{j+(ℓ−1)d}`
/// together with their running maximum.
#[derive(Clone, Debug)]
pub struct TrimmedAccumulator {
    ell: usize,
    step: usize,
    window: VecDeque<u64>,
    n: u64,
    sum: Natural,
    max: Natural,
}

/// State of a [`TrimmedAccumulator`] after `n` products.
#[derive(Clone, Debug, PartialEq)]
pub struct TrimmedRow {
    pub n: u64,
    /// `S_{n,ℓ}` (or its progression variant).
    pub sum: Natural,
    /// Largest single product among the first `n`.
    pub max: Natural,
    /// `(S − M) / (n log^ℓ n)`, undefined at `n = 1`.
    pub normalized: Option<f64>,
}

impl TrimmedAccumulator {
    pub fn new(ell: usize, step: usize) -> Result<Self> {
        if ell == 0 || step == 0 {
            return Err(Error::domain("block length and step must be positive"));
        }
        Ok(TrimmedAccumulator {
            ell,
            step,
            window: VecDeque::with_capacity((ell - 1) * step + 1),
            n: 0,
            sum: Natural::zero(),
            max: Natural::zero(),
        })
    }

    fn span(&self) -> usize {
        (self.ell - 1) * self.step + 1
    }

    /// Feeds one quotient; returns `true` when a new product was completed.
    #[inline]
    pub fn push(&mut self, a: u64) -> bool {
        if self.window.len() == self.span() {
            self.window.pop_front();
        }
        self.window.push_back(a);
        if self.window.len() < self.span() {
            return false;
        }
        let product = Natural::product(self.window.iter().step_by(self.step).copied());
        self.sum += &product;
        if product > self.max {
            self.max = product;
        }
        self.n += 1;
        true
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn normalized(&self) -> Option<f64> {
        if self.n < 2 {
            return None;
        }
        let n = self.n as f64;
        let trimmed = self.sum.saturating_sub(&self.max).to_f64();
        Some(trimmed / (n * n.ln().powi(self.ell as i32)))
    }

    pub fn row(&self) -> TrimmedRow {
        TrimmedRow {
            n: self.n,
            sum: self.sum.clone(),
            max: self.max.clone(),
            normalized: self.normalized(),
        }
    }
}

/// `(S_{n,ℓ}, max, normalized)` for every `n = 1..=horizon`.
pub fn trimmed_sum_trajectory(
    stream: impl IntoIterator<Item = u64>,
    ell: usize,
    horizon: u64,
) -> Result<Vec<TrimmedRow>> {
    let mut acc = TrimmedAccumulator::new(ell, 1)?;
    let mut rows = Vec::with_capacity(horizon as usize);
    for a in stream {
        if acc.push(a) {
            rows.push(acc.row());
            if acc.n() == horizon {
                break;
            }
        }
    }
    Ok(rows)
}

/// Exact `S^d_{n,ℓ} = Σ_{j=1}^{n} a_j a_{j+d} ⋯ a_{j+(ℓ−1)d}`.
pub fn progression_sum(seq: &[u64], ell: usize, d: usize, n: usize) -> Result<Natural> {
    if ell == 0 || d == 0 {
        return Err(Error::domain("block length and step must be positive"));
    }
    let needed = n + (ell - 1) * d;
    if seq.len() < needed {
        return Err(Error::Length {
            needed,
            available: seq.len(),
        });
    }
    let mut sum = Natural::zero();
    for j in 0..n {
        sum += &Natural::product((0..ell).map(|t| seq[j + t * d]));
    }
    Ok(sum)
}

/// Running maximum `L_{ℓ,n}` of block products for `n = 1..=horizon`.
pub fn running_max(seq: &[u64], ell: usize, horizon: usize) -> Result<Vec<Natural>> {
    if ell == 0 {
        return Err(Error::domain("block length must be positive"));
    }
    let needed = horizon + ell - 1;
    if seq.len() < needed {
        return Err(Error::Length {
            needed,
            available: seq.len(),
        });
    }
    let mut best = Natural::zero();
    Ok(seq[..needed]
        .windows(ell)
        .map(|w| {
            let p = Natural::product(w.iter().copied());
            if p > best {
                best = p;
            }
            best.clone()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn two() -> GrowthFunction {
        GrowthFunction::constant(2.0).unwrap()
    }

    #[test]
    fn block_product_examples() {
        let p: Vec<Natural> = block_products(&[1, 2, 3, 4], 3)
            .unwrap()
            .into_iter()
            .map(|b| b.exact)
            .collect();
        assert_eq!(p, vec![nat(6), nat(24)]);
        let p = block_products(&[2, 2, 2], 3).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].exact, nat(8));
        assert!((p[0].log_value - 8f64.ln()).abs() < 1e-15);
        let p: Vec<Natural> = block_products(&[5, 1, 1, 5], 1)
            .unwrap()
            .into_iter()
            .map(|b| b.exact)
            .collect();
        assert_eq!(p, vec![nat(5), nat(1), nat(1), nat(5)]);
        assert!(matches!(
            block_products(&[1, 2], 3),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn f_event_examples() {
        let stream = [5u64, 1].iter().copied().cycle();
        let ev = first_f_event(stream, 1, &two(), 100).unwrap().unwrap();
        assert_eq!(ev.tau, 3);
        assert_eq!((ev.record.j, ev.record.k), (1, 3));
        assert_eq!(ev.record.overlap, 0);

        let stream = std::iter::once(5u64).chain(std::iter::repeat(1));
        assert!(first_f_event(stream, 1, &two(), 10_000).unwrap().is_none());
    }

    #[test]
    fn e_event_examples() {
        let phi = GrowthFunction::constant(3.0).unwrap();
        let stream = [1u64, 1, 4].into_iter().chain(std::iter::repeat(1));
        assert_eq!(first_e_event(stream, 1, &phi, 100).unwrap(), Some(3));
        assert_eq!(
            first_e_event(std::iter::repeat(1), 1, &two(), 1000).unwrap(),
            None
        );
    }

    #[test]
    fn exact_tie_is_resolved() {
        // product 8 against φ ≡ 8: equal logs, exact comparison says reached
        let phi = GrowthFunction::constant(8.0).unwrap();
        let stream = [2u64, 2, 2, 2, 1, 1];
        assert_eq!(first_e_event(stream, 3, &phi, 4).unwrap(), Some(1));
        let ev = first_f_event(stream, 3, &phi, 4).unwrap().unwrap();
        assert_eq!(ev.tau, 2);
        assert_eq!(ev.record.overlap, 2);
    }

    #[test]
    fn a_nk_examples() {
        let a = [9u64; 6];
        let phi = GrowthFunction::constant(700.0).unwrap();
        assert!(a_nk_membership(&a, 4, 1, 3, &phi).unwrap());
        let phi = GrowthFunction::constant(730.0).unwrap();
        assert!(!a_nk_membership(&a, 4, 1, 3, &phi).unwrap());
        assert!(a_nk_membership(&a, 4, 4, 3, &phi).is_err());
        assert!(a_nk_membership(&a, 5, 1, 3, &phi).is_err());
    }

    #[test]
    fn trimmed_examples() {
        let rows = trimmed_sum_trajectory(std::iter::repeat(2), 1, 10).unwrap();
        let r = &rows[9];
        assert_eq!((r.n, r.sum.clone(), r.max.clone()), (10, nat(20), nat(2)));
        let expected = 18.0 / (10.0 * 10f64.ln());
        assert!((r.normalized.unwrap() - expected).abs() < 1e-15);
        assert_eq!(rows[0].normalized, None);

        let rows = trimmed_sum_trajectory(std::iter::repeat(1), 3, 50).unwrap();
        for r in &rows {
            assert_eq!(r.sum, nat(r.n));
            assert_eq!(r.max, nat(1));
        }
    }

    #[test]
    fn progression_examples() {
        assert_eq!(progression_sum(&[1, 2, 3, 4, 5], 2, 2, 3).unwrap(), nat(26));
        let a = [3u64, 1, 4, 1, 5, 9, 2, 6];
        let consecutive: Natural = {
            let rows = trimmed_sum_trajectory(a.iter().copied(), 3, 6).unwrap();
            rows[5].sum.clone()
        };
        assert_eq!(progression_sum(&a, 3, 1, 6).unwrap(), consecutive);
        assert!(progression_sum(&a, 3, 4, 2).is_err());
    }

    #[test]
    fn running_max_examples() {
        assert_eq!(
            running_max(&[3, 1, 4, 1], 2, 3).unwrap(),
            vec![nat(3), nat(4), nat(4)]
        );
    }

    #[test]
    fn ledger_sorted_index_matches_entries() {
        let mut ledger = BlockProductLedger::new(2).unwrap();
        for a in [3u64, 1, 4, 1, 5, 9, 2, 6] {
            ledger.push(a);
        }
        assert_eq!(ledger.committed(), 7);
        let mut logs: Vec<f64> = (1..=7).map(|i| ledger.log_product(i)).collect();
        logs.sort_by(f64::total_cmp);
        assert_eq!(ledger.sorted_logs().collect::<Vec<_>>(), logs);
        assert_eq!(ledger.exact_product(5), nat(45));
    }
}
