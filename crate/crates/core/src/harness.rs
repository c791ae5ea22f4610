//! Seeded Monte Carlo experiments over Lebesgue-random continued fractions.
//!
//! Each sample draws its quotient stream from its own generator, seeded from
//! `(seed, sample_id)`, so results do not depend on thread count or
//! scheduling. Samples are reduced in `sample_id` order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cf::{open_unit, LebesgueStream};
use crate::error::{Error, Result};
use crate::events::{hitting_times_from, BlockProductLedger, TrimmedAccumulator};
use crate::growth::GrowthFunction;

/// Name and version recorded in manifests.
pub const TOOL_VERSION: &str = concat!("cflab ", env!("CARGO_PKG_VERSION"));

/// Generator description recorded in manifests.
pub const PRNG: &str = "xoshiro256++ per sample, seeded with splitmix64(seed, sample_id)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Dichotomy,
    Trimmed,
    Khinchin,
    ChungErdos,
}

impl Kind {
    fn name(&self) -> &'static str {
        match self {
            Kind::Dichotomy => "dichotomy",
            Kind::Trimmed => "trimmed",
            Kind::Khinchin => "khinchin",
            Kind::ChungErdos => "chung_erdos",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "dichotomy" => Kind::Dichotomy,
            "trimmed" => Kind::Trimmed,
            "khinchin" => Kind::Khinchin,
            "chung_erdos" | "chung-erdos" => Kind::ChungErdos,
            _ => return Err(Error::config(format!("unknown experiment kind '{s}'"))),
        })
    }
}

/// Source of quotient streams.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StreamSpec {
    Lebesgue,
    /// Every quotient equal to a fixed value (test hook).
    Constant(u64),
}

/// Events used by the Chung–Erdős check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EventSpec {
    /// `A_n(φ)` on the quotient stream.
    ContinuedFraction,
    /// Independent events of probability `p` (test hook).
    Coin(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub ell: usize,
    pub d: usize,
    pub phi: Option<GrowthFunction>,
    pub horizon: u64,
    /// First level at which dichotomy events are looked for (default 1).
    pub from: u64,
    pub samples: u64,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    pub threads: usize,
    pub stream: StreamSpec,
    pub events: EventSpec,
}

const KEYS: &[&str] = &[
    "kind",
    "ell",
    "d",
    "phi_family",
    "phi_params",
    "horizon",
    "from",
    "samples",
    "seed",
    "checkpoints",
    "threads",
    "stream",
    "events",
];

fn default_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
        .take_while(|&x| x < horizon)
        .collect();
    out.push(horizon);
    out
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", i + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::config(format!("line {}: unknown key '{k}'", i + 1)));
            }
            if map.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::config(format!(
                    "line {}: duplicate key '{k}'",
                    i + 1
                )));
            }
        }
        Self::from_map(&map)
    }

    fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let int = |k: &str, default: Option<u64>| -> Result<u64> {
            match get(k) {
                Some(v) => v.parse::<u64>().map_err(|_| {
                    Error::config(format!("{k}: expected a non-negative integer, got '{v}'"))
                }),
                None => default.ok_or_else(|| Error::config(format!("missing key '{k}'"))),
            }
        };
        let kind = Kind::parse(get("kind").ok_or_else(|| Error::config("missing key 'kind'"))?)?;
        let ell = int("ell", Some(1))? as usize;
        let d = int("d", Some(1))? as usize;
        let horizon = int("horizon", None)?;
        let from = int("from", Some(1))?;
        let samples = int("samples", None)?;
        let seed = int("seed", Some(0))?;
        let threads = int("threads", Some(1))? as usize;
        let phi = match (get("phi_family"), get("phi_params")) {
            (Some(f), p) => Some(
                GrowthFunction::parse(f, p.unwrap_or(""))
                    .map_err(|e| Error::config(format!("phi: {e}")))?,
            ),
            (None, Some(_)) => return Err(Error::config("phi_params given without phi_family")),
            (None, None) => None,
        };
        let checkpoints = match get("checkpoints") {
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|x| x.fract() == 0.0 && *x >= 0.0 && *x <= u64::MAX as f64)
                        .map(|x| x as u64)
                        .ok_or_else(|| Error::config(format!("checkpoints: bad value '{s}'")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => default_checkpoints(horizon),
        };
        let stream = match get("stream") {
            None | Some("lebesgue") => StreamSpec::Lebesgue,
            Some(v) => match v.strip_prefix("constant:").map(|x| x.trim().parse::<u64>()) {
                Some(Ok(a)) if a >= 1 => StreamSpec::Constant(a),
                _ => {
                    return Err(Error::config(format!(
                        "stream: expected lebesgue or constant:<a>, got '{v}'"
                    )))
                }
            },
        };
        let events = match get("events") {
            None | Some("cf") => EventSpec::ContinuedFraction,
            Some(v) => match v.strip_prefix("coin:").map(|x| x.trim().parse::<f64>()) {
                Some(Ok(p)) if (0.0..=1.0).contains(&p) => EventSpec::Coin(p),
                _ => {
                    return Err(Error::config(format!(
                        "events: expected cf or coin:<p>, got '{v}'"
                    )))
                }
            },
        };
        let cfg = ExperimentConfig {
            kind,
            ell,
            d,
            phi,
            horizon,
            from,
            samples,
            seed,
            checkpoints,
            threads,
            stream,
            events,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::config("samples must be ≥ 1"));
        }
        if self.ell == 0 || self.d == 0 || self.threads == 0 || self.horizon == 0 {
            return Err(Error::config("ell, d, threads and horizon must be ≥ 1"));
        }
        if self.from == 0 || self.from > self.horizon {
            return Err(Error::config("from must lie in [1, horizon]"));
        }
        if self.from != 1 && self.kind != Kind::Dichotomy {
            return Err(Error::config("from applies to dichotomy runs only"));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::config("checkpoints must be non-empty"));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("checkpoints must be strictly increasing"));
        }
        let lo = match self.kind {
            Kind::Trimmed | Kind::Khinchin => 2,
            _ => 1,
        };
        if self.checkpoints[0] < lo || *self.checkpoints.last().unwrap() > self.horizon {
            return Err(Error::config(format!(
                "checkpoints must lie in [{lo}, horizon = {}]",
                self.horizon
            )));
        }
        let needs_phi = match self.kind {
            Kind::Dichotomy => true,
            Kind::ChungErdos => self.events == EventSpec::ContinuedFraction,
            _ => false,
        };
        if needs_phi && self.phi.is_none() {
            return Err(Error::config("this experiment needs phi_family/phi_params"));
        }
        if self.kind == Kind::Khinchin && self.ell != 1 {
            return Err(Error::config("khinchin experiments use ell = 1"));
        }
        if self.d != 1 && self.kind != Kind::Trimmed {
            return Err(Error::config(
                "a progression step d > 1 applies to trimmed runs only",
            ));
        }
        Ok(())
    }

    /// Sorted `key = value` text that determines the results. `threads` is
    /// omitted because it does not affect them.
    pub fn canonical(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("kind", self.kind.name().to_string());
        map.insert("ell", self.ell.to_string());
        map.insert("d", self.d.to_string());
        if let Some(phi) = &self.phi {
            let (f, p) = phi.to_spec();
            map.insert("phi_family", f);
            map.insert("phi_params", p);
        }
        map.insert("horizon", self.horizon.to_string());
        if self.from != 1 {
            map.insert("from", self.from.to_string());
        }
        map.insert("samples", self.samples.to_string());
        map.insert("seed", self.seed.to_string());
        map.insert(
            "checkpoints",
            self.checkpoints
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert(
            "stream",
            match self.stream {
                StreamSpec::Lebesgue => "lebesgue".into(),
                StreamSpec::Constant(a) => format!("constant:{a}"),
            },
        );
        map.insert(
            "events",
            match self.events {
                EventSpec::ContinuedFraction => "cf".into(),
                EventSpec::Coin(p) => format!("coin:{p}"),
            },
        );
        map.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k} = {v}");
            s
        })
    }

    /// Hex SHA-256 of [`ExperimentConfig::canonical`].
    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sample `id` derived from the run seed.
pub fn child_seed(seed: u64, id: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(id.wrapping_add(0x632b_e59b_d9b4_e019)))
}

/// Generator of sample `id`.
pub fn sample_rng(seed: u64, id: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(child_seed(seed, id))
}

/// Quotient stream of one sample.
pub enum SampleStream {
    Lebesgue(LebesgueStream<Xoshiro256PlusPlus>),
    Constant(u64),
}

impl Iterator for SampleStream {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        match self {
            SampleStream::Lebesgue(s) => s.next(),
            SampleStream::Constant(a) => Some(*a),
        }
    }
}

pub fn sample_stream(cfg: &ExperimentConfig, id: u64) -> SampleStream {
    match cfg.stream {
        StreamSpec::Lebesgue => {
            SampleStream::Lebesgue(LebesgueStream::new(sample_rng(cfg.seed, id)))
        }
        StreamSpec::Constant(a) => SampleStream::Constant(a),
    }
}

fn per_sample<T: Send>(
    cfg: &ExperimentConfig,
    f: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::resource(format!("thread pool: {e}")))?;
    pool.install(|| (0..cfg.samples).into_par_iter().map(&f).collect())
}

fn expect_kind(cfg: &ExperimentConfig, kind: Kind) -> Result<()> {
    cfg.validate()?;
    if cfg.kind != kind {
        return Err(Error::config(format!(
            "expected a {} config, got {}",
            kind.name(),
            cfg.kind.name()
        )));
    }
    Ok(())
}

/// Named columns of real values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    fn new(columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// CSV with a header row and 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_sig(x, 12)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::config("empty CSV"))?;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let rows = lines
            .map(|l| {
                let row = l
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::config(format!("bad CSV cell '{c}'")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if row.len() != columns.len() {
                    return Err(Error::config("ragged CSV row"));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ResultTable { columns, rows })
    }
}

/// `x` with `digits` significant digits, `%g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -5 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

/// Fraction of samples whose first `F`/`E` hitting time is at most each checkpoint.
pub fn run_dichotomy(cfg: &ExperimentConfig) -> Result<ResultTable> {
    expect_kind(cfg, Kind::Dichotomy)?;
    let phi = cfg.phi.as_ref().expect("validated");
    let times = per_sample(cfg, |id| {
        let t = hitting_times_from(sample_stream(cfg, id), cfg.ell, phi, cfg.from, cfg.horizon)?;
        Ok((t.f_event.map(|e| e.tau), t.e_event))
    })?;
    let mut table = ResultTable::new(&["n", "fraction_hit_F", "fraction_hit_E"]);
    let s = cfg.samples as f64;
    for &n in &cfg.checkpoints {
        let hit = |t: &Option<u64>| t.is_some_and(|t| t <= n);
        let f = times.iter().filter(|(f, _)| hit(f)).count() as f64 / s;
        let e = times.iter().filter(|(_, e)| hit(e)).count() as f64 / s;
        table.rows.push(vec![n as f64, f, e]);
    }
    Ok(table)
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Values of `(S − M)/(n log^ℓ n)` at each checkpoint for one sample.
fn trimmed_path(cfg: &ExperimentConfig, id: u64) -> Result<Vec<f64>> {
    let mut acc = TrimmedAccumulator::new(cfg.ell, cfg.d)?;
    let mut out = Vec::with_capacity(cfg.checkpoints.len());
    let mut next = cfg.checkpoints.iter().peekable();
    for a in sample_stream(cfg, id) {
        if acc.push(a) {
            while next.peek().is_some_and(|&&n| n == acc.n()) {
                out.push(acc.normalized().expect("n ≥ 2"));
                next.next();
            }
            if next.peek().is_none() {
                break;
            }
        }
    }
    Ok(out)
}

/// Summary of the trimmed normalized sums across samples.
pub fn run_trimmed(cfg: &ExperimentConfig) -> Result<ResultTable> {
    expect_kind(cfg, Kind::Trimmed)?;
    let paths = per_sample(cfg, |id| trimmed_path(cfg, id))?;
    let mut table = ResultTable::new(&["n", "mean_norm", "median_norm", "q10", "q90"]);
    for (c, &n) in cfg.checkpoints.iter().enumerate() {
        let mut v: Vec<f64> = paths.iter().map(|p| p[c]).collect();
        v.sort_by(f64::total_cmp);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        table.rows.push(vec![
            n as f64,
            mean,
            quantile(&v, 0.5),
            quantile(&v, 0.1),
            quantile(&v, 0.9),
        ]);
    }
    Ok(table)
}

/// Tolerances of the Khinchin weak-law table.
pub const KHINCHIN_EPS: [f64; 2] = [0.1, 0.25];

/// Fraction of samples with `|S_n/(n log n) − 1/log 2| ≥ ε`.
pub fn run_khinchin(cfg: &ExperimentConfig) -> Result<ResultTable> {
    expect_kind(cfg, Kind::Khinchin)?;
    let target = 1.0 / std::f64::consts::LN_2;
    let paths = per_sample(cfg, |id| {
        let mut out = Vec::with_capacity(cfg.checkpoints.len());
        let mut next = cfg.checkpoints.iter().peekable();
        let mut sum: u128 = 0;
        for (i, a) in sample_stream(cfg, id).enumerate() {
            sum = sum.saturating_add(a as u128);
            let n = i as u64 + 1;
            if next.peek().is_some_and(|&&c| c == n) {
                let nf = n as f64;
                out.push(sum as f64 / (nf * nf.ln()));
                next.next();
                if next.peek().is_none() {
                    break;
                }
            }
        }
        Ok(out)
    })?;
    let mut table = ResultTable::new(&["n", "fraction_outside_0.1", "fraction_outside_0.25"]);
    for (c, &n) in cfg.checkpoints.iter().enumerate() {
        let mut row = vec![n as f64];
        for eps in KHINCHIN_EPS {
            let out = paths
                .iter()
                .filter(|p| (p[c] - target).abs() >= eps)
                .count();
            row.push(out as f64 / cfg.samples as f64);
        }
        table.rows.push(row);
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChungErdosResult {
    /// Estimate of `P(∪_{n≤N} E_n)`.
    pub lhs: f64,
    /// Estimate of `(Σ P(E_n))² / Σ_{i,j} P(E_i ∩ E_j)`.
    pub rhs: f64,
    /// Combined standard error of `lhs − rhs`.
    pub stderr: f64,
    pub holds: bool,
    /// No event occurred in any sample.
    pub degenerate: bool,
}

/// Closed forms for `N` independent events of probability `p`.
pub fn coin_closed_form(p: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let lhs = 1.0 - (1.0 - p).powf(nf);
    let rhs = (nf * p).powi(2) / (nf * p + nf * (nf - 1.0) * p * p);
    (lhs, rhs)
}

/// Number of events `E_1..E_N` occurring in one sample.
fn event_count(cfg: &ExperimentConfig, id: u64) -> Result<u64> {
    let n_max = cfg.horizon;
    match cfg.events {
        EventSpec::Coin(p) => {
            let mut rng = sample_rng(cfg.seed, id);
            Ok((0..n_max).filter(|_| open_unit(&mut rng) < p).count() as u64)
        }
        EventSpec::ContinuedFraction => {
            // E_n: the block at n reaches φ(n) and so does some block at k < n
            let phi = cfg.phi.as_ref().expect("validated");
            let mut ledger = BlockProductLedger::new(cfg.ell)?;
            let mut stream = sample_stream(cfg, id);
            let mut count = 0;
            for n in 1..=n_max {
                while ledger.committed() < n as usize {
                    ledger.push(stream.next().expect("endless stream"));
                }
                let idx = n as usize;
                if ledger.qualifies(idx, n, phi) && ledger.count_reaching(n, phi, 2) >= 2 {
                    count += 1;
                }
            }
            Ok(count)
        }
    }
}

/// Finite Chung–Erdős inequality `P(∪ E_n) ≥ (Σ P(E_n))² / ΣΣ P(E_i ∩ E_j)`.
///
/// With `c` the number of events occurring in a sample, `Σ P(E_n) = E[c]`
/// and `ΣΣ P(E_i ∩ E_j) = E[c²]`, diagonal included.
pub fn chung_erdos_check(cfg: &ExperimentConfig) -> Result<ChungErdosResult> {
    expect_kind(cfg, Kind::ChungErdos)?;
    let counts = per_sample(cfg, |id| event_count(cfg, id))?;
    let s = counts.len() as f64;
    let hit = counts.iter().filter(|&&c| c > 0).count() as f64 / s;
    let m1 = counts.iter().map(|&c| c as f64).sum::<f64>() / s;
    let m2 = counts.iter().map(|&c| (c as f64).powi(2)).sum::<f64>() / s;
    if m2 == 0.0 {
        return Ok(ChungErdosResult {
            lhs: 0.0,
            rhs: 0.0,
            stderr: 0.0,
            holds: true,
            degenerate: true,
        });
    }
    let rhs = m1 * m1 / m2;
    // delta method for m1²/m2 from the sample covariance of (c, c²)
    let (mut v11, mut v12, mut v22) = (0.0, 0.0, 0.0);
    for &c in &counts {
        let (x, y) = (c as f64 - m1, (c as f64).powi(2) - m2);
        v11 += x * x;
        v12 += x * y;
        v22 += y * y;
    }
    let denom = (s - 1.0).max(1.0);
    let (v11, v12, v22) = (v11 / denom, v12 / denom, v22 / denom);
    let (g1, g2) = (2.0 * m1 / m2, -m1 * m1 / (m2 * m2));
    let var_rhs = (g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22) / s;
    let var_lhs = hit * (1.0 - hit) / s;
    let stderr = (var_lhs + var_rhs).max(0.0).sqrt();
    Ok(ChungErdosResult {
        lhs: hit,
        rhs,
        stderr,
        holds: hit >= rhs - 3.0 * stderr,
        degenerate: false,
    })
}

/// Result table of any experiment kind.
pub fn run(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.kind {
        Kind::Dichotomy => run_dichotomy(cfg),
        Kind::Trimmed => run_trimmed(cfg),
        Kind::Khinchin => run_khinchin(cfg),
        Kind::ChungErdos => {
            let r = chung_erdos_check(cfg)?;
            let mut t = ResultTable::new(&["N", "lhs", "rhs", "stderr", "holds"]);
            t.rows.push(vec![
                cfg.horizon as f64,
                r.lhs,
                r.rhs,
                r.stderr,
                if r.holds { 1.0 } else { 0.0 },
            ]);
            Ok(t)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub kind: Kind,
    pub seed: u64,
    pub samples: u64,
    pub threads: usize,
    pub prng: String,
    pub started_at: String,
    pub finished_at: String,
    pub output_files: Vec<String>,
}

pub const RESULT_FILE: &str = "result.csv";
pub const CONFIG_FILE: &str = "config.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Writes `contents` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::config(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs `cfg` and stores the result, the canonical config and a manifest in `out`.
pub fn run_to_dir(cfg: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    let started = chrono::Utc::now();
    let table = run(cfg)?;
    fs::create_dir_all(out)?;
    write_atomic(&out.join(RESULT_FILE), table.to_csv().as_bytes())?;
    write_atomic(&out.join(CONFIG_FILE), cfg.canonical().as_bytes())?;
    let manifest = RunManifest {
        config_hash: cfg.config_hash(),
        tool_version: TOOL_VERSION.into(),
        kind: cfg.kind,
        seed: cfg.seed,
        samples: cfg.samples,
        threads: cfg.threads,
        prng: PRNG.into(),
        started_at: started.to_rfc3339(),
        finished_at: chrono::Utc::now().to_rfc3339(),
        output_files: vec![RESULT_FILE.into(), CONFIG_FILE.into()],
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::config(format!("manifest: {e}")))?;
    write_atomic(&out.join(MANIFEST_FILE), json.as_bytes())?;
    Ok(manifest)
}

/// Whitespace-separated per-checkpoint table with `#` comment lines.
pub fn report(dir: &Path) -> Result<String> {
    let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE))?)
        .map_err(|e| Error::config(format!("manifest: {e}")))?;
    let table = ResultTable::from_csv(&fs::read_to_string(dir.join(RESULT_FILE))?)?;
    let mut out = String::new();
    let _ = writeln!(out, "# kind: {}", manifest.kind.name());
    let _ = writeln!(out, "# config: {}", manifest.config_hash);
    let _ = writeln!(
        out,
        "# tool: {}  seed: {}  samples: {}",
        manifest.tool_version, manifest.seed, manifest.samples
    );
    let _ = writeln!(out, "# {}", table.columns.join(" "));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_sig(x, 12)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    Ok(out)
}

/// Draws one raw 64-bit value; exposed for reproducibility checks.
pub fn first_draw(seed: u64, id: u64) -> u64 {
    sample_rng(seed, id).next_u64()
}
