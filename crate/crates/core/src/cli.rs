//! Command-line front end. Every subcommand writes machine-readable output;
//! failures go to the diagnostic stream as `{"error": code, "message": ...}`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cf::{convergents, expand_rational, LebesgueStream};
use crate::error::{Error, Result};
use crate::events::hitting_times;
use crate::growth::{classify_series, growth_constants, GrowthFunction, Theorem};
use crate::harness::{self, format_sig, ExperimentConfig};
use crate::pressure::{
    hausdorff_dim, tail_corrected_pressure, transfer_pressure, DimSet, PressureSolverParams,
};
use crate::series::{self, geometric_grid, SeriesId, SeriesParams};

#[derive(Parser, Debug)]
#[command(
    name = "cflab",
    version,
    about = "Continued-fraction block products, series, dimensions and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction of num/den with its convergents.
    Expand(ExpandArgs),
    /// Growth constants (B, b) and series classification of a threshold function.
    Phi(PhiArgs),
    /// First hitting times of the block events on random streams.
    Events(EventsArgs),
    /// Values of a lattice series with error bounds and asymptotic ratios.
    Series(SeriesArgs),
    /// Pressure of the truncated transfer operator.
    Pressure(PressureArgs),
    /// Hausdorff dimension of a limsup set.
    Dim(DimArgs),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long)]
    num: u64,
    #[arg(long)]
    den: u64,
    #[arg(long, default_value_t = 64)]
    max_terms: usize,
    /// `json` prints the quotients, `csv` the convergent table.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct PhiArgs {
    /// powerlog | exp | dexp | const | table
    #[arg(long)]
    family: String,
    /// Comma-separated parameters of the family.
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(Args, Debug)]
struct EventsArgs {
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long)]
    phi_family: String,
    #[arg(long, default_value = "")]
    phi_params: String,
    #[arg(long)]
    horizon: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    samples: u64,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// S01..S07
    #[arg(long)]
    id: String,
    /// Parameters such as `ell=2,t=1.5`.
    #[arg(long, default_value = "")]
    params: String,
    /// Single threshold M.
    #[arg(long = "M", conflicts_with = "m_grid")]
    m: Option<f64>,
    /// Thresholds as `lo:hi:points` (geometric) or a comma list.
    #[arg(long = "M-grid")]
    m_grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PressureMethod {
    /// Digits `1..=N` only.
    Truncated,
    /// Digits `1..=N` plus an estimate of the digits above `N`.
    Tail,
}

#[derive(Args, Debug)]
struct PressureArgs {
    /// Comma list of exponents s.
    #[arg(long, default_value = "0.6,0.7,0.8,0.9,1")]
    s: String,
    /// Comma list of alphabet sizes N.
    #[arg(long = "N", default_value = "100,1000,10000")]
    n: String,
    #[arg(long, value_enum, default_value_t = PressureMethod::Truncated)]
    method: PressureMethod,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct DimArgs {
    /// E1, E2, E3 (any Eℓ), F1, F2 or F3.
    #[arg(long)]
    set: String,
    #[arg(long)]
    phi_family: String,
    #[arg(long, default_value = "")]
    phi_params: String,
    /// Bisection tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Alphabet escalation schedule, comma list.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Run a config file and store result.csv, config.txt and manifest.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; results do not depend on it.
        #[arg(long, env = "CFLAB_THREADS")]
        threads: Option<usize>,
    },
    /// Print the per-checkpoint table of a finished run.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let message = e.render().to_string();
            let _ = writeln!(
                err,
                "{}",
                json!({"error": "usage", "message": message.trim()})
            );
            return 1;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(
                err,
                "{}",
                json!({"error": e.code(), "message": e.to_string()})
            );
            e.exit_code()
        }
    }
}

/// A real as a JSON number rounded to 12 significant digits; infinities
/// and NaN become the strings `inf`, `-inf`, `nan`.
pub fn json_real(x: f64) -> Value {
    let s = format_sig(x, 12);
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => json!(v),
        _ => json!(s),
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )?;
    Ok(())
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::domain(format!("{what}: cannot parse '{t}'")))
        })
        .collect()
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Expand(a) => expand(a, out),
        Command::Phi(a) => phi(a, out),
        Command::Events(a) => events(a, out),
        Command::Series(a) => series_cmd(a, out),
        Command::Pressure(a) => pressure(a, out),
        Command::Dim(a) => dim(a, out),
        Command::Experiment(ExperimentCommand::Run {
            config,
            out: dir,
            threads,
        }) => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg = ExperimentConfig::parse(&text)?;
            if let Some(t) = threads {
                if t == 0 {
                    return Err(Error::config("threads must be ≥ 1"));
                }
                cfg.threads = t;
            }
            let manifest = harness::run_to_dir(&cfg, &dir)?;
            emit_json(out, &serde_json::to_value(&manifest).expect("serializable"))
        }
        Command::Experiment(ExperimentCommand::Report { dir }) => {
            write!(out, "{}", harness::report(&dir)?)?;
            Ok(())
        }
    }
}

fn expand(a: ExpandArgs, out: &mut dyn Write) -> Result<()> {
    let seq = expand_rational(a.num, a.den, a.max_terms)?;
    match a.format {
        Format::Json => emit_json(out, &json!(seq.terms())),
        Format::Csv => {
            writeln!(out, "n,a,p,q")?;
            let conv = convergents(&seq, seq.len())?;
            for (i, (c, a)) in conv.iter().zip(seq.terms()).enumerate() {
                writeln!(out, "{},{},{},{}", i + 1, a, c.p, c.q)?;
            }
            Ok(())
        }
    }
}

fn phi(a: PhiArgs, out: &mut dyn Write) -> Result<()> {
    let f = GrowthFunction::parse(&a.family, &a.params)?;
    let c = growth_constants(&f)?;
    let theorems = [
        Theorem::Hwx(1),
        Theorem::Hwx(2),
        Theorem::Hwx(3),
        Theorem::Ttw,
        Theorem::Tz,
        Theorem::Main3,
    ];
    let classes: serde_json::Map<String, Value> = theorems
        .iter()
        .map(|t| {
            let c = format!("{:?}", classify_series(&f, *t)).to_lowercase();
            (t.label(), json!(c))
        })
        .collect();
    let (family, params) = f.to_spec();
    emit_json(
        out,
        &json!({
            "family": family,
            "params": params,
            "B": json_real(c.big_b()),
            "b": json_real(c.small_b()),
            "classification": classes,
        }),
    )
}

fn events(a: EventsArgs, out: &mut dyn Write) -> Result<()> {
    let phi = GrowthFunction::parse(&a.phi_family, &a.phi_params)?;
    if a.samples == 0 || a.horizon == 0 {
        return Err(Error::domain("samples and horizon must be ≥ 1"));
    }
    writeln!(out, "sample_id,tau_F,tau_E,j,k,overlap")?;
    for id in 0..a.samples {
        let stream = LebesgueStream::new(harness::sample_rng(a.seed, id));
        let t = hitting_times(stream, a.ell, &phi, a.horizon)?;
        let opt = |x: Option<u64>| x.map_or(String::new(), |v| v.to_string());
        let f = t.f_event;
        writeln!(
            out,
            "{id},{},{},{},{},{}",
            opt(f.map(|e| e.tau)),
            opt(t.e_event),
            opt(f.map(|e| e.record.j as u64)),
            opt(f.map(|e| e.record.k as u64)),
            opt(f.map(|e| e.record.overlap as u64)),
        )?;
    }
    Ok(())
}

fn m_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [lo, hi, points] => {
            let bad = || Error::domain(format!("--M-grid: expected lo:hi:points, got '{spec}'"));
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let points: usize = points.trim().parse().map_err(|_| bad())?;
            if !(lo >= 1.0 && hi >= lo && points >= 1) {
                return Err(bad());
            }
            Ok(geometric_grid(lo, hi, points))
        }
        [_] => parse_list("--M-grid", spec),
        _ => Err(Error::domain(format!("--M-grid: cannot parse '{spec}'"))),
    }
}

fn series_cmd(a: SeriesArgs, out: &mut dyn Write) -> Result<()> {
    let id: SeriesId = a.id.parse()?;
    let p: SeriesParams = a.params.parse()?;
    let grid = match (a.m, &a.m_grid) {
        (Some(m), None) => vec![m],
        (None, Some(g)) => m_grid(g)?,
        _ => return Err(Error::domain("give exactly one of --M and --M-grid")),
    };
    let rows = grid
        .iter()
        .map(|&m| {
            let v = series::evaluate(id, &p, m)?;
            let pred = series::predicted(id, &p, m);
            Ok((m, v, pred, v.value / pred))
        })
        .collect::<Result<Vec<_>>>()?;
    match a.format {
        Format::Csv => {
            writeln!(out, "M,value,error_bound,predicted,ratio")?;
            for (m, v, pred, ratio) in rows {
                let cells = [m, v.value, v.abs_error_bound, pred, ratio].map(|x| format_sig(x, 12));
                writeln!(out, "{}", cells.join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(m, v, pred, ratio)| {
                    json!({
                        "M": json_real(m),
                        "value": json_real(v.value),
                        "error_bound": json_real(v.abs_error_bound),
                        "predicted": json_real(pred),
                        "ratio": json_real(ratio),
                        "method": v.method,
                    })
                })
                .collect();
            emit_json(out, &json!({"id": id.to_string(), "rows": rows}))
        }
    }
}

fn pressure(a: PressureArgs, out: &mut dyn Write) -> Result<()> {
    let s_list: Vec<f64> = parse_list("--s", &a.s)?;
    let n_list: Vec<u64> = parse_list("--N", &a.n)?;
    let params = PressureSolverParams::default();
    let mut rows = Vec::new();
    for &n in &n_list {
        for &s in &s_list {
            let p = match a.method {
                PressureMethod::Truncated => transfer_pressure(s, n, &params)?,
                PressureMethod::Tail => tail_corrected_pressure(s, n, &params)?,
            };
            rows.push((s, n, p));
        }
    }
    match a.format {
        Format::Csv => {
            writeln!(out, "s,N,pressure")?;
            for (s, n, p) in rows {
                writeln!(out, "{},{},{}", format_sig(s, 12), n, format_sig(p, 12))?;
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(s, n, p)| json!({"s": json_real(s), "N": n, "pressure": json_real(p)}))
                .collect();
            emit_json(out, &json!(rows))
        }
    }
}

fn dim(a: DimArgs, out: &mut dyn Write) -> Result<()> {
    let set: DimSet = a.set.parse()?;
    let phi = GrowthFunction::parse(&a.phi_family, &a.phi_params)?;
    let mut params = PressureSolverParams {
        bisect_tol: a.tol,
        ..PressureSolverParams::default()
    };
    if let Some(sched) = &a.alphabet {
        params.escalation = parse_list("--alphabet", sched)?;
    }
    let r = hausdorff_dim(set, &phi, &params)?;
    let steps: Vec<Value> = r
        .diagnostics
        .iter()
        .map(|d| {
            json!({
                "alphabet": d.alphabet,
                "s": json_real(d.root),
                "lo": json_real(d.lo),
                "hi": json_real(d.hi),
                "evaluations": d.evaluations,
            })
        })
        .collect();
    emit_json(
        out,
        &json!({
            "set": set.to_string(),
            "s": json_real(r.s),
            "lo": json_real(r.lo),
            "hi": json_real(r.hi),
            "alphabet": r.alphabet,
            "branch": r.branch,
            "converged": r.converged,
            "escalation": steps,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("cflab").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn expand_two_fifths() {
        let (code, out, _) = call(&["expand", "--num", "2", "--den", "5"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!([2, 2]));
    }

    #[test]
    fn expand_csv_convergents() {
        let (code, out, _) = call(&["expand", "--num", "3", "--den", "7", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,a,p,q\n1,2,1,2\n2,3,3,7\n");
    }

    #[test]
    fn domain_error_is_json_on_stderr() {
        let (code, out, err) = call(&["expand", "--num", "5", "--den", "5"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        let v: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["error"], "domain");
    }

    #[test]
    fn unknown_flag_rejected() {
        let (code, _, err) = call(&["expand", "--num", "1", "--den", "2", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("\"usage\""));
    }

    #[test]
    fn json_reals_are_rounded() {
        assert_eq!(json_real(0.1 + 0.2), json!(0.3));
        assert_eq!(json_real(f64::INFINITY), json!("inf"));
    }
}
