//! The `sfomon` command line.
//!
//! ```text
//! sfomon monitor  --spec S --trace T|- --period Q [--out P] [--decimal K]
//! sfomon eval     --spec S --trace T --at Q [--decimal K]
//! sfomon check    --spec S --trace T [--grid N] [--margin Q] [--points N]
//! sfomon pastify  --spec S [--out P]
//! sfomon bench    --spec S (--trace T | --synthetic N,K [--seed S]) [--period Q] [--out P]
//! ```
//!
//! Exit status is 0 on success, 1 when `check` finds a discrepancy and 2
//! on usage or input errors. Log verbosity follows `SFOMON_LOG`.

mod check;
mod output;

pub use check::{existential_only, run_check, sample_times, CheckOptions, CheckReport};
pub use output::{
    piece_to_wire, segment_from_wire, segment_to_wire, AffineText, NumberFormat, OutputPiece, OutputSegment,
    OutputValue,
};

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::logic::{horizons, normalize, parse, pastify, Formula, ParseError};
use crate::monitor::{eval_at, Monitor, MonitorError, Mutation};
use crate::oracle::ExtReal;
use crate::rational::Rational;
use crate::signals::{read_samples, samples_to_csv, synthetic_samples, SampleReader, SignalError, TimeCheck, Trace};

#[derive(Debug, Parser)]
#[command(name = "sfomon", version, about = "Exact online robustness monitoring of signal first-order logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream robustness segments for a trace, one JSON line per period.
    Monitor(RunConfig),
    /// Exact robustness at one time point of a full trace.
    Eval(RunConfig),
    /// Compare the monitor against the brute-force semantics.
    Check(RunConfig),
    /// Print the formula shifted by its forward horizon.
    Pastify(RunConfig),
    /// Time the monitor per segment.
    Bench(RunConfig),
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Formula file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Trace CSV file, or `-` for stdin.
    #[arg(long)]
    pub trace: Option<String>,
    /// Sampling period.
    #[arg(long, allow_hyphen_values = true)]
    pub period: Option<Rational>,
    /// Evaluation time.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<Rational>,
    /// Oracle grid points per quantifier.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// Robustness magnitude below which signs are not compared.
    #[arg(long, default_value = "1/100", allow_hyphen_values = true)]
    pub margin: Rational,
    /// Time points sampled by `check`.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Output file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print numbers as decimals with this many digits.
    #[arg(long)]
    pub decimal: Option<usize>,
    /// Generate N segments of K random signals instead of reading a trace.
    #[arg(long, value_parser = parse_synthetic)]
    pub synthetic: Option<(usize, usize)>,
    /// Seed for `--synthetic`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Inject a known defect (self-test of `check`).
    #[arg(long, hide = true)]
    pub mutate: Option<MutationArg>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum MutationArg {
    Negation,
}

fn parse_synthetic(s: &str) -> Result<(usize, usize), String> {
    let (n, k) = s.split_once(',').ok_or("expected N,K")?;
    let n = n.trim().parse().map_err(|_| format!("invalid segment count `{n}`"))?;
    let k = k.trim().parse().map_err(|_| format!("invalid signal count `{k}`"))?;
    Ok((n, k))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{0}", path = .1)]
    Parse(ParseError, String),
    #[error(transparent)]
    Monitor(#[from] MonitorError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
}

impl RunConfig {
    fn spec_path(&self) -> Result<&PathBuf, CliError> {
        self.spec.as_ref().ok_or_else(|| CliError::Usage("missing --spec".into()))
    }

    fn number_format(&self) -> NumberFormat {
        self.decimal.map_or(NumberFormat::Exact, NumberFormat::Decimal)
    }

    fn mutation(&self) -> Option<Mutation> {
        self.mutate.map(|MutationArg::Negation| Mutation::NegationKeepsSign)
    }

    fn trace_input(&self) -> Result<Box<dyn Read>, CliError> {
        match self.trace.as_deref() {
            None => Err(CliError::Usage("missing --trace".into())),
            Some("-") => Ok(Box::new(io::stdin().lock())),
            Some(p) => File::open(p)
                .map(|f| Box::new(BufReader::new(f)) as Box<dyn Read>)
                .map_err(|source| CliError::Io {
                    path: p.to_string(),
                    source,
                }),
        }
    }

    fn output(&self) -> Result<Box<dyn Write>, CliError> {
        match &self.out {
            None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
            Some(p) => File::create(p)
                .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
                .map_err(|source| CliError::Io {
                    path: p.display().to_string(),
                    source,
                }),
        }
    }

    fn period(&self) -> Result<Rational, CliError> {
        match &self.period {
            None => Err(CliError::Usage("missing --period".into())),
            Some(p) if !p.is_positive() => Err(CliError::Usage(format!("--period must be positive, got {p}"))),
            Some(p) => Ok(p.clone()),
        }
    }

    fn full_trace(&self) -> Result<Trace, CliError> {
        let samples = read_samples(self.trace_input()?, TimeCheck::Increasing)?;
        Ok(Trace::from_samples(&samples)?)
    }
}

pub fn load_spec(path: &PathBuf) -> Result<Formula, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text).map_err(|e| CliError::Parse(e, path.display().to_string()))
}

fn show_value(v: &ExtReal, fmt: NumberFormat) -> String {
    match v {
        ExtReal::Finite(r) => fmt.show(r),
        other => other.to_string(),
    }
}

pub fn cmd_monitor(cfg: &RunConfig) -> Result<u8, CliError> {
    let phi = load_spec(cfg.spec_path()?)?;
    let period = cfg.period()?;
    let mut monitor = Monitor::new(&phi, period.clone())?.with_mutation(cfg.mutation());
    eprintln!("shift: {}", monitor.shift());
    log::info!("monitoring {} with backward horizon {}", monitor.formula(), monitor.horizon());
    let reader = SampleReader::new(cfg.trace_input()?, TimeCheck::Period(period))?;
    let mut out = cfg.output()?;
    let t = monitor.prepared().time;
    let fmt = cfg.number_format();
    for sample in reader {
        if let Some(seg) = monitor.push(sample?)? {
            let wire = segment_to_wire(&seg, t, fmt);
            serde_json::to_writer(&mut out, &wire).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
            log::debug!("segment {} stored pieces {}", seg.index, monitor.stored_pieces());
        }
    }
    out.flush()?;
    Ok(0)
}

pub fn cmd_eval(cfg: &RunConfig) -> Result<u8, CliError> {
    let phi = load_spec(cfg.spec_path()?)?;
    let at = cfg.at.clone().ok_or_else(|| CliError::Usage("missing --at".into()))?;
    let trace = cfg.full_trace()?;
    let v = eval_at(&trace, &at, &phi)?;
    let mut out = cfg.output()?;
    writeln!(out, "{}", show_value(&v.value, cfg.number_format()))?;
    out.flush()?;
    Ok(0)
}

pub fn cmd_check(cfg: &RunConfig) -> Result<u8, CliError> {
    let phi = load_spec(cfg.spec_path()?)?;
    if cfg.grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let trace = cfg.full_trace()?;
    let opts = CheckOptions {
        points: cfg.points,
        grid: cfg.grid,
        margin: cfg.margin.clone(),
        mutation: cfg.mutation(),
    };
    let report = run_check(&trace, &phi, &opts)?;
    let mut out = cfg.output()?;
    for d in &report.discrepancies {
        writeln!(out, "discrepancy: {d}")?;
    }
    writeln!(
        out,
        "points {} sign-checked {} inconclusive {} shift-checked {} max-gap {} discrepancies {}",
        report.points,
        report.sign_checked,
        report.inconclusive,
        report.shift_checked,
        report.max_gap.map_or("n/a".to_string(), |g| format!("{g:.3e}")),
        report.discrepancies.len()
    )?;
    out.flush()?;
    Ok(if report.discrepancies.is_empty() { 0 } else { 1 })
}

pub fn cmd_pastify(cfg: &RunConfig) -> Result<u8, CliError> {
    let phi = load_spec(cfg.spec_path()?)?;
    let h = horizons(&phi).map_err(MonitorError::from)?;
    let past = pastify(&phi, &h.forward).map_err(MonitorError::from)?;
    let back = horizons(&past).map_err(MonitorError::from)?;
    eprintln!("shift: {}", h.forward);
    let mut out = cfg.output()?;
    writeln!(out, "# shifted by {}; backward horizon {}", h.forward, back.backward)?;
    writeln!(out, "{}", normalize(&past))?;
    out.flush()?;
    Ok(0)
}

/// Timing summary of a benchmark run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BenchReport {
    pub segments: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub max_ms: f64,
    pub peak_pieces: usize,
    pub memory_bound: usize,
}

/// Monitor `samples` and time every segment.
pub fn bench_samples(
    phi: &Formula,
    period: &Rational,
    samples: impl IntoIterator<Item = Result<crate::signals::SamplePoint, SignalError>>,
) -> Result<BenchReport, CliError> {
    let mut monitor = Monitor::new(phi, period.clone())?;
    let mut times = Vec::new();
    let mut peak = 0;
    for s in samples {
        let s = s?;
        let start = Instant::now();
        let seg = monitor.push(s)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        peak = peak.max(monitor.stored_pieces());
        if seg.is_some() {
            times.push(elapsed);
        }
    }
    let n = times.len();
    let mean = if n == 0 { 0.0 } else { times.iter().sum::<f64>() / n as f64 };
    let max = times.iter().cloned().fold(0.0, f64::max);
    times.sort_by(f64::total_cmp);
    let median = if n == 0 { 0.0 } else { times[n / 2] };
    Ok(BenchReport {
        segments: n,
        mean_ms: mean,
        median_ms: median,
        max_ms: max,
        peak_pieces: peak,
        memory_bound: monitor.memory_bound(),
    })
}

/// Signal names for a synthetic trace: the formula's signals first, then
/// `s<i>` fillers up to `k`.
pub fn synthetic_names(phi: &Formula, k: usize) -> Result<Vec<String>, CliError> {
    let mut names = phi.signals();
    if names.len() > k {
        return Err(CliError::Usage(format!(
            "the formula reads {} signals but --synthetic asks for {k}",
            names.len()
        )));
    }
    let mut i = 0;
    while names.len() < k {
        let candidate = format!("s{i}");
        if !names.contains(&candidate) {
            names.push(candidate);
        }
        i += 1;
    }
    names.sort();
    Ok(names)
}

pub fn cmd_bench(cfg: &RunConfig) -> Result<u8, CliError> {
    let phi = load_spec(cfg.spec_path()?)?;
    let report = match (cfg.synthetic, &cfg.trace) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --trace or --synthetic".into())),
        (Some((n, k)), None) => {
            let period = cfg.period.clone().unwrap_or_else(|| Rational::new(1, 10));
            if !period.is_positive() {
                return Err(CliError::Usage("--period must be positive".into()));
            }
            let samples = synthetic_samples(&synthetic_names(&phi, k)?, n, &period, cfg.seed);
            if let Some(path) = &cfg.out {
                std::fs::write(path, samples_to_csv(&samples)).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            bench_samples(&phi, &period, samples.into_iter().map(Ok))?
        }
        (None, Some(_)) => {
            let period = cfg.period()?;
            let reader = SampleReader::new(cfg.trace_input()?, TimeCheck::Period(period.clone()))?;
            bench_samples(&phi, &period, reader)?
        }
        (None, None) => return Err(CliError::Usage("missing --trace or --synthetic".into())),
    };
    let text = serde_json::to_string(&report).map_err(io::Error::from)?;
    println!("{text}");
    Ok(0)
}

/// Dispatch a parsed command line; returns the process exit status.
pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Monitor(c) => cmd_monitor(c),
        Command::Eval(c) => cmd_eval(c),
        Command::Check(c) => cmd_check(c),
        Command::Pastify(c) => cmd_pastify(c),
        Command::Bench(c) => cmd_bench(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Read JSON-lines monitor output back into segments.
pub fn read_segments(
    input: impl BufRead,
    t: crate::polyhedra::Var,
) -> Result<Vec<crate::monitor::RobustnessSegment>, String> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        let wire: OutputSegment = serde_json::from_str(&line).map_err(|e| e.to_string())?;
        out.push(segment_from_wire(&wire, t)?);
    }
    Ok(out)
}
