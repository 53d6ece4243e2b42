//! Command-line front end for iccr-core.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on parameter errors,
//! 3 when a verification or gap check fails.

mod rational;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use iccr_core::gaussian_bounds::{outer_region_gaussian, GaussianChannelParams};
use iccr_core::gaussian_schemes::{
    gap_theorem5, gap_theorem6, linear_strategy_region, strategy_sweep, zf_coeffs, CoeffGrid, GapReport,
    RelayCoeffs, SchemeError, Strategy, SweepRow, SWEEP_CSV_HEADER,
};
use iccr_core::lda_bounds::{
    capacity_status, classify_regime, exact_dominant_vertices, symmetric_outer_region, symmetric_outer_region_bits,
    to_f64, CapacityStatus, Rational, SymLdaConfig,
};
use iccr_core::lda_schemes::{build_plan, verify_plan_with, Corner, PlanError, VerificationReport, VerifyMode};
use iccr_core::par::{self, Exec};
use iccr_core::region_geometry::{per_user_gap, RateRegion};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use rational::parse_rational;

const THREADS_ENV: &str = "ICCR_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "iccr-lab", version, about = "Rate regions, scheme verification and gap sweeps for the interference channel with a cognitive relay")]
struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized verification.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CornerArg {
    R1,
    R2,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    #[value(name = "5")]
    Zf,
    #[value(name = "6")]
    SixStream,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regime and capacity status of a symmetric deterministic channel.
    Regime {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Symmetric deterministic outer region, normalized or in bits for `--ns`.
    Outer {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        ns: Option<usize>,
    },
    /// Encode, transmit and decode every (or sampled) message pair of a corner plan.
    VerifyLda {
        #[arg(long)]
        ns: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Message pairs drawn in random mode.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = CornerArg::R1)]
        corner: CornerArg,
    },
    /// Gaussian outer region and, optionally, a linear relay strategy region.
    GaussRegion {
        #[arg(long, allow_hyphen_values = true)]
        hs: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, allow_hyphen_values = true)]
        hc: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta12: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta21: f64,
        #[arg(long)]
        strategy: Option<Strategy>,
        /// `zf`, `silent`, or `a1_re,a1_im,a2_re,a2_im`.
        #[arg(long, default_value = "zf", allow_hyphen_values = true)]
        relay: String,
    },
    /// Gap certification over a channel grid; inadmissible points are skipped.
    GapSweep {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Smallest direct SNR in dB.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        min_db: f64,
        /// Largest direct SNR in dB.
        #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
        max_db: f64,
        #[arg(long, default_value_t = 11)]
        snr_points: usize,
        /// Exponent fractions per gain: hX^2 = (hS^2)^(k / (n - 1)).
        #[arg(long, default_value_t = 21)]
        fractions: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Best sum rate per strategy over a relay coefficient grid.
    Strategies {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_delimiter = ',', default_value = "20,30,40,50,60,70,80", allow_hyphen_values = true)]
        snr_db: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "JD,IaN,Mix12,Mix21")]
        strategies: Vec<Strategy>,
        /// Magnitude grid points per coefficient.
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Param(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn param(msg: impl std::fmt::Display) -> CliError {
    CliError::Param(msg.to_string())
}

/// Artifact plus an optional verification failure message.
struct Outcome {
    body: Vec<u8>,
    failure: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.output.as_ref(), &outcome.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(CliError::Param(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(path: Option<&PathBuf>, body: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => File::create(p)?.write_all(body),
        None => io::stdout().lock().write_all(body),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Auto };
    match &cli.command {
        Command::Regime { alpha, beta } => regime(cli.format, alpha, beta),
        Command::Outer { alpha, beta, ns } => outer(cli.format, alpha, beta, *ns),
        Command::VerifyLda { ns, alpha, beta, mode, trials, corner } => {
            let mode = match mode {
                Mode::Exhaustive => VerifyMode::Exhaustive,
                Mode::Random => VerifyMode::Random { seed: cli.seed.unwrap_or(0), trials: *trials },
            };
            verify_lda(cli.format, *ns, alpha, beta, mode, *corner, exec)
        }
        Command::GaussRegion { hs, hi, hc, theta12, theta21, strategy, relay } => {
            let ch = GaussianChannelParams::with_phases(*hs, *hi, *hc, *theta12, *theta21).map_err(param)?;
            gauss_region(cli.format, &ch, *strategy, relay)
        }
        Command::GapSweep { theorem, min_db, max_db, snr_points, fractions, theta } => {
            gap_sweep(cli.format, *theorem, *min_db, *max_db, *snr_points, *fractions, *theta, exec)
        }
        Command::Strategies { alpha, beta, snr_db, strategies, points } => {
            strategies_cmd(cli.format, alpha, beta, snr_db, strategies, *points, exec)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| param(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(param)
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<(), CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().parse::<usize>().is_ok_and(|n| n > 0) => {
            Err(param(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))
        }
        _ => Ok(()),
    }
}

fn exponents(alpha: &str, beta: &str) -> Result<(Rational, Rational), CliError> {
    let a = parse_rational(alpha).map_err(param)?;
    let b = parse_rational(beta).map_err(param)?;
    if a.is_negative() || b.is_negative() {
        return Err(param(format!("exponents must be non-negative, got alpha={a}, beta={b}")));
    }
    Ok((a, b))
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut body = serde_json::to_vec(value).map_err(io::Error::from)?;
    body.push(b'\n');
    Ok(body)
}

fn csv_table<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn ok(body: Vec<u8>) -> Result<Outcome, CliError> {
    Ok(Outcome { body, failure: None })
}

#[derive(Serialize)]
struct RegimeOut {
    regime: &'static str,
    capacity: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum_capacity: Option<String>,
}

fn regime(format: Format, alpha: &str, beta: &str) -> Result<Outcome, CliError> {
    let (a, b) = exponents(alpha, beta)?;
    let status = capacity_status(a, b);
    let sum_capacity = match &status {
        CapacityStatus::SumCapacityOnly { exact, .. } => Some(exact.to_string()),
        _ => None,
    };
    let out = RegimeOut { regime: classify_regime(a, b).label(), capacity: status.label(), sum_capacity };
    match format {
        Format::Json => ok(json(&out)?),
        Format::Csv => ok(csv_table(
            &["regime", "capacity", "sum_capacity"],
            [[out.regime.to_string(), out.capacity.to_string(), out.sum_capacity.unwrap_or_default()]],
        )?),
    }
}

#[derive(Serialize)]
struct OuterOut {
    alpha: String,
    beta: String,
    regime: &'static str,
    ns: Option<usize>,
    /// Exact dominant corners, scaled by `ns` when given.
    dominant_vertices: Vec<(String, String)>,
    region: RateRegion,
}

fn outer(format: Format, alpha: &str, beta: &str, ns: Option<usize>) -> Result<Outcome, CliError> {
    let (a, b) = exponents(alpha, beta)?;
    let (region, scale) = match ns {
        Some(n) => {
            let cfg = SymLdaConfig::new(n, a, b).map_err(param)?;
            (symmetric_outer_region_bits(&cfg), Rational::from_integer(n as i64))
        }
        None => (symmetric_outer_region(a, b), Rational::from_integer(1)),
    };
    let dominant_vertices = exact_dominant_vertices(a, b)
        .into_iter()
        .map(|(r1, r2)| ((r1 * scale).to_string(), (r2 * scale).to_string()))
        .collect();
    let out = OuterOut {
        alpha: a.to_string(),
        beta: b.to_string(),
        regime: classify_regime(a, b).label(),
        ns,
        dominant_vertices,
        region,
    };
    match format {
        Format::Json => ok(json(&out)?),
        Format::Csv => ok(csv_table(
            &["r1", "r2"],
            out.region.vertices().iter().map(|v| [v.r1.to_string(), v.r2.to_string()]),
        )?),
    }
}

#[derive(Serialize)]
struct CornerReport {
    corner: Corner,
    target_rates: (usize, usize),
    report: VerificationReport,
}

#[derive(Serialize)]
struct VerifyOut {
    ns: usize,
    alpha: String,
    beta: String,
    regime: &'static str,
    reports: Vec<CornerReport>,
    messages_tested: u64,
    failures: u64,
}

fn verify_lda(
    format: Format,
    ns: usize,
    alpha: &str,
    beta: &str,
    mode: VerifyMode,
    corner: CornerArg,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let (a, b) = exponents(alpha, beta)?;
    let cfg = SymLdaConfig::new(ns, a, b).map_err(param)?;
    let corners: &[Corner] = match corner {
        CornerArg::R1 => &[Corner::R1Dominant],
        CornerArg::R2 => &[Corner::R2Dominant],
        CornerArg::Both => &[Corner::R1Dominant, Corner::R2Dominant],
    };
    let mut reports = Vec::new();
    for &c in corners {
        let plan = build_plan(&cfg, c).map_err(plan_error)?;
        let report = verify_plan_with(&plan, mode, exec).map_err(plan_error)?;
        reports.push(CornerReport { corner: c, target_rates: plan.target_rates(), report });
    }
    let out = VerifyOut {
        ns,
        alpha: a.to_string(),
        beta: b.to_string(),
        regime: cfg.regime().label(),
        messages_tested: reports.iter().map(|r| r.report.messages_tested).sum(),
        failures: reports.iter().map(|r| r.report.failures).sum(),
        reports,
    };
    let failure = (out.failures > 0).then(|| format!("{} of {} message pairs decoded wrongly", out.failures, out.messages_tested));
    let body = match format {
        Format::Json => json(&out)?,
        Format::Csv => csv_table(
            &["ns", "alpha", "beta", "regime", "corner", "mode", "r1_bits", "r2_bits", "messages_tested", "failures"],
            out.reports.iter().map(|r| {
                [
                    ns.to_string(),
                    out.alpha.clone(),
                    out.beta.clone(),
                    out.regime.to_string(),
                    corner_label(r.corner).to_string(),
                    mode_label(r.report.mode).to_string(),
                    r.target_rates.0.to_string(),
                    r.target_rates.1.to_string(),
                    r.report.messages_tested.to_string(),
                    r.report.failures.to_string(),
                ]
            }),
        )?,
    };
    Ok(Outcome { body, failure })
}

fn plan_error(e: PlanError) -> CliError {
    match e {
        // Plan construction is checked on every build; a rejected plan is a defect, not a bad parameter.
        PlanError::Invalid(_) | PlanError::Undecodable { .. } | PlanError::Channel(_) | PlanError::MessageLength { .. } => {
            CliError::Io(io::Error::other(e.to_string()))
        }
        _ => param(e),
    }
}

fn corner_label(c: Corner) -> &'static str {
    match c {
        Corner::R1Dominant => "r1",
        Corner::R2Dominant => "r2",
    }
}

fn mode_label(m: VerifyMode) -> &'static str {
    match m {
        VerifyMode::Exhaustive => "exhaustive",
        VerifyMode::Random { .. } => "random",
    }
}

fn parse_relay(text: &str, ch: &GaussianChannelParams) -> Result<RelayCoeffs, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "zf" => zf_coeffs(ch).map_err(param),
        "silent" => Ok(RelayCoeffs::SILENT),
        other => {
            let parts: Vec<f64> = other
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| param(format!("relay {text:?} is not zf, silent or four comma-separated numbers")))?;
            match parts[..] {
                [a, b, c, d] if parts.iter().all(|x| x.is_finite()) => {
                    Ok(RelayCoeffs::new(Complex64::new(a, b), Complex64::new(c, d)))
                }
                _ => Err(param(format!("relay {text:?} needs four finite numbers a1_re,a1_im,a2_re,a2_im"))),
            }
        }
    }
}

#[derive(Serialize)]
struct InnerOut {
    strategy: Strategy,
    coeffs: RelayCoeffs,
    region: RateRegion,
    gap_per_user: f64,
}

#[derive(Serialize)]
struct GaussRegionOut {
    channel: GaussianChannelParams,
    outer: RateRegion,
    inner: Option<InnerOut>,
}

fn gauss_region(
    format: Format,
    ch: &GaussianChannelParams,
    strategy: Option<Strategy>,
    relay: &str,
) -> Result<Outcome, CliError> {
    let outer = outer_region_gaussian(ch);
    let inner = match strategy {
        Some(s) => {
            let coeffs = parse_relay(relay, ch)?;
            let region = linear_strategy_region(ch, &coeffs, s).map_err(param)?;
            let gap_per_user = per_user_gap(&outer, &region);
            Some(InnerOut { strategy: s, coeffs, region, gap_per_user })
        }
        None => None,
    };
    let out = GaussRegionOut { channel: *ch, outer, inner };
    match format {
        Format::Json => ok(json(&out)?),
        Format::Csv => {
            let mut rows: Vec<[String; 3]> =
                out.outer.vertices().iter().map(|v| ["outer".into(), v.r1.to_string(), v.r2.to_string()]).collect();
            if let Some(i) = &out.inner {
                rows.extend(i.region.vertices().iter().map(|v| [i.strategy.label().into(), v.r1.to_string(), v.r2.to_string()]));
            }
            ok(csv_table(&["region", "r1", "r2"], rows)?)
        }
    }
}

#[derive(Serialize)]
struct GapSweepOut {
    theorem: u8,
    bound: f64,
    admissible: usize,
    max_gap: f64,
    all_pass: bool,
    rows: Vec<GapReport>,
}

#[allow(clippy::too_many_arguments)]
fn gap_sweep(
    format: Format,
    theorem: Theorem,
    min_db: f64,
    max_db: f64,
    snr_points: usize,
    fractions: usize,
    theta: f64,
    exec: Exec,
) -> Result<Outcome, CliError> {
    if !(min_db.is_finite() && max_db.is_finite() && min_db <= max_db) {
        return Err(param(format!("need finite min_db <= max_db, got {min_db} and {max_db}")));
    }
    if snr_points == 0 || fractions < 2 || !theta.is_finite() {
        return Err(param("need snr_points >= 1, fractions >= 2 and a finite theta"));
    }
    let dbs: Vec<f64> = if snr_points == 1 {
        vec![min_db]
    } else {
        (0..snr_points).map(|k| min_db + (max_db - min_db) * k as f64 / (snr_points - 1) as f64).collect()
    };
    let fr: Vec<f64> = (0..fractions).map(|k| k as f64 / (fractions - 1) as f64).collect();
    let mut grid = Vec::with_capacity(dbs.len() * fr.len() * fr.len());
    for &db in &dbs {
        let s2 = 10f64.powf(db / 10.0);
        for &i in &fr {
            for &c in &fr {
                let ch = GaussianChannelParams::with_phases(s2.sqrt(), s2.powf(i / 2.0), s2.powf(c / 2.0), theta, theta)
                    .map_err(param)?;
                grid.push(ch);
            }
        }
    }
    let check = match theorem {
        Theorem::Zf => gap_theorem5,
        Theorem::SixStream => gap_theorem6,
    };
    let results: Vec<Result<GapReport, SchemeError>> = par::map(exec, &grid, check);
    let rows: Vec<GapReport> = results.into_iter().filter_map(Result::ok).collect();
    let bound = match theorem {
        Theorem::Zf => iccr_core::gaussian_schemes::theorem5_bound(),
        Theorem::SixStream => iccr_core::gaussian_schemes::THEOREM6_BOUND,
    };
    let out = GapSweepOut {
        theorem: match theorem {
            Theorem::Zf => 5,
            Theorem::SixStream => 6,
        },
        bound,
        admissible: rows.len(),
        max_gap: rows.iter().map(|r| r.gap_per_user).fold(0.0, f64::max),
        all_pass: rows.iter().all(|r| r.pass),
        rows,
    };
    let failed = out.rows.iter().filter(|r| !r.pass).count();
    let failure = (failed > 0).then(|| format!("{failed} of {} admissible points exceed the bound", out.admissible));
    let body = match format {
        Format::Json => json(&out)?,
        Format::Csv => csv_table(
            &[
                "hs2", "hi2", "hc2", "theta12", "theta21", "inner_r1", "inner_r2", "outer_r1", "outer_r2", "gap", "bound",
                "pass",
            ],
            out.rows.iter().map(|r| {
                [
                    r.channel.hs2(),
                    r.channel.hi2(),
                    r.channel.hc2(),
                    r.channel.theta12,
                    r.channel.theta21,
                    r.inner.0,
                    r.inner.1,
                    r.outer.0,
                    r.outer.1,
                    r.gap_per_user,
                    r.bound,
                ]
                .iter()
                .map(f64::to_string)
                .chain(std::iter::once(r.pass.to_string()))
                .collect::<Vec<_>>()
            }),
        )?,
    };
    Ok(Outcome { body, failure })
}

#[derive(Serialize)]
struct StrategiesOut {
    alpha: String,
    beta: String,
    rows: Vec<SweepRow>,
}

fn strategies_cmd(
    format: Format,
    alpha: &str,
    beta: &str,
    snr_db: &[f64],
    strategies: &[Strategy],
    points: usize,
    exec: Exec,
) -> Result<Outcome, CliError> {
    let (a, b) = exponents(alpha, beta)?;
    if snr_db.iter().any(|d| !d.is_finite()) {
        return Err(param("SNR values must be finite"));
    }
    if points.is_zero() {
        return Err(param("points must be at least 1"));
    }
    let grid = CoeffGrid { points, ..CoeffGrid::default() };
    let rows = strategy_sweep(snr_db, to_f64(a), to_f64(b), strategies, &grid, exec).map_err(param)?;
    match format {
        Format::Json => ok(json(&StrategiesOut { alpha: a.to_string(), beta: b.to_string(), rows })?),
        Format::Csv => ok(csv_table(&SWEEP_CSV_HEADER, rows.iter().map(SweepRow::csv_record))?),
    }
}
