//! The `rfubini` command line.
//!
//! Exit codes: 0 on success, 1 when a verification or certificate fails,
//! 2 on malformed arguments or out-of-domain inputs.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::certificates::{
    check_appendix_lemma, check_inequality_lemmas, check_valuation_table, run_certificate_with,
    run_extension, CertificateConfig, CertificateId, CertificateResult,
};
use crate::combinatorics::{r_fubini, r_stirling_explicit, StirlingQuery};
use crate::modular::{r_fubini_mod, residue_stream, Modulus};
use crate::oracles::{enumerate_partitions, enumerate_weak_orders};
use crate::periodicity::{
    detect_period, predict_period, verify_with, PeriodBound, Predictor, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that caps `certify --max-m`.
pub const MAX_M_ENV: &str = "RFUBINI_MAX_M";

pub const DEFAULT_R_RANGE: RangeInclusive<usize> = 1..=6;
pub const DEFAULT_S_RANGE: RangeInclusive<u64> = 2..=300;
pub const DEFAULT_MARGIN: usize = 48;
const DEFAULT_MAX_M: u32 = 14;
const INEQUALITY_MAX_P: u64 = 31;
const VALUATION_I_MAX: u64 = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "rfubini",
    version,
    about = "r-Fubini numbers and the periods of their residues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact F(n, r), or its residue with --mod
    Compute {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// r-Stirling number of the second kind {n, m}_r
    Stirling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// First residues of F(n, r) mod s
    Seq {
        #[arg(long)]
        r: usize,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = SeqFormat::Plain)]
        format: SeqFormat,
    },
    /// Predicted preperiod and period with the per-factor breakdown
    Predict {
        #[arg(long)]
        r: usize,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        json: bool,
    },
    /// Detect the eventual period from streamed residues
    Detect {
        #[arg(long)]
        r: usize,
        #[arg(long = "mod")]
        modulus: u64,
        /// Terms to examine (default: a + 2ω + 16 from the prediction)
        #[arg(long)]
        window: Option<usize>,
        /// Scan every candidate period instead of divisors of the prediction
        #[arg(long)]
        unbounded: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check predictions over a grid of (r, s)
    Verify {
        /// Inclusive range A..B of r values
        #[arg(long, value_parser = parse_range, default_value = "1..6")]
        r: (u64, u64),
        /// Inclusive range C..D of moduli
        #[arg(long = "mod", value_parser = parse_range, default_value = "2..300")]
        modulus: (u64, u64),
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: usize,
        /// Write every report as JSON to this path
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Run the enumeration certificates
    Certify {
        /// C1..C8, appendix, inequalities, valuations, or all
        #[arg(long, default_value = "all")]
        id: String,
        /// Largest m for the appendix lemma and inequality sweeps
        #[arg(long, default_value_t = DEFAULT_MAX_M)]
        max_m: u32,
        /// Skip the supplementary runs beyond the stated ranges
        #[arg(long)]
        no_extensions: bool,
    },
    /// Brute-force counts
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    WeakOrders {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    Partitions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeqFormat {
    Json,
    Csv,
    Plain,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Parses `A..B` (inclusive) or a single `A`.
fn parse_range(text: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim_start_matches('=').trim()),
        None => (text.trim(), text.trim()),
    };
    let lo: u64 = lo.parse().map_err(|_| format!("bad range start `{lo}`"))?;
    let hi: u64 = hi.parse().map_err(|_| format!("bad range end `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Grid and execution settings for a verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub r_range: RangeInclusive<usize>,
    pub s_range: RangeInclusive<u64>,
    pub margin: usize,
    pub parallelism: usize,
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            r_range: DEFAULT_R_RANGE,
            s_range: DEFAULT_S_RANGE,
            margin: DEFAULT_MARGIN,
            parallelism: 1,
            output_path: None,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> std::result::Result<(), String> {
        if self.r_range.is_empty() || self.s_range.is_empty() {
            return Err("sweep ranges must be nonempty".into());
        }
        if *self.r_range.start() == 0 {
            return Err("r must be a positive integer".into());
        }
        if *self.s_range.start() == 0 {
            return Err("modulus must be a positive integer".into());
        }
        if self.parallelism == 0 {
            return Err("parallelism must be at least 1".into());
        }
        Ok(())
    }
}

/// Verifies every `(r, s)` cell, in `(r, s)` order whatever the thread count.
pub fn run_sweep(
    config: &SweepConfig,
    predictor: Predictor,
) -> std::result::Result<Vec<VerificationReport>, String> {
    config.validate()?;
    let cells: Vec<(usize, u64)> = config
        .r_range
        .clone()
        .flat_map(|r| config.s_range.clone().map(move |s| (r, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(r, s)| {
                let s = Modulus::new(s).map_err(|e| e.to_string())?;
                verify_with(r, s, config.margin, predictor).map_err(|e| e.to_string())
            })
            .collect()
    })
}

/// Serializes sweep reports as a newline-terminated JSON array.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    let mut text = serde_json::to_string_pretty(reports).expect("reports serialize");
    text.push('\n');
    text
}

/// Runs the CLI with the standard predictor.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_predictor(args, out, err, predict_period)
}

/// Runs the CLI with `predictor` standing in for the period prediction
/// wherever `verify` uses it.
pub fn run_with_predictor<I, T>(
    args: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
    predictor: Predictor,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, predictor) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = writeln!(err, "\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = std::result::Result<i32, CliError>;

fn dispatch(command: Command, out: &mut dyn Write, predictor: Predictor) -> CliResult {
    match command {
        Command::Compute { r, n, modulus } => {
            match modulus {
                Some(s) => writeln!(out, "{}", r_fubini_mod(n, r, Modulus::new(s)?)?)?,
                None => writeln!(out, "{}", r_fubini(n, r)?)?,
            }
            Ok(EXIT_OK)
        }
        Command::Stirling { n, m, r } => {
            let q = StirlingQuery::new(n, m, r)?;
            writeln!(out, "{}", r_stirling_explicit(&q))?;
            Ok(EXIT_OK)
        }
        Command::Seq {
            r,
            modulus,
            count,
            format,
        } => {
            let s = Modulus::new(modulus)?;
            let values = residue_stream(r, s)?.take_values(count);
            write_seq(out, r, s, &values, format)?;
            Ok(EXIT_OK)
        }
        Command::Predict { r, modulus, json } => {
            let p = predict_period(r, Modulus::new(modulus)?)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&p).expect("prediction serializes")
                )?;
            } else {
                writeln!(
                    out,
                    "r={} s={} a={} omega={} b={}",
                    p.r, p.s, p.a, p.omega, p.b
                )?;
                for f in &p.factors {
                    writeln!(
                        out,
                        "  {}^{}: {} preperiod={} omega={}",
                        f.p,
                        f.m,
                        f.case.as_str(),
                        f.preperiod_factor,
                        f.omega_factor
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Detect {
            r,
            modulus,
            window,
            unbounded,
            json,
        } => {
            let s = Modulus::new(modulus)?;
            let bound: PeriodBound = predict_period(r, s)?.bound();
            let window = window.unwrap_or_else(|| bound.required_window());
            let mut stream = residue_stream(r, s)?;
            let obs = detect_period(&mut stream, window, (!unbounded).then_some(bound))?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&obs).expect("observation serializes")
                )?;
            } else {
                writeln!(
                    out,
                    "preperiod={} period={} window={} conclusive={}",
                    show(obs.preperiod),
                    show(obs.period),
                    obs.window,
                    obs.conclusive
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            r,
            modulus,
            margin,
            report,
            jobs,
        } => {
            let config = SweepConfig {
                r_range: (r.0 as usize)..=(r.1 as usize),
                s_range: modulus.0..=modulus.1,
                margin,
                parallelism: jobs,
                output_path: report,
            };
            verify_command(&config, out, predictor)
        }
        Command::Certify {
            id,
            max_m,
            no_extensions,
        } => certify_command(&id, max_m, !no_extensions, out),
        Command::Oracle { which } => {
            let v = match which {
                OracleCommand::WeakOrders { n, r } => enumerate_weak_orders(n, r)?,
                OracleCommand::Partitions { n, m, r } => enumerate_partitions(n, m, r)?,
            };
            writeln!(out, "{v}")?;
            Ok(EXIT_OK)
        }
    }
}

fn show(v: Option<u64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

#[derive(Serialize)]
struct SeqRecord<'a> {
    r: usize,
    s: u64,
    residues: &'a [u64],
}

fn write_seq(
    out: &mut dyn Write,
    r: usize,
    s: Modulus,
    values: &[u64],
    format: SeqFormat,
) -> std::io::Result<()> {
    match format {
        SeqFormat::Plain => {
            let line: Vec<String> = values.iter().map(u64::to_string).collect();
            writeln!(out, "{}", line.join(" "))
        }
        SeqFormat::Csv => {
            writeln!(out, "n,residue")?;
            for (n, v) in values.iter().enumerate() {
                writeln!(out, "{n},{v}")?;
            }
            Ok(())
        }
        SeqFormat::Json => {
            let rec = SeqRecord {
                r,
                s: s.get(),
                residues: values,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string(&rec).expect("sequence serializes")
            )
        }
    }
}

fn verify_command(config: &SweepConfig, out: &mut dyn Write, predictor: Predictor) -> CliResult {
    let reports = run_sweep(config, predictor).map_err(CliError::Usage)?;
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
    for rep in &failed {
        writeln!(
            out,
            "FAIL r={} s={}: predicted a={} omega={}; observed preperiod={} period={} \
             (valid={} divides={} preperiod_leq_a={})",
            rep.r,
            rep.s,
            rep.prediction.a,
            rep.prediction.omega,
            show(rep.observation.preperiod),
            show(rep.observation.period),
            rep.prediction_valid,
            rep.minimal_divides,
            rep.observed_preperiod_leq_a
        )?;
    }
    let strict = reports
        .iter()
        .filter(|r| r.strict_divisor_observed())
        .count();
    writeln!(
        out,
        "verify: {} cells, {} passed, {} failed, {} with a smaller observed period",
        reports.len(),
        reports.len() - failed.len(),
        failed.len(),
        strict
    )?;
    if let Some(path) = &config.output_path {
        fs::write(path, reports_to_json(&reports))?;
    }
    Ok(if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

enum CertifyTarget {
    One(CertificateId),
    Appendix,
    Inequalities,
    Valuations,
    All,
}

fn parse_certify_target(id: &str) -> std::result::Result<CertifyTarget, crate::Error> {
    Ok(match id.to_ascii_lowercase().as_str() {
        "all" => CertifyTarget::All,
        "appendix" => CertifyTarget::Appendix,
        "inequalities" => CertifyTarget::Inequalities,
        "valuations" => CertifyTarget::Valuations,
        _ => CertifyTarget::One(id.parse()?),
    })
}

/// `--max-m`, lowered to `RFUBINI_MAX_M` when that is set and smaller.
fn effective_max_m(requested: u32) -> u32 {
    std::env::var(MAX_M_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map_or(requested, |cap| requested.min(cap))
}

fn appendix_sweep(max_m: u32) -> CertificateResult {
    let mut total = CertificateResult {
        id: format!("appendix[m=7..={max_m}]"),
        ranges: format!("m in 7..={max_m}, i in 5..=2^(m-6)"),
        checked: 0,
        passed: true,
        counterexamples: Vec::new(),
    };
    for m in 7..=max_m {
        let r = check_appendix_lemma(m).expect("m >= 7");
        total.checked += r.checked;
        total.passed &= r.passed;
        total
            .counterexamples
            .extend(r.counterexamples.into_iter().map(|mut c| {
                c.params = format!("m={m} {}", c.params);
                c
            }));
    }
    total
}

fn certify_command(id: &str, max_m: u32, extensions: bool, out: &mut dyn Write) -> CliResult {
    let target = parse_certify_target(id)?;
    let max_m = effective_max_m(max_m);
    let config = CertificateConfig::default();

    let ids: Vec<CertificateId> = match target {
        CertifyTarget::One(id) => vec![id],
        CertifyTarget::All => CertificateId::ALL.to_vec(),
        _ => Vec::new(),
    };
    let mut main: Vec<CertificateResult> = ids
        .par_iter()
        .map(|&id| run_certificate_with(id, &config))
        .collect();
    let extra: Vec<CertificateResult> = if extensions {
        ids.par_iter()
            .filter_map(|&id| run_extension(id, &config))
            .collect()
    } else {
        Vec::new()
    };
    if matches!(target, CertifyTarget::All | CertifyTarget::Appendix) {
        main.push(appendix_sweep(max_m));
    }
    if matches!(target, CertifyTarget::All | CertifyTarget::Inequalities) {
        main.push(check_inequality_lemmas(max_m.max(2), INEQUALITY_MAX_P));
    }
    if matches!(target, CertifyTarget::All | CertifyTarget::Valuations) {
        main.push(check_valuation_table(VALUATION_I_MAX));
    }

    for res in &main {
        writeln!(out, "{res}")?;
        write_counterexamples(out, res)?;
    }
    for res in &extra {
        writeln!(out, "extension: {res}")?;
        write_counterexamples(out, res)?;
    }
    let failed = main.iter().filter(|r| !r.passed).count();
    writeln!(out, "certify: {} checks, {} failed", main.len(), failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn write_counterexamples(out: &mut dyn Write, res: &CertificateResult) -> std::io::Result<()> {
    const SHOWN: usize = 8;
    for c in res.counterexamples.iter().take(SHOWN) {
        writeln!(out, "  {}: {}", c.params, c.observed)?;
    }
    if res.counterexamples.len() > SHOWN {
        writeln!(out, "  ... {} more", res.counterexamples.len() - SHOWN)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!(parse_range("1..6"), Ok((1, 6)));
        assert_eq!(parse_range("2..=300"), Ok((2, 300)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn sweep_config_validation() {
        let mut c = SweepConfig::default();
        assert!(c.validate().is_ok());
        c.parallelism = 0;
        assert!(c.validate().is_err());
        let c = SweepConfig {
            r_range: 0..=2,
            ..SweepConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
