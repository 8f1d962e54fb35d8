//! The `fairshare` command line: `run`, `sweep` and `verify`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 non-convergence or a
//! failed verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::demand::SolverConfig;
use crate::error::{Error, Result};
use crate::oracle::{centralized_allocate, certify};
use crate::protocol::{self, EngineConfig, RunReport};
use crate::report::{fmt_sig, write_results, write_results_csv, write_trace};
use crate::scenario::{builtin_table1, load_scenario, Scenario, SweepSpec};
use crate::sweep::{reports, sweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fairshare", version, about = "Distributed proportional-fair rate allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the bidding protocol once per domain.
    Run(RunArgs),
    /// Run the protocol over a grid of total rates.
    Sweep(SweepArgs),
    /// Compare the protocol against the centralized optimum.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Source {
    /// Scenario file.
    #[arg(required_unless_present = "table1", conflicts_with = "table1")]
    scenario: Option<PathBuf>,
    /// Use the built-in 54-user three-cell scenario.
    #[arg(long)]
    table1: bool,
    /// Pool all sectors under one MME domain.
    #[arg(long)]
    global_domain: bool,
}

impl Source {
    fn load(&self) -> Result<Scenario> {
        let scenario = match &self.scenario {
            Some(path) => load_scenario(path)?,
            None => builtin_table1(),
        };
        Ok(if self.global_domain { scenario.pooled() } else { scenario })
    }
}

#[derive(Debug, Args)]
struct EngineFlags {
    /// Stop once every sector aggregate bid moves by less than this.
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// Bid damping factor in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
    #[arg(long, default_value_t = 10_000)]
    max_rounds: usize,
}

impl EngineFlags {
    fn config(&self) -> Result<EngineConfig> {
        let cfg = EngineConfig {
            delta: self.delta,
            damping: self.damping,
            max_rounds: self.max_rounds,
            ..EngineConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    engine: EngineFlags,
    /// Give every domain this total rate.
    #[arg(long)]
    rate: Option<f64>,
    /// Results CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write PREFIX.sectors.csv and PREFIX.users.csv round traces.
    #[arg(long, value_name = "PREFIX")]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    engine: EngineFlags,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    end: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    engine: EngineFlags,
    #[arg(long)]
    rate: Option<f64>,
    /// Random transfers tried by the optimality certificate.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Largest accepted |distributed - oracle| per user; default max(1e-2, 10 delta).
    #[arg(long)]
    tolerance: Option<f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Reports go to `out`, diagnostics to `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text = format!("{text}\n{}\n", Cli::command().render_usage());
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_INPUT;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a, out, err),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SolverFailure(_) | Error::DegenerateSector { .. } | Error::DegenerateDomain { .. } => EXIT_NUMERIC,
        _ => EXIT_INPUT,
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be finite and > 0" })
    }
}

fn with_rate(scenario: Scenario, rate: Option<f64>) -> Result<Scenario> {
    Ok(match rate {
        Some(r) => scenario.with_total_rate(positive("rate", r)?),
        None => scenario,
    })
}

fn emit_results<'a>(
    path: &Option<PathBuf>,
    reports: impl IntoIterator<Item = &'a RunReport>,
    out: &mut dyn Write,
) -> Result<()> {
    match path {
        Some(path) => write_results(path, reports),
        None => Ok(write_results_csv(out, reports)?),
    }
}

fn summarize(report: &RunReport, log: &mut dyn Write) -> Result<()> {
    for d in &report.domains {
        if d.converged {
            writeln!(log, "domain {} (R = {}): converged in {} rounds", d.domain, fmt_sig(d.total_rate), d.rounds)?;
        } else {
            writeln!(
                log,
                "domain {} (R = {}): not converged after {} rounds",
                d.domain,
                fmt_sig(d.total_rate),
                d.rounds
            )?;
        }
    }
    Ok(())
}

fn cmd_run(a: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = a.engine.config()?;
    let scenario = with_rate(a.source.load()?, a.rate)?;
    let report = protocol::run(&scenario, &cfg)?;
    emit_results(&a.out, [&report], out)?;
    if let Some(prefix) = &a.trace {
        write_trace(prefix, &report)?;
    }
    summarize(&report, err)?;
    Ok(if report.converged() { EXIT_OK } else { EXIT_NUMERIC })
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = a.engine.config()?;
    let scenario = a.source.load()?;
    let base = scenario.sweep.unwrap_or_default();
    let mut grid = SweepSpec {
        start: a.start.unwrap_or(base.start),
        end: a.end.unwrap_or(base.end),
        step: a.step.unwrap_or(base.step),
    };
    if a.start.is_some() && a.end.is_none() && grid.start > grid.end {
        grid.end = grid.start;
    }
    let points = sweep(&scenario, &cfg, &grid)?;
    emit_results(&a.out, reports(&points), out)?;
    let total: usize = points.iter().map(|p| p.report.domains.len()).sum();
    let failed: Vec<String> = points
        .iter()
        .flat_map(|p| {
            p.report
                .domains
                .iter()
                .filter(|d| !d.converged)
                .map(move |d| format!("{}@{}", d.domain, fmt_sig(p.total_rate)))
        })
        .collect();
    writeln!(
        err,
        "{} points, {} of {} domain runs converged",
        points.len(),
        total - failed.len(),
        total
    )?;
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "not converged: {}", failed.join(" "))?;
        Ok(EXIT_NUMERIC)
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = a.engine.config()?;
    let scenario = with_rate(a.source.load()?, a.rate)?;
    let tolerance = match a.tolerance {
        Some(t) if t >= 0.0 => t,
        Some(t) => {
            return Err(Error::InvalidParameter { name: "tolerance", value: t, reason: "must be >= 0" })
        }
        None => (10.0 * cfg.delta).max(1e-2),
    };
    let report = protocol::run(&scenario, &cfg)?;
    let solver = SolverConfig::default();
    let mut ok = true;
    writeln!(out, "domain,user,distributed,oracle,abs_diff")?;
    for d in &report.domains {
        let specs: Vec<_> = d.users.iter().map(|u| u.utility).collect();
        let oracle = centralized_allocate(&specs, d.total_rate, &solver)?;
        let mut worst = 0.0f64;
        for (u, &r) in d.users.iter().zip(&oracle.rates) {
            let diff = (u.rate - r).abs();
            worst = worst.max(diff);
            writeln!(out, "{},{},{},{},{}", d.domain, u.id, fmt_sig(u.rate), fmt_sig(r), fmt_sig(diff))?;
        }
        let certified = certify(&specs, &oracle.rates, d.total_rate, a.trials);
        let within = worst <= tolerance;
        writeln!(
            out,
            "# domain {}: {} after {} rounds, max |diff| {} (tolerance {}), oracle price {}, certify {}",
            d.domain,
            if d.converged { "converged" } else { "not converged" },
            d.rounds,
            fmt_sig(worst),
            fmt_sig(tolerance),
            fmt_sig(oracle.price),
            if certified { "pass" } else { "fail" }
        )?;
        ok &= within && certified && d.converged;
    }
    writeln!(out, "# verdict: {}", if ok { "PASS" } else { "FAIL" })?;
    Ok(if ok { EXIT_OK } else { EXIT_NUMERIC })
}
