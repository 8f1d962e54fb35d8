//! CSV output of runs, sweeps and traces.
//!
//! Numbers are printed with 9 significant digits in the style of C's `%.9g`,
//! which keeps files byte-identical across runs and platforms for identical
//! inputs.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::protocol::{DomainOutcome, RunReport};

pub const RESULTS_HEADER: &str =
    "scenario,R,domain,sector,user,kind,final_rate,final_bid,price,rounds,converged";
pub const SECTOR_TRACE_HEADER: &str = "round,sector,W,R_l,p_l";
pub const USER_TRACE_HEADER: &str = "round,user,bid,rate";

const DIGITS: i32 = 9;

/// `x` with 9 significant digits, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

fn write_domain_rows(out: &mut (impl Write + ?Sized), scenario: &str, d: &DomainOutcome) -> io::Result<()> {
    for u in &d.users {
        writeln!(
            out,
            "{scenario},{},{},{},{},{},{},{},{},{},{}",
            fmt_sig(d.total_rate),
            d.domain,
            u.sector,
            u.id,
            u.utility.kind(),
            fmt_sig(u.rate),
            fmt_sig(u.bid),
            opt(u.price),
            d.rounds,
            d.converged,
        )?;
    }
    Ok(())
}

/// Header plus one row per user of every report, in the given order.
pub fn write_results_csv<'a>(
    out: &mut (impl Write + ?Sized),
    reports: impl IntoIterator<Item = &'a RunReport>,
) -> io::Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for report in reports {
        for d in &report.domains {
            write_domain_rows(out, &report.scenario, d)?;
        }
    }
    Ok(())
}

pub fn results_csv<'a>(reports: impl IntoIterator<Item = &'a RunReport>) -> String {
    let mut buf = Vec::new();
    write_results_csv(&mut buf, reports).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn write_results<'a>(
    path: impl AsRef<Path>,
    reports: impl IntoIterator<Item = &'a RunReport>,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_results_csv(&mut out, reports)?;
    out.flush()?;
    Ok(())
}

/// Per-sector and per-user trace tables of every domain in `report`.
pub fn write_trace_csv(
    sectors: &mut (impl Write + ?Sized),
    users: &mut (impl Write + ?Sized),
    report: &RunReport,
) -> io::Result<()> {
    writeln!(sectors, "{SECTOR_TRACE_HEADER}")?;
    writeln!(users, "{USER_TRACE_HEADER}")?;
    for d in &report.domains {
        for t in &d.trace {
            for (s, snap) in d.sectors.iter().zip(&t.sectors) {
                writeln!(
                    sectors,
                    "{},{},{},{},{}",
                    t.round,
                    s.id,
                    fmt_sig(snap.aggregate_bid),
                    fmt_sig(snap.rate_share),
                    opt(snap.price)
                )?;
            }
            for (u, snap) in d.users.iter().zip(&t.users) {
                writeln!(users, "{},{},{},{}", t.round, u.id, fmt_sig(snap.bid), fmt_sig(snap.rate))?;
            }
        }
    }
    Ok(())
}

/// Writes `<prefix>.sectors.csv` and `<prefix>.users.csv`.
pub fn write_trace(prefix: impl AsRef<Path>, report: &RunReport) -> Result<()> {
    let prefix = prefix.as_ref().as_os_str().to_os_string();
    let with = |suffix: &str| {
        let mut p = prefix.clone();
        p.push(suffix);
        p
    };
    let mut sectors = BufWriter::new(File::create(with(".sectors.csv"))?);
    let mut users = BufWriter::new(File::create(with(".users.csv"))?);
    write_trace_csv(&mut sectors, &mut users, report)?;
    sectors.flush()?;
    users.flush()?;
    Ok(())
}
