//! Sweeps the budget of every cell in the 54-user, three-cell network and
//! writes the results CSV.
//!
//!     cargo run --release --example table1_sweep -- sweep.csv

use fairshare::protocol::EngineConfig;
use fairshare::report::write_results;
use fairshare::scenario::{builtin_table1, SweepSpec};
use fairshare::sweep::{reports, sweep};

fn main() -> fairshare::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "table1_sweep.csv".into());
    let points = sweep(&builtin_table1(), &EngineConfig::default(), &SweepSpec::default())?;
    write_results(&out, reports(&points))?;

    println!("{:>6} {:>9} {:>9} {:>9} {:>9}  converged", "R", "A1", "A2", "A3", "A4");
    for p in &points {
        let rate = |id| p.report.user(id).expect("user exists").rate;
        let converged: Vec<&str> = p
            .report
            .domains
            .iter()
            .map(|d| if d.converged { "yes" } else { "no" })
            .collect();
        println!(
            "{:>6} {:>9.4} {:>9.4} {:>9.4} {:>9.4}  {}",
            p.total_rate,
            rate("A1"),
            rate("A2"),
            rate("A3"),
            rate("A4"),
            converged.join(" ")
        );
    }
    println!("wrote {out}");
    Ok(())
}
