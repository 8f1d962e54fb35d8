//! Round-by-round traces of one cell, undamped and damped.
//!
//! At R = 100 cell C oscillates forever without damping; a damping factor of
//! 0.1 settles it. Traces go to `<prefix>.sectors.csv` / `<prefix>.users.csv`.
//!
//!     cargo run --release --example trace_dump -- trace

use fairshare::protocol::{Engine, EngineConfig, RunReport};
use fairshare::report::write_trace;
use fairshare::scenario::builtin_table1;

fn main() -> fairshare::Result<()> {
    let prefix = std::env::args().nth(1).unwrap_or_else(|| "trace".into());
    let scenario = builtin_table1();
    for damping in [1.0, 0.1] {
        let cfg = EngineConfig { damping, max_rounds: 400, ..EngineConfig::default() };
        let outcome = Engine::new(&scenario, "C", 100.0, cfg)?.run()?;
        println!(
            "damping {damping}: {} after {} rounds",
            if outcome.converged { "converged" } else { "not converged" },
            outcome.rounds
        );
        for t in outcome.trace.iter().rev().take(4).rev() {
            let w: Vec<String> = t.sectors.iter().map(|s| format!("{:.4}", s.aggregate_bid)).collect();
            println!("  round {:>4}: W = [{}], p = {:.5}", t.round, w.join(", "), t.sectors[0].price.unwrap_or(f64::NAN));
        }
        let report = RunReport { scenario: scenario.name.clone(), domains: vec![outcome] };
        let path = format!("{prefix}-damping-{damping}");
        write_trace(&path, &report)?;
        println!("  wrote {path}.sectors.csv and {path}.users.csv");
    }
    Ok(())
}
