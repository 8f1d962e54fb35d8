//! One MME domain per cell versus a single domain over the whole network.
//!
//! With separate domains each cell prices its own budget; pooling gives all
//! 54 users one shadow price.
//!
//!     cargo run --release --example domain_grouping -- 600

use fairshare::protocol::{run, EngineConfig};
use fairshare::scenario::builtin_table1;

fn main() -> fairshare::Result<()> {
    let rate: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(600.0);
    let cfg = EngineConfig::default();
    let per_cell = run(&builtin_table1().with_total_rate(rate), &cfg)?;
    let pooled = run(&builtin_table1().pooled().with_total_rate(rate), &cfg)?;

    for d in per_cell.domains.iter().chain(&pooled.domains) {
        let price = d.sectors.iter().filter_map(|s| s.price).next().unwrap_or(f64::NAN);
        println!(
            "domain {:>6}: budget {rate}, price {price:.6}, {} in {} rounds",
            d.domain,
            if d.converged { "converged" } else { "not converged" },
            d.rounds
        );
    }
    println!("{:>4} {:>10} {:>10}", "user", "per cell", "pooled");
    for id in ["A1", "A2", "A3", "A4", "A5", "A6", "B1", "C1"] {
        println!(
            "{id:>4} {:>10.4} {:>10.4}",
            per_cell.user(id).expect("user").rate,
            pooled.user(id).expect("user").rate
        );
    }
    Ok(())
}
