//! Runs the UE / sector / MME bidding rounds for one sector of six users and
//! compares the result with the centralized optimum.
//!
//!     cargo run --example single_sector -- 50

use fairshare::oracle::centralized_allocate;
use fairshare::protocol::{run, EngineConfig};
use fairshare::scenario::{builtin_table1, DomainDef, Scenario, SectorDef};

fn main() -> fairshare::Result<()> {
    let rate: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100.0);
    let table = builtin_table1();
    let scenario = Scenario {
        name: "one-sector".into(),
        domains: vec![DomainDef { id: "A".into(), total_rate: rate }],
        sectors: vec![SectorDef { id: "A.1".into(), domain: "A".into() }],
        users: table.users.into_iter().filter(|u| u.sector == "A.1").collect(),
        sweep: None,
    };

    let report = run(&scenario, &EngineConfig::default())?;
    let d = &report.domains[0];
    let specs: Vec<_> = d.users.iter().map(|u| u.utility).collect();
    let oracle = centralized_allocate(&specs, rate, &Default::default())?;

    println!(
        "R = {rate}: {} after {} rounds, price {:.6} (optimum {:.6})",
        if d.converged { "converged" } else { "not converged" },
        d.rounds,
        d.sectors[0].price.unwrap_or(f64::NAN),
        oracle.price
    );
    println!("{:>4} {:>8} {:>12} {:>12} {:>10}", "user", "kind", "distributed", "optimum", "bid");
    for (u, r) in d.users.iter().zip(&oracle.rates) {
        println!("{:>4} {:>8} {:>12.6} {:>12.6} {:>10.5}", u.id, u.utility.kind(), u.rate, r, u.bid);
    }
    Ok(())
}
