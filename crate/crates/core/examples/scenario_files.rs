//! Reads a scenario from TOML text, runs it, and exports the built-in
//! network in the same format.
//!
//!     cargo run --example scenario_files -- table1.toml

use std::path::Path;

use fairshare::protocol::{run, EngineConfig};
use fairshare::scenario::{builtin_table1, load_scenario, parse_scenario, write_scenario};

const TWO_CELLS: &str = r#"
name = "two-cells"

[[domain]]
id = "east"
total_rate = 40

[[sector]]
id = "east.1"
domain = "east"

[[sector]]
id = "east.2"
domain = "east"

[[user]]
id = "video"
sector = "east.1"
kind = "sigmoid"
a = 2.0
b = 8.0

[[user]]
id = "mail"
sector = "east.1"
kind = "log"
k = 3.0
r_max = 50.0

[[user]]
id = "backup"
sector = "east.2"
kind = "log"
k = 0.5
r_max = 100.0
"#;

fn main() -> fairshare::Result<()> {
    let scenario = parse_scenario(TWO_CELLS, Path::new("two-cells.toml"))?;
    let report = run(&scenario, &EngineConfig::default())?;
    for (d, u) in report.users() {
        println!("{} {} {}: rate {:.4}, price {:.5}", d.domain, u.sector, u.id, u.rate, u.price.unwrap_or(f64::NAN));
    }

    // malformed input is rejected with its line number
    let broken = TWO_CELLS.replace("sector = \"east.2\"", "sector = \"west.9\"");
    if let Err(e) = parse_scenario(&broken, Path::new("two-cells.toml")) {
        println!("rejected: {e}");
    }

    let out = std::env::args().nth(1).unwrap_or_else(|| "table1.toml".into());
    let table = builtin_table1();
    write_scenario(&table, &out)?;
    assert_eq!(load_scenario(&out)?, table);
    println!("wrote {out} ({} users)", table.users.len());
    Ok(())
}
