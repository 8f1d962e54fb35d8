//! The rate a user asks for at each shadow price.
//!
//! A steep sigmoid user has an almost flat log-utility slope just below its
//! inflection point, so its demand collapses over a narrow band of prices
//! near `p = a`. That band is where the bidding protocol struggles.
//!
//!     cargo run --example demand_curve

use fairshare::demand::{make_bid, optimal_rate, SolverConfig};
use fairshare::utility::UtilitySpec;

fn main() -> fairshare::Result<()> {
    let solver = SolverConfig::default();
    let sig = UtilitySpec::sigmoid(3.0, 10.0)?;
    let log = UtilitySpec::logarithmic(5.0, 100.0)?;
    println!("{:>10} {:>12} {:>12} {:>12}", "price", "sigmoid r", "sigmoid bid", "log r");
    for p in [0.01, 0.1, 0.5, 1.0, 1.5, 2.5, 2.9, 2.99, 2.999, 3.0, 3.001, 3.01, 3.5, 10.0] {
        let r = optimal_rate(&sig, p, &solver)?;
        println!(
            "{p:>10} {r:>12.6} {:>12.6} {:>12.6}",
            make_bid(p, r)?,
            optimal_rate(&log, p, &solver)?
        );
    }
    Ok(())
}
