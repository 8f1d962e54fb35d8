//! Tabulates utility, log-utility and its slope for a sigmoid and a
//! logarithmic user.
//!
//!     cargo run --example utility_curves

use fairshare::utility::UtilitySpec;

fn main() -> fairshare::Result<()> {
    let users = [
        ("sigmoid a=3 b=10", UtilitySpec::sigmoid(3.0, 10.0)?),
        ("sigmoid a=1 b=10.6", UtilitySpec::sigmoid(1.0, 10.6)?),
        ("log k=1.1 r_max=100", UtilitySpec::logarithmic(1.1, 100.0)?),
    ];
    for (name, u) in &users {
        println!("{name}");
        println!("{:>8} {:>10} {:>12} {:>12}", "r", "U", "ln U", "d ln U/dr");
        for r in [0.5, 2.0, 5.0, 8.0, 10.0, 12.0, 20.0, 50.0, 100.0] {
            println!(
                "{r:>8} {:>10.6} {:>12.6} {:>12.6e}",
                u.evaluate(r)?,
                u.log_utility(r)?,
                u.log_utility_slope(r)?
            );
        }
        println!();
    }
    Ok(())
}
