//! Centralized allocation by common-price bisection, and the random-transfer
//! optimality certificate, including one allocation that fails it.
//!
//!     cargo run --example oracle_certify

use fairshare::demand::SolverConfig;
use fairshare::oracle::{centralized_allocate, certify, objective};
use fairshare::utility::UtilitySpec;

fn main() -> fairshare::Result<()> {
    let users = vec![
        UtilitySpec::sigmoid(3.0, 10.0)?,
        UtilitySpec::sigmoid(1.0, 10.6)?,
        UtilitySpec::logarithmic(1.1, 100.0)?,
        UtilitySpec::logarithmic(10.0, 100.0)?,
    ];
    let total = 60.0;
    let sol = centralized_allocate(&users, total, &SolverConfig::default())?;
    println!("price {:.6}, rates {:?}", sol.price, sol.rates);
    println!("objective {:.6}, certified: {}", objective(&users, &sol.rates), certify(&users, &sol.rates, total, 1000));

    // move 5% of the last user's rate to the first
    let mut skewed = sol.rates.clone();
    let shift = 0.05 * skewed[3];
    skewed[3] -= shift;
    skewed[0] += shift;
    println!("skewed objective {:.6}, certified: {}", objective(&users, &skewed), certify(&users, &skewed, total, 1000));
    Ok(())
}
