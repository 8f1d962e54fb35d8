//! Centralized reference solution of the sum-of-log-utilities problem.
//!
//! At the optimum every user of an MME domain faces the same shadow price
//! `p*`, and the demands at that price exhaust the budget. Aggregate demand is
//! continuous and strictly decreasing in the price, so `p*` is found by
//! bisection and the allocation is read off the individual demands.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::demand::{optimal_rate, SolverConfig};
use crate::error::{Error, Result};
use crate::utility::UtilitySpec;

/// Relative budget-exhaustion tolerance of the price search.
pub const BUDGET_TOLERANCE: f64 = 1e-6;

const PRICE_FLOOR: f64 = 1e-9;
const MAX_PRICE_DOUBLINGS: u32 = 200;
const MAX_BISECTIONS: u32 = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub price: f64,
    pub rates: Vec<f64>,
}

impl OracleSolution {
    pub fn total(&self) -> f64 {
        self.rates.iter().sum()
    }
}

/// Σ optimal_rate(spec_i, price).
pub fn aggregate_demand(users: &[UtilitySpec], price: f64, solver: &SolverConfig) -> Result<f64> {
    users.iter().map(|u| optimal_rate(u, price, solver)).sum()
}

/// The common-price allocation of `total_rate` among `users`.
pub fn centralized_allocate(
    users: &[UtilitySpec],
    total_rate: f64,
    solver: &SolverConfig,
) -> Result<OracleSolution> {
    if users.is_empty() {
        return Err(Error::SolverFailure("no users to allocate to".into()));
    }
    if !(total_rate > 0.0) || !total_rate.is_finite() {
        return Err(Error::InvalidParameter {
            name: "total_rate",
            value: total_rate,
            reason: "must be finite and > 0",
        });
    }
    let demand = |p: f64| aggregate_demand(users, p, solver);
    let solution = |price: f64| -> Result<OracleSolution> {
        let rates = users
            .iter()
            .map(|u| optimal_rate(u, price, solver))
            .collect::<Result<Vec<_>>>()?;
        Ok(OracleSolution { price, rates })
    };
    let close = |d: f64| (d - total_rate).abs() <= BUDGET_TOLERANCE * total_rate;

    let mut lo = PRICE_FLOOR;
    let d_lo = demand(lo)?;
    if close(d_lo) {
        return solution(lo);
    }
    if d_lo < total_rate {
        return Err(Error::SolverFailure(format!(
            "demand {d_lo} at price {lo} cannot absorb budget {total_rate}"
        )));
    }

    let mut hi = 1.0;
    let mut doublings = 0;
    loop {
        let d = demand(hi)?;
        if close(d) {
            return solution(hi);
        }
        if d < total_rate {
            break;
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings == MAX_PRICE_DOUBLINGS {
            return Err(Error::SolverFailure(format!(
                "demand still exceeds {total_rate} at price {hi}"
            )));
        }
    }

    for _ in 0..MAX_BISECTIONS {
        // geometric midpoint: the bracket spans many decades at first
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let d = demand(mid)?;
        if close(d) {
            return solution(mid);
        }
        if d > total_rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::SolverFailure(format!(
        "price bisection stalled in [{lo}, {hi}] without meeting the budget tolerance"
    )))
}

/// `Σ ln U_i(r_i)`; `-inf` as soon as one rate is not positive.
pub fn objective(users: &[UtilitySpec], rates: &[f64]) -> f64 {
    users
        .iter()
        .zip(rates)
        .map(|(u, &r)| {
            if r > 0.0 {
                u.log_utility(r).unwrap_or(f64::NEG_INFINITY)
            } else {
                f64::NEG_INFINITY
            }
        })
        .sum()
}

/// Largest objective gain accepted by [`certify`].
pub const CERTIFY_SLACK: f64 = 1e-8;

/// Seed used by [`certify`]; fixed so verdicts are reproducible.
pub const CERTIFY_SEED: u64 = 0x5eed_f00d;

/// Perturbation check of optimality: `trials` random budget-preserving
/// transfers between two users never raise the objective by more than
/// [`CERTIFY_SLACK`].
pub fn certify(users: &[UtilitySpec], rates: &[f64], total_rate: f64, trials: usize) -> bool {
    certify_with(users, rates, total_rate, trials, &mut StdRng::seed_from_u64(CERTIFY_SEED))
}

pub fn certify_with<R: Rng>(
    users: &[UtilitySpec],
    rates: &[f64],
    total_rate: f64,
    trials: usize,
    rng: &mut R,
) -> bool {
    assert_eq!(users.len(), rates.len(), "one rate per user");
    let total: f64 = rates.iter().sum();
    if total > total_rate * (1.0 + BUDGET_TOLERANCE) {
        return false;
    }
    if users.len() < 2 {
        return true;
    }
    let base = objective(users, rates);
    let mut moved = rates.to_vec();
    for _ in 0..trials {
        let from = rng.random_range(0..users.len());
        let mut to = rng.random_range(0..users.len() - 1);
        if to >= from {
            to += 1;
        }
        let amount = rng.random_range(1e-4..=1e-2) * total_rate;
        if amount >= rates[from] {
            // would empty the donor: objective -inf, never an improvement
            continue;
        }
        moved[from] = rates[from] - amount;
        moved[to] = rates[to] + amount;
        let gain = objective(users, &moved) - base;
        moved[from] = rates[from];
        moved[to] = rates[to];
        if gain > CERTIFY_SLACK {
            return false;
        }
    }
    true
}
