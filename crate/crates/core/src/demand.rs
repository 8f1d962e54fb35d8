//! The user-side subproblem: how much rate a UE asks for at a quoted shadow
//! price, and the bid that request turns into.
//!
//! At price `p` a user with utility `U` requests
//! `argmax_{0 <= r <= r_cap} ln U(r) - p·r`. The log utility is strictly
//! concave with slope going from `+inf` at `0+` towards `0`, so the maximizer
//! is the unique root of `slope(r) = p`, or the cap when the root lies beyond
//! it. The root is found by bisection on the decreasing slope.

use crate::error::{Error, Result};
use crate::utility::UtilitySpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative first-order residual accepted at an interior solution.
    pub foc_tolerance: f64,
    /// Demand cap as a multiple of the curve scale (`b` or `r_max`).
    pub rate_cap_multiplier: f64,
    /// How many times the lower end of the bracket may be halved while
    /// looking for a point where the slope exceeds the price.
    pub max_bracket_doublings: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            foc_tolerance: 1e-9,
            rate_cap_multiplier: 10.0,
            max_bracket_doublings: 60,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("foc_tolerance", self.foc_tolerance),
            ("rate_cap_multiplier", self.rate_cap_multiplier),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and > 0",
                });
            }
        }
        if self.max_bracket_doublings == 0 {
            return Err(Error::InvalidParameter {
                name: "max_bracket_doublings",
                value: 0.0,
                reason: "must be > 0",
            });
        }
        Ok(())
    }

    /// Upper end of the search interval for `spec`.
    pub fn rate_cap(&self, spec: &UtilitySpec) -> f64 {
        self.rate_cap_multiplier * spec.scale()
    }
}

fn check_price(price: f64) -> Result<()> {
    if !(price > 0.0) || !price.is_finite() {
        return Err(Error::InvalidPrice(price));
    }
    Ok(())
}

/// The rate maximizing `ln U(r) - price·r` over `[0, r_cap]`.
pub fn optimal_rate(spec: &UtilitySpec, price: f64, cfg: &SolverConfig) -> Result<f64> {
    check_price(price)?;
    let cap = cfg.rate_cap(spec);
    let slope = |r: f64| spec.slope_unchecked(r);

    if slope(cap) >= price {
        return Ok(cap);
    }

    let mut lo = 1e-12 * cap;
    let mut halvings = 0;
    while slope(lo) <= price {
        if halvings == cfg.max_bracket_doublings {
            return Err(Error::SolverFailure(format!(
                "no rate in (0, {cap}] has slope above price {price}"
            )));
        }
        lo *= 0.5;
        halvings += 1;
    }

    let mut hi = cap;
    // slope(lo) > price >= slope(hi); shrink until the bracket is a few ulps wide.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > price {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let r = 0.5 * (lo + hi);
    let residual = (slope(r) - price).abs();
    if residual > cfg.foc_tolerance * price {
        // The bracket collapsed onto a point where the slope jumps past the
        // price by more than the tolerance; report rather than guess.
        return Err(Error::SolverFailure(format!(
            "first-order residual {residual:e} at r = {r} exceeds tolerance for price {price}"
        )));
    }
    Ok(r)
}

/// `price · rate`.
pub fn make_bid(price: f64, rate: f64) -> Result<f64> {
    check_price(price)?;
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::Domain {
            rate,
            reason: "bids are formed from finite rates >= 0",
        });
    }
    Ok(price * rate)
}

/// `bid / price`.
pub fn allocated_rate(bid: f64, price: f64) -> Result<f64> {
    check_price(price)?;
    Ok(bid / price)
}
