use crate::demand::SolverConfig;
use crate::error::{Error, Result};

/// Knobs of the bidding protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    /// Convergence threshold on the round-to-round move of every aggregate bid.
    pub delta: f64,
    pub max_rounds: usize,
    /// Weight of the fresh bid in `θ·p·r + (1 − θ)·w_old`; 1 is undamped.
    pub damping: f64,
    /// Bid every user sends before any price is known.
    pub initial_bid: f64,
    pub solver: SolverConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            delta: 1e-3,
            max_rounds: 10_000,
            damping: 1.0,
            initial_bid: 1.0,
            solver: SolverConfig::default(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: self.delta,
                reason: "must be finite and > 0",
            });
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "damping",
                value: self.damping,
                reason: "must lie in (0, 1]",
            });
        }
        if !(self.initial_bid >= 0.0) || !self.initial_bid.is_finite() {
            return Err(Error::InvalidParameter {
                name: "initial_bid",
                value: self.initial_bid,
                reason: "must be finite and >= 0",
            });
        }
        if self.max_rounds == 0 {
            return Err(Error::InvalidParameter {
                name: "max_rounds",
                value: 0.0,
                reason: "must be > 0",
            });
        }
        self.solver.validate()
    }
}
