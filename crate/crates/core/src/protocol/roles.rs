//! State and local computations of the three protocol roles.

use crate::demand::{self, make_bid, optimal_rate};
use crate::error::{Error, Result};
use crate::utility::UtilitySpec;

use super::EngineConfig;

/// A UE attached to exactly one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct User {
    pub id: String,
    /// Index of the owning sector inside the domain.
    pub sector: usize,
    pub utility: UtilitySpec,
    /// Current bid `w_i`.
    pub bid: f64,
    /// Rate requested at the last quoted price.
    pub requested: f64,
    /// Rate allocated as `bid / price` at the last quoted price.
    pub rate: f64,
}

impl User {
    pub fn new(id: impl Into<String>, sector: usize, utility: UtilitySpec, initial_bid: f64) -> Self {
        Self {
            id: id.into(),
            sector,
            utility,
            bid: initial_bid,
            requested: 0.0,
            rate: 0.0,
        }
    }

    /// Reacts to a quoted shadow price with a new (possibly damped) bid.
    pub fn ue_step(&mut self, price: f64, cfg: &EngineConfig) -> Result<f64> {
        self.requested = optimal_rate(&self.utility, price, &cfg.solver)?;
        let fresh = make_bid(price, self.requested)?;
        self.bid = cfg.damping * fresh + (1.0 - cfg.damping) * self.bid;
        Ok(self.bid)
    }

    /// The rate the current bid buys at `price`.
    pub fn settle(&mut self, price: f64) -> Result<f64> {
        self.rate = demand::allocated_rate(self.bid, price)?;
        Ok(self.rate)
    }
}

/// A BS sector: collects bids, prices its share of the domain budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub id: String,
    /// Indices of member users inside the domain.
    pub users: Vec<usize>,
    /// Member bids for the current round, aligned with `users`.
    pub bids: Vec<f64>,
    pub prev_bids: Vec<f64>,
    /// `R^l`.
    pub rate_share: f64,
    /// `W^l`.
    pub aggregate_bid: f64,
    /// `p_l`; `None` until the sector has been priced, or while its aggregate is zero.
    pub price: Option<f64>,
}

impl Sector {
    pub fn new(id: impl Into<String>, users: Vec<usize>) -> Self {
        let n = users.len();
        Self {
            id: id.into(),
            users,
            bids: vec![0.0; n],
            prev_bids: vec![0.0; n],
            rate_share: 0.0,
            aggregate_bid: 0.0,
            price: None,
        }
    }

    /// Stores the bid of member `slot` for this round.
    pub fn receive_bid(&mut self, slot: usize, bid: f64) {
        self.bids[slot] = bid;
    }

    /// `W^l = Σ w_i`.
    pub fn sector_aggregate(&mut self) -> f64 {
        self.aggregate_bid = self.bids.iter().sum();
        self.aggregate_bid
    }

    /// The per-user settling test of the sector role: every member bid moved
    /// by less than `delta` since the previous round.
    pub fn bids_settled(&self, delta: f64) -> bool {
        self.bids
            .iter()
            .zip(&self.prev_bids)
            .all(|(now, before)| (now - before).abs() < delta)
    }

    pub fn end_round(&mut self) {
        self.prev_bids.copy_from_slice(&self.bids);
    }

    /// `p_l = W^l / R^l`.
    pub fn sector_price(&mut self) -> Result<f64> {
        if !(self.rate_share > 0.0) {
            return Err(Error::DegenerateSector {
                sector: self.id.clone(),
                reason: "rate share is zero",
            });
        }
        if !(self.aggregate_bid > 0.0) {
            return Err(Error::DegenerateSector {
                sector: self.id.clone(),
                reason: "aggregate bid is zero",
            });
        }
        let p = self.aggregate_bid / self.rate_share;
        self.price = Some(p);
        Ok(p)
    }
}

/// The MME coordinating the sectors of one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MmeDomain {
    pub id: String,
    pub total_rate: f64,
    /// Latest `W^l` per sector.
    pub aggregates: Vec<f64>,
    /// `W^l` of the previous round; all zero before the first one.
    pub prev_aggregates: Vec<f64>,
    pub shares: Vec<f64>,
}

impl MmeDomain {
    pub fn new(id: impl Into<String>, total_rate: f64, sectors: usize) -> Self {
        Self {
            id: id.into(),
            total_rate,
            aggregates: vec![0.0; sectors],
            prev_aggregates: vec![0.0; sectors],
            shares: vec![total_rate / sectors as f64; sectors],
        }
    }

    pub fn receive_aggregate(&mut self, sector: usize, total: f64) {
        self.aggregates[sector] = total;
    }

    /// True iff every aggregate moved by less than `delta` since the previous round.
    pub fn mme_converged(&self, delta: f64) -> bool {
        self.aggregates
            .iter()
            .zip(&self.prev_aggregates)
            .all(|(now, before)| (now - before).abs() < delta)
    }

    /// `R^l = W^l / Σ W · R`.
    pub fn mme_reallocate(&mut self) -> Result<&[f64]> {
        let total: f64 = self.aggregates.iter().sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateDomain {
                domain: self.id.clone(),
            });
        }
        for (share, w) in self.shares.iter_mut().zip(&self.aggregates) {
            *share = w / total * self.total_rate;
        }
        Ok(&self.shares)
    }

    pub fn end_round(&mut self) {
        self.prev_aggregates.copy_from_slice(&self.aggregates);
    }
}
