//! Synchronous execution of the UE / sector / MME bidding rounds.
//!
//! One round, in order:
//!
//! 1. every UE sends a bid: the initial bid in round 1, afterwards
//!    `price · optimal_rate(price)` at the price its sector quoted last round;
//! 2. every sector sums its bids into `W^l` and reports it to the MME;
//! 3. the MME compares each `W^l` with the previous round, splits its budget
//!    proportionally to the aggregates and sends the shares back, followed by
//!    a stop signal if every aggregate moved by less than `delta`;
//! 4. every sector prices its share at `W^l / R^l` and quotes it to its UEs,
//!    which record the rate `w_i / p_l` their bid buys.
//!
//! On the stop round the shares and prices of step 3–4 are the final ones, so
//! each sector's users receive exactly its share.

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::utility::UtilitySpec;

use super::roles::{MmeDomain, Sector, User};
use super::trace::{RoundTrace, SectorSnapshot, UserSnapshot};
use super::{EngineConfig, Message};

/// Final state of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct UserOutcome {
    pub id: String,
    pub sector: String,
    pub utility: UtilitySpec,
    pub rate: f64,
    pub bid: f64,
    pub price: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorOutcome {
    pub id: String,
    pub rate_share: f64,
    pub aggregate_bid: f64,
    pub price: Option<f64>,
}

/// Everything a finished (or abandoned) run of one MME domain produced.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainOutcome {
    pub domain: String,
    pub total_rate: f64,
    pub rounds: usize,
    pub converged: bool,
    pub users: Vec<UserOutcome>,
    pub sectors: Vec<SectorOutcome>,
    pub trace: Vec<RoundTrace>,
}

/// Outcomes of every domain of a scenario, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub domains: Vec<DomainOutcome>,
}

impl RunReport {
    pub fn converged(&self) -> bool {
        self.domains.iter().all(|d| d.converged)
    }

    pub fn users(&self) -> impl Iterator<Item = (&DomainOutcome, &UserOutcome)> {
        self.domains
            .iter()
            .flat_map(|d| d.users.iter().map(move |u| (d, u)))
    }

    pub fn user(&self, id: &str) -> Option<&UserOutcome> {
        self.users().map(|(_, u)| u).find(|u| u.id == id)
    }
}

/// Protocol state of a single MME domain.
#[derive(Debug, Clone)]
pub struct Engine {
    cfg: EngineConfig,
    users: Vec<User>,
    /// Position of each user inside its sector's bid vector.
    slots: Vec<usize>,
    sectors: Vec<Sector>,
    mme: MmeDomain,
    round: usize,
    trace: Vec<RoundTrace>,
}

impl Engine {
    /// Builds the roles of `domain` from `scenario`, with budget `total_rate`.
    pub fn new(scenario: &Scenario, domain: &str, total_rate: f64, cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        if !(total_rate > 0.0) || !total_rate.is_finite() {
            return Err(Error::InvalidParameter {
                name: "total_rate",
                value: total_rate,
                reason: "must be finite and > 0",
            });
        }
        if scenario.domain(domain).is_none() {
            return Err(Error::Validation {
                entry: domain.to_string(),
                line: None,
                message: "no such domain".into(),
            });
        }

        let mut users = Vec::new();
        let mut slots = Vec::new();
        let mut sectors = Vec::new();
        for (l, def) in scenario.sectors_of(domain).enumerate() {
            let mut members = Vec::new();
            for (slot, u) in scenario.users_of(&def.id).enumerate() {
                members.push(users.len());
                slots.push(slot);
                users.push(User::new(u.id.clone(), l, u.utility, cfg.initial_bid));
            }
            sectors.push(Sector::new(def.id.clone(), members));
        }
        if sectors.is_empty() {
            return Err(Error::Validation {
                entry: domain.to_string(),
                line: None,
                message: "domain has no sectors".into(),
            });
        }
        let mme = MmeDomain::new(domain, total_rate, sectors.len());
        for (sector, share) in sectors.iter_mut().zip(&mme.shares) {
            sector.rate_share = *share;
        }
        Ok(Self {
            cfg,
            users,
            slots,
            sectors,
            mme,
            round: 0,
            trace: Vec::new(),
        })
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn users(&self) -> &[User] {
        &self.users
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn mme(&self) -> &MmeDomain {
        &self.mme
    }

    pub fn trace(&self) -> &[RoundTrace] {
        &self.trace
    }

    fn deliver(&mut self, msg: Message) -> Result<()> {
        match msg {
            Message::Bid { user, bid } => {
                let sector = self.users[user].sector;
                self.sectors[sector].receive_bid(self.slots[user], bid);
            }
            Message::Aggregate { sector, total } => self.mme.receive_aggregate(sector, total),
            Message::SectorRate { sector, rate } => self.sectors[sector].rate_share = rate,
            Message::Price { sector, price } => {
                for &u in &self.sectors[sector].users {
                    self.users[u].settle(price)?;
                }
            }
            Message::Stop => {}
        }
        Ok(())
    }

    /// Executes one synchronous round; returns whether the MME stopped.
    pub fn step(&mut self) -> Result<bool> {
        self.round += 1;
        let first = self.round == 1;

        // UEs
        let mut outbox = Vec::with_capacity(self.users.len());
        for (i, user) in self.users.iter_mut().enumerate() {
            if !first {
                if let Some(price) = self.sectors[user.sector].price {
                    user.ue_step(price, &self.cfg)?;
                }
            }
            outbox.push(Message::Bid { user: i, bid: user.bid });
        }
        for msg in outbox.drain(..) {
            self.deliver(msg)?;
        }

        // sectors → MME
        let mut bids_settled = true;
        for (l, sector) in self.sectors.iter_mut().enumerate() {
            let total = sector.sector_aggregate();
            bids_settled &= sector.bids_settled(self.cfg.delta);
            sector.end_round();
            outbox.push(Message::Aggregate { sector: l, total });
        }
        for msg in outbox.drain(..) {
            self.deliver(msg)?;
        }

        // MME
        let converged = self.mme.mme_converged(self.cfg.delta);
        let shares = self.mme.mme_reallocate()?;
        outbox.extend(
            shares
                .iter()
                .enumerate()
                .map(|(sector, &rate)| Message::SectorRate { sector, rate }),
        );
        if converged {
            outbox.push(Message::Stop);
        }
        self.mme.end_round();
        for msg in outbox.drain(..) {
            self.deliver(msg)?;
        }

        // sectors → UEs
        for (l, sector) in self.sectors.iter_mut().enumerate() {
            if sector.aggregate_bid > 0.0 {
                let price = sector.sector_price()?;
                outbox.push(Message::Price { sector: l, price });
            } else {
                // Nothing to price: the sector holds a zero share this round.
                sector.price = None;
                for &u in &sector.users {
                    self.users[u].rate = 0.0;
                }
            }
        }
        for msg in outbox.drain(..) {
            self.deliver(msg)?;
        }

        self.trace.push(RoundTrace {
            round: self.round,
            users: self
                .users
                .iter()
                .map(|u| UserSnapshot {
                    bid: u.bid,
                    requested: u.requested,
                    rate: u.rate,
                })
                .collect(),
            sectors: self
                .sectors
                .iter()
                .map(|s| SectorSnapshot {
                    aggregate_bid: s.aggregate_bid,
                    rate_share: s.rate_share,
                    price: s.price,
                })
                .collect(),
            bids_settled,
            converged,
        });
        Ok(converged)
    }

    /// Steps until the MME stops or `max_rounds` is reached. Without
    /// convergence the outcome is the state after the last round.
    pub fn run(mut self) -> Result<DomainOutcome> {
        let mut converged = false;
        while self.round < self.cfg.max_rounds {
            if self.step()? {
                converged = true;
                break;
            }
        }
        Ok(self.into_outcome(converged))
    }

    fn into_outcome(self, converged: bool) -> DomainOutcome {
        let snap = self.trace.last().expect("at least one round was executed");
        DomainOutcome {
            domain: self.mme.id.clone(),
            total_rate: self.mme.total_rate,
            rounds: self.round,
            converged,
            users: self
                .users
                .iter()
                .zip(&snap.users)
                .map(|(u, s)| UserOutcome {
                    id: u.id.clone(),
                    sector: self.sectors[u.sector].id.clone(),
                    utility: u.utility,
                    rate: s.rate,
                    bid: s.bid,
                    price: snap.sectors[u.sector].price,
                })
                .collect(),
            sectors: self
                .sectors
                .iter()
                .zip(&snap.sectors)
                .map(|(sector, s)| SectorOutcome {
                    id: sector.id.clone(),
                    rate_share: s.rate_share,
                    aggregate_bid: s.aggregate_bid,
                    price: s.price,
                })
                .collect(),
            trace: self.trace,
        }
    }
}

/// Runs every domain of `scenario` at its declared budget.
pub fn run(scenario: &Scenario, cfg: &EngineConfig) -> Result<RunReport> {
    scenario.validate()?;
    let domains = scenario
        .domains
        .iter()
        .map(|d| Engine::new(scenario, &d.id, d.total_rate, *cfg)?.run())
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        scenario: scenario.name.clone(),
        domains,
    })
}
