/// One user's state at the end of a round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserSnapshot {
    pub bid: f64,
    /// What the user asked for at the price it last saw.
    pub requested: f64,
    /// What its bid buys at the price quoted at the end of the round.
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSnapshot {
    pub aggregate_bid: f64,
    pub rate_share: f64,
    pub price: Option<f64>,
}

/// Snapshot of a whole domain after one synchronous round.
///
/// `users` and `sectors` are in the same order as the domain outcome that
/// owns the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub round: usize,
    pub users: Vec<UserSnapshot>,
    pub sectors: Vec<SectorSnapshot>,
    /// The per-user test of the sector role; informational only.
    pub bids_settled: bool,
    /// The MME aggregate test, which ends the run.
    pub converged: bool,
}
