/// Everything that travels between the three roles in one round.
///
/// Users and sectors are addressed by their index inside the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Message {
    /// UE → sector: new bid `w_i`.
    Bid { user: usize, bid: f64 },
    /// Sector → MME: aggregate `W^l`.
    Aggregate { sector: usize, total: f64 },
    /// MME → sector: rate share `R^l`.
    SectorRate { sector: usize, rate: f64 },
    /// Sector → its UEs: shadow price `p_l`.
    Price { sector: usize, price: f64 },
    /// MME → everyone: the aggregates have settled.
    Stop,
}
