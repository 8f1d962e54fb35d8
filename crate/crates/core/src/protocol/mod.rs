//! The distributed bidding protocol between UEs, BS sectors and the MME.

mod config;
mod engine;
mod message;
mod roles;
mod trace;

pub use config::EngineConfig;
pub use engine::{run, DomainOutcome, Engine, RunReport, SectorOutcome, UserOutcome};
pub use message::Message;
pub use roles::{MmeDomain, Sector, User};
pub use trace::{RoundTrace, SectorSnapshot, UserSnapshot};
