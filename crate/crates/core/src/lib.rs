// `!(x > 0.0)` is used on purpose so that NaN is rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod demand;
pub mod error;
pub mod oracle;
pub mod protocol;
pub mod report;
pub mod scenario;
pub mod sweep;
pub mod utility;

pub use error::{Error, Result};
