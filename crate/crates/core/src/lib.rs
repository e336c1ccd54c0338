//! Achievable regions, outer bounds, constant-gap audits and GDoF maps for
//! the two-user Gaussian interference channel with an out-of-band digital
//! relay, plus a GF(2) deterministic model of the same network.

pub mod asymptotics;
pub mod audit;
pub mod detchannel;
pub mod error;
pub mod gaussmi;
pub mod model;
pub mod regions;
pub mod strategies;

pub use error::{Error, Result};
