//! Honeyword-augmented credential tooling: decoy generation, hashed
//! sweetword storage, a split honeychecker, login middleware with graduated
//! responses, and attacker simulations for measuring decoy flatness.

pub mod authgate;
pub mod config;
pub mod crackcalc;
pub mod credstore;
pub mod decoygen;
pub mod error;
pub mod gauntlet;
pub mod honeychecker;
pub mod num;
pub mod policyguard;
pub mod responder;

pub use error::{Error, Result};

/// Scalar used by the numeric APIs when callers do not pick one.
pub type Scalar = f64;
