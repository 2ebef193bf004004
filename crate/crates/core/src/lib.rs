pub mod cli;
pub mod dynamics;
pub mod error;
pub mod policy;
pub mod quantum;
pub mod scenarios;
pub mod slh;
pub mod statistics;

pub use error::{Error, Result};
