pub mod circuit;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod estimator;
pub mod numerics;
pub mod oracle;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
