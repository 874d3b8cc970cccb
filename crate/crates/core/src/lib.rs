pub mod cli;
pub mod closedform;
pub mod conflict;
pub mod discretescan;
pub mod distmath;
mod error;
pub mod modelprior;
pub mod weakinfo;

pub use error::{Error, Result};
