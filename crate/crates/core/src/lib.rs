pub mod arith;
pub mod check;
pub mod cli;
pub mod congruence;
pub mod counting;
pub mod cyclic;
pub mod error;
pub mod lifting;
pub mod limits;
pub mod reps;
pub mod verify;

pub use error::{Error, Result};
