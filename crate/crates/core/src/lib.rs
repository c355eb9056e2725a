pub mod arith;
pub mod complex;
pub mod corpus;
pub mod count;
pub mod datum;
pub mod denef;
pub mod error;
pub mod poles;
pub mod primes;
pub mod resolve;

pub use error::{Error, Result};
