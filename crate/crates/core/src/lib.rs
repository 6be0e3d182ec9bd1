pub mod cli;
pub mod error;
pub mod exactmath;
pub mod haar_integrate;
pub mod montecarlo;
pub mod pairings;
pub mod symmetric;
pub mod weingarten;

pub use error::{Error, Result};
