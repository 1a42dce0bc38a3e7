pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod identities;
pub mod numeric;
pub mod polytab;
pub mod sixj;
pub mod statesum;
pub mod systems;

pub use error::{Error, Result};
