pub mod error;
pub mod identities;
pub mod liouville;
pub mod mahler;
pub mod maillet;
pub mod numeric;

pub use error::{Error, Result};
