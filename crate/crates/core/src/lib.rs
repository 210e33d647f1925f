pub mod client;
pub mod clustering;
pub mod error;
pub mod ingest;
pub mod query;
pub mod ranking;
pub mod similarity;
pub mod snapshot;

pub use error::{Error, Result};
