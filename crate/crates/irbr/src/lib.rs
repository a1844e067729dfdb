//! Host-side tooling for `irbr-core`: raw video and PGM input, the container
//! file format, synthetic screen-content corpora and the reduction-rate bench.

pub mod bench;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod format;
pub mod io;

pub use error::{Error, Result};
