pub mod archive;
pub mod error;
pub mod indicators;
pub mod io;
pub mod moead;
pub mod objective;
pub mod problems;
pub mod scalarize;
pub mod selection;

pub use error::{Error, Result};
