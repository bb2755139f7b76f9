pub mod algebra;
pub mod automata;
pub mod cylindric;
pub mod data;
pub mod error;
pub mod holonomic;
pub mod partitions;

pub use error::{Error, Result};
