//! Certificates of creative telescoping, q-difference operators, and the
//! lattice sums they annihilate.

pub mod agsum;
pub mod celine;
pub mod cert;
pub mod qdiff;
pub mod term;
pub mod uncouple;

pub use agsum::*;
pub use celine::*;
pub use cert::*;
pub use qdiff::*;
pub use term::*;
pub use uncouple::*;
