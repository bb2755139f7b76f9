//! Batch front-end for the `bipartid` library: the verification suite run
//! by `verify-all`, report types and deterministic exports.

pub mod emit;
pub mod report;
pub mod suite;

pub use report::{RunReport, Status, Witness};
pub use suite::{run_all, run_selected, SuiteConfig};
