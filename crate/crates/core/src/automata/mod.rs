//! Partitions as words over the thirteen-letter block alphabet, the minimal
//! automaton of a factor-avoidance condition, and its q-difference system.

pub mod alphabet;
pub mod dfa;
pub mod transfer;

pub use alphabet::{bir_forbidden_words, contains_factor, decode, encode, Letter, Word, BIR_FORBIDDEN_WORDS};
pub use dfa::{build_avoidance_dfa, Dfa, DfaJson};
pub use transfer::{derive_transfer_system, language_series, letter_weight, parse_system_table, TransferSystem};
