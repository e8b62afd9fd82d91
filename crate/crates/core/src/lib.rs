//! Multiprecision evaluation of eta quotients, Eichler integrals, modular L-values,
//! banana Feynman integrals and Mahler measures, plus a registry of numeric
//! identity checks that compares each side to a requested number of digits.

pub mod cli;
pub mod eichler;
pub mod error;
pub mod feynman;
pub mod lfun;
pub mod mpcore;
pub mod qseries;

pub use error::{Error, Result};
