//! Library side of the `tseq` batch CLI: configuration, input parsing,
//! command implementations, and the reproduction driver behind
//! `tseq reproduce` and the acceptance test suite.

pub mod commands;
pub mod config;
pub mod parse;
pub mod records;
pub mod repro;
