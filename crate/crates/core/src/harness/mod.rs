//! Verification suites, parameter sweeps and CSV tables behind the
//! `dunkl-verify` command.

pub mod report;
pub mod suites;
pub mod sweep;
pub mod tables;
