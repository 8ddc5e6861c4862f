//! Manifest loading, report schema and command orchestration for the
//! `heiscalc` binary.

pub mod manifest;
pub mod report;
pub mod runner;
