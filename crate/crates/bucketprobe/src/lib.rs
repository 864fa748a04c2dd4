//! Simulation, validation suites, report formats and comparison tables for
//! linear probing hash tables with buckets, built on `bucketprobe-core`.

pub mod commands;
pub mod montecarlo;
pub mod report;
pub mod sampling;
pub mod tables;
pub mod validate;
