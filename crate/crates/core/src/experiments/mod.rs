//! Seeded scenario generation, parameter sweeps and result records.

pub mod config;
pub mod metrics;
pub mod params;
pub mod records;
pub mod sweep;
