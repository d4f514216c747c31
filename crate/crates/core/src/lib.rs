//! Triple-band (28 GHz, E-band, THz) backhaul flow scheduling.
//!
//! Flows between base stations are assigned a band, then packed into a frame
//! of time slots so that concurrent flows share no station and keep mutual
//! interference under a per-band threshold. The goal is to maximize the
//! number of flows whose demand is met within one frame.

pub mod band_select;
pub mod baselines;
pub mod conflict;
pub mod error;
pub mod experiments;
#[doc(hidden)]
pub mod fixtures;
pub mod model;
pub mod oracle;
pub mod radio;
pub mod scheduler;
pub mod units;
pub mod validate;

pub use band_select::{select_bands, BandAssignment};
pub use baselines::SchemeKind;
pub use error::{ConfigError, OracleError, RecordError, ScenarioError, SweepError};
pub use experiments::config::ExperimentConfig;
pub use experiments::params::ScenarioParams;
pub use model::{
    Band, BandParams, FlowId, FrameConfig, Scenario, ScheduleMatrix, ScheduleResult, StationId,
};
pub use scheduler::schedule;
pub use validate::{validate, ValidateOptions, Violation};
