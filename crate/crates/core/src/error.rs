use thiserror::Error;

use crate::model::{Band, FlowId, StationId};

/// Errors raised while building or validating a [`Scenario`](crate::model::Scenario).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("station at index {index} carries id {id}")]
    StationIdMismatch { index: usize, id: StationId },
    #[error("flow at index {index} carries id {id}")]
    FlowIdMismatch { index: usize, id: FlowId },
    #[error("station {0} lies outside the arena")]
    StationOutOfArena(StationId),
    #[error("stations {0} and {1} share the same position")]
    CoincidentStations(StationId, StationId),
    #[error("flow {flow} references unknown station {station}")]
    UnknownStation { flow: FlowId, station: StationId },
    #[error("flow {0} has identical source and destination")]
    SelfLoop(FlowId),
    #[error("flow {0} has non-positive or non-finite QoS demand")]
    InvalidQos(FlowId),
    #[error("band {band}: invalid parameter {field}")]
    InvalidBandParams { band: Band, field: &'static str },
    #[error("invalid frame parameter {0}")]
    InvalidFrame(&'static str),
    #[error("invalid antenna parameter {0}")]
    InvalidAntenna(&'static str),
    #[error("need at least two stations to place flows, got {0}")]
    TooFewStations(usize),
    #[error("interferer gain table covers {got} flows, scenario has {expected}")]
    GainTableSize { expected: usize, got: usize },
}

/// Raised by link-budget functions when two endpoints coincide.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("degenerate geometry: zero distance between endpoints")]
pub struct DegenerateGeometry;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {flows} flows x {slots} slots (limit {max_flows} x {max_slots})")]
    TooLarge {
        flows: usize,
        slots: usize,
        max_flows: usize,
        max_slots: usize,
    },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("config key {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("unknown scheme name {0:?}")]
    UnknownScheme(String),
    #[error("unknown sweep axis {0:?}")]
    UnknownAxis(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep spec has no {0}")]
    Empty(&'static str),
    #[error("scenario for {param}={value}, seed {seed}: {source}")]
    Scenario {
        param: &'static str,
        value: f64,
        seed: u64,
        #[source]
        source: ScenarioError,
    },
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("line {line}: {reason}")]
    Field { line: u64, reason: String },
}
