//! Comparison schemes sharing the scheduler's input and output types.

use std::fmt;
use std::str::FromStr;

use crate::band_select::{select_bands, select_bands_by_ceiling, BandAssignment};
use crate::conflict::ConflictGraph;
use crate::error::ConfigError;
use crate::model::{Band, FlowId, Scenario, ScheduleResult};
use crate::scheduler::{schedule, SlotEngine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeKind {
    TripleBand,
    SingleBandEBand,
    DualBand,
    Mqis,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::TripleBand,
        SchemeKind::Mqis,
        SchemeKind::DualBand,
        SchemeKind::SingleBandEBand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::TripleBand => "triple",
            SchemeKind::SingleBandEBand => "single",
            SchemeKind::DualBand => "dual",
            SchemeKind::Mqis => "mqis",
        }
    }

    pub fn run(self, scenario: &Scenario) -> ScheduleResult {
        match self {
            SchemeKind::TripleBand => triple_band_schedule(scenario),
            SchemeKind::SingleBandEBand => single_band_schedule(scenario),
            SchemeKind::DualBand => dual_band_schedule(scenario),
            SchemeKind::Mqis => mqis_schedule(scenario),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "triple" | "triple-band" | "tripleband" => Ok(SchemeKind::TripleBand),
            "single" | "single-band" | "singleband" | "eband" => Ok(SchemeKind::SingleBandEBand),
            "dual" | "dual-band" | "dualband" => Ok(SchemeKind::DualBand),
            "mqis" => Ok(SchemeKind::Mqis),
            _ => Err(ConfigError::UnknownScheme(s.to_string())),
        }
    }
}

pub fn triple_band_schedule(scenario: &Scenario) -> ScheduleResult {
    schedule(scenario, &select_bands(scenario))
}

/// Every flow on E-band; flows above the E-band ceiling are dropped. No
/// distance gate applies.
pub fn single_band_schedule(scenario: &Scenario) -> ScheduleResult {
    schedule(scenario, &select_bands_by_ceiling(scenario, &[Band::EBand]))
}

/// 2.4 GHz + 60 GHz with ceiling-only selection, lower band first on ties.
pub fn dual_band_schedule(scenario: &Scenario) -> ScheduleResult {
    schedule(scenario, &select_bands_by_ceiling(scenario, &Band::DUAL))
}

/// Independent-set baseline on the triple-band assignment.
pub fn mqis_schedule(scenario: &Scenario) -> ScheduleResult {
    mqis_schedule_with_sets(scenario, &select_bands(scenario)).0
}

/// Partitions assigned flows into conflict-free sets and runs them one after
/// another.
///
/// Sets are grown greedily: each starts from the highest-priority flow not yet
/// placed and takes every later flow (in priority order) that conflicts with
/// none of its members. A set starts in the slot after the last flow of the
/// previous set completed; within a set every flow transmits each slot until
/// it completes. Returns the schedule and the sets in execution order.
pub fn mqis_schedule_with_sets(
    scenario: &Scenario,
    assignment: &BandAssignment,
) -> (ScheduleResult, Vec<Vec<FlowId>>) {
    let graph = ConflictGraph::build(scenario, assignment.bands());
    let mut engine = SlotEngine::new(scenario, assignment, &graph);

    let mut remaining = engine.by_priority();
    let mut sets: Vec<Vec<FlowId>> = Vec::new();
    while !remaining.is_empty() {
        let mut set = vec![remaining[0]];
        for &f in &remaining[1..] {
            if set.iter().all(|&m| !graph.conflicts(f, m)) {
                set.push(f);
            }
        }
        remaining.retain(|f| !set.contains(f));
        sets.push(set);
    }

    let mut next = 0;
    for slot in 0..scenario.frame().num_slots {
        if engine.active().is_empty() {
            if next == sets.len() {
                break;
            }
            for &f in &sets[next] {
                engine.admit(f);
            }
            next += 1;
        }
        engine.transmit(slot);
    }
    (engine.finish().0, sets)
}
