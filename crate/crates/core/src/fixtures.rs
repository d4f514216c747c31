//! Hand-built scenarios for tests and examples.

use crate::experiments::params::ScenarioParams;
use crate::model::{BaseStation, Flow, FlowId, GainTable, Scenario, ScenarioParts, StationId};

/// Stations at `positions`, flows `(src, dst, qos_bps)`, default radio and
/// frame parameters, a 1 km arena and one gain product for every pair.
pub fn line_scenario(
    positions: &[(f64, f64)],
    flows: &[(usize, usize, f64)],
    uniform_gain: f64,
) -> Scenario {
    let p = ScenarioParams::default();
    let stations = positions
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| BaseStation {
            id: StationId(k),
            x,
            y,
        })
        .collect();
    let flows: Vec<Flow> = flows
        .iter()
        .enumerate()
        .map(|(k, &(s, d, q))| Flow {
            id: FlowId(k),
            src: StationId(s),
            dst: StationId(d),
            qos_bps: q,
        })
        .collect();
    Scenario::new(ScenarioParts {
        area_m: 1000.0,
        interferer_gains: GainTable::uniform(flows.len(), uniform_gain),
        stations,
        flows,
        frame: p.frame,
        bands: p.bands,
        antennas: p.antennas,
        seed: 0,
    })
    .expect("fixture scenario is valid")
}

/// Same scenario with a different number of slots.
pub fn with_slots(scenario: Scenario, num_slots: usize) -> Scenario {
    let mut parts = scenario.into_parts();
    parts.frame.num_slots = num_slots;
    Scenario::new(parts).expect("slot count is positive")
}
