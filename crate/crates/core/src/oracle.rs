//! Exhaustive solver for tiny instances of the scheduling integer program.
//!
//! Each flow either never transmits or uses one band for the whole frame (THz
//! only within the reference distance). For every band vector all per-slot
//! activation sets are enumerated; a set is admissible when no two members
//! share a station and no same-band pair exceeds its RI threshold in either
//! direction. Rates come straight from the radio module against each slot's
//! same-band members.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conflict::relative_interference;
use crate::error::OracleError;
use crate::experiments::params::ScenarioParams;
use crate::model::{adjacent, Band, FlowId, Scenario, ScheduleMatrix};
use crate::radio::link_rate;

pub const MAX_FLOWS: usize = 3;
pub const MAX_SLOTS: usize = 4;

/// A scenario small enough for exhaustive search.
#[derive(Debug, Clone)]
pub struct TinyInstance {
    scenario: Scenario,
}

impl TinyInstance {
    pub fn new(scenario: Scenario) -> Result<Self, OracleError> {
        let flows = scenario.flows().len();
        let slots = scenario.frame().num_slots;
        if flows > MAX_FLOWS || slots > MAX_SLOTS {
            return Err(OracleError::TooLarge {
                flows,
                slots,
                max_flows: MAX_FLOWS,
                max_slots: MAX_SLOTS,
            });
        }
        Ok(TinyInstance { scenario })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }
}

/// Parameters for a random tiny instance. The demand range is scaled by the
/// short frame's transmit fraction so that demand relative to capacity
/// matches a full 2000-slot frame.
pub fn tiny_params(num_flows: usize, num_slots: usize) -> ScenarioParams {
    let mut p = ScenarioParams::default();
    let full = p.frame;
    p.num_stations = 5;
    p.num_flows = num_flows.min(MAX_FLOWS);
    p.frame.num_slots = num_slots.clamp(1, MAX_SLOTS);
    let frac = |slots: usize| {
        slots as f64 * full.slot_s / (full.sched_phase_s + slots as f64 * full.slot_s)
    };
    let scale = frac(p.frame.num_slots) / frac(full.num_slots);
    p.qos_min_bps *= scale;
    p.qos_max_bps *= scale;
    p
}

/// Random instance with 1..=3 flows and 1..=4 slots, all drawn from `seed`.
pub fn tiny_instance(seed: u64) -> TinyInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f7a_11a5);
    let flows = rng.gen_range(1..=MAX_FLOWS);
    let slots = rng.gen_range(1..=MAX_SLOTS);
    let scenario = tiny_params(flows, slots)
        .generate(seed)
        .expect("tiny parameters are valid");
    TinyInstance::new(scenario).expect("within limits")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub completed: usize,
    pub matrix: ScheduleMatrix,
}

/// One admissible concurrent set under a fixed band vector, with the rate
/// each member achieves in it.
struct SlotOption {
    members: Vec<FlowId>,
    rates: Vec<f64>,
}

fn slot_options(scenario: &Scenario, bands: &[Option<Band>]) -> Vec<SlotOption> {
    let n = bands.len();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1 << n) {
        let members: Vec<FlowId> = (0..n)
            .filter(|k| mask & (1 << k) != 0)
            .map(FlowId)
            .collect();
        if members.iter().any(|f| bands[f.0].is_none()) {
            continue;
        }
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                if adjacent(scenario.flow(a), scenario.flow(b)) {
                    continue 'mask;
                }
                let (ba, bb) = (bands[a.0].unwrap(), bands[b.0].unwrap());
                if ba == bb {
                    let sigma = scenario.band(ba).interference_threshold;
                    if relative_interference(scenario, a, b, ba) > sigma
                        || relative_interference(scenario, b, a, ba) > sigma
                    {
                        continue 'mask;
                    }
                }
            }
        }
        let rates = members
            .iter()
            .map(|&f| {
                let band = bands[f.0].unwrap();
                let peers: Vec<FlowId> = members
                    .iter()
                    .copied()
                    .filter(|&g| g != f && bands[g.0] == Some(band))
                    .collect();
                link_rate(scenario, f, &peers, band)
            })
            .collect();
        out.push(SlotOption { members, rates });
    }
    out
}

/// Maximum number of flows meeting their demand, with one optimal schedule.
pub fn optimal_completed(instance: &TinyInstance) -> OracleSolution {
    let scenario = &instance.scenario;
    let n = scenario.flows().len();
    let m = scenario.frame().num_slots;
    let frame = scenario.frame();
    let d_ref = frame.thz_ref_dist_m;
    let demand: Vec<f64> = scenario
        .flows()
        .iter()
        .map(|f| frame.demand_bits(f.qos_bps))
        .collect();

    let choices: Vec<Vec<Option<Band>>> = scenario
        .flows()
        .iter()
        .map(|f| {
            let mut c = vec![None, Some(Band::Mm28), Some(Band::EBand)];
            if scenario.link_distance(f.id) <= d_ref {
                c.push(Some(Band::Thz));
            }
            c
        })
        .collect();

    let mut best = OracleSolution {
        completed: 0,
        matrix: ScheduleMatrix::new(m, vec![None; n]),
    };
    let mut band_vec = vec![None; n];
    let mut pick = vec![0usize; n];
    loop {
        for k in 0..n {
            band_vec[k] = choices[k][pick[k]];
        }
        let options = slot_options(scenario, &band_vec);
        let mut seq = vec![0usize; m];
        loop {
            let mut delivered = vec![0.0; n];
            for &o in &seq {
                let opt = &options[o];
                for (f, r) in opt.members.iter().zip(&opt.rates) {
                    delivered[f.0] += r * frame.slot_s;
                }
            }
            let completed = (0..n).filter(|&k| delivered[k] >= demand[k]).count();
            if completed > best.completed {
                let mut matrix = ScheduleMatrix::new(m, band_vec.clone());
                for (slot, &o) in seq.iter().enumerate() {
                    for &f in &options[o].members {
                        matrix.activate(f, slot);
                    }
                }
                best = OracleSolution { completed, matrix };
                if completed == n {
                    return best;
                }
            }
            if !advance(&mut seq, options.len()) {
                break;
            }
        }
        if !advance_mixed(&mut pick, &choices) {
            break;
        }
    }
    best
}

/// Odometer increment over `digits` base `base`; false after wrap-around.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn advance_mixed(digits: &mut [usize], choices: &[Vec<Option<Band>>]) -> bool {
    for (d, c) in digits.iter_mut().zip(choices) {
        *d += 1;
        if *d < c.len() {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::radio::interference_free_rate;

    fn slots_demand(pos: &[(f64, f64)], band: Band, slots: f64) -> f64 {
        let s = fixtures::with_slots(fixtures::line_scenario(pos, &[(0, 1, 1.0)], 1.0), MAX_SLOTS);
        let r = interference_free_rate(&s, FlowId(0), band);
        slots * r * s.frame().slot_s / s.frame().frame_duration()
    }

    #[test]
    fn rejects_large_instances() {
        let s = fixtures::line_scenario(&[(0.0, 0.0), (10.0, 0.0)], &[(0, 1, 1e9)], 1.0);
        assert!(matches!(
            TinyInstance::new(s),
            Err(OracleError::TooLarge { slots: 2000, .. })
        ));
    }

    #[test]
    fn single_satisfiable_flow() {
        let pos = [(0.0, 0.0), (60.0, 0.0)];
        let q = slots_demand(&pos, Band::EBand, 2.5);
        let s = fixtures::with_slots(fixtures::line_scenario(&pos, &[(0, 1, q)], 1.0), 4);
        let sol = optimal_completed(&TinyInstance::new(s.clone()).unwrap());
        assert_eq!(sol.completed, 1);
        assert!(crate::validate::validate(
            &s,
            &sol.matrix,
            crate::validate::ValidateOptions { contiguous: false }
        )
        .is_empty());
    }

    #[test]
    fn adjacent_long_flows_serialize() {
        // Both long (no THz), each needs ~3 of 4 slots on E-band.
        let pos = [(0.0, 0.0), (70.0, 0.0), (0.0, 70.0)];
        let q = slots_demand(&[(0.0, 0.0), (70.0, 0.0)], Band::EBand, 2.6);
        let s = fixtures::with_slots(
            fixtures::line_scenario(&pos, &[(0, 1, q), (0, 2, q)], 1.0),
            4,
        );
        let sol = optimal_completed(&TinyInstance::new(s).unwrap());
        assert_eq!(sol.completed, 1);
    }

    #[test]
    fn tiny_instances_are_deterministic_and_bounded() {
        for seed in 0..20 {
            let a = tiny_instance(seed);
            let b = tiny_instance(seed);
            assert_eq!(a.scenario(), b.scenario());
            assert!((1..=MAX_FLOWS).contains(&a.scenario().flows().len()));
            assert!((1..=MAX_SLOTS).contains(&a.scenario().frame().num_slots));
        }
    }

    #[test]
    fn impossible_demand_gives_zero() {
        let s = fixtures::with_slots(
            fixtures::line_scenario(&[(0.0, 0.0), (70.0, 0.0)], &[(0, 1, 9e9)], 1.0),
            2,
        );
        let sol = optimal_completed(&TinyInstance::new(s).unwrap());
        assert_eq!(sol.completed, 0);
    }
}
