//! Post-hoc feasibility check for any schedule matrix.
//!
//! Recomputes everything from the scenario through the direct radio path
//! (not the scheduler's cached conflict graph).

use std::collections::HashMap;
use std::fmt;

use crate::conflict::relative_interference;
use crate::model::{adjacent, Cell, FlowId, Scenario, ScheduleMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A flow is active in a slot on a band other than its assigned one, or
    /// without any assigned band.
    BandMismatch {
        flow: FlowId,
        slot: usize,
    },
    /// Two flows sharing a station are active in the same slot.
    SharedStation {
        slot: usize,
        a: FlowId,
        b: FlowId,
    },
    /// Two same-band flows are concurrent although RI exceeds the threshold.
    Interference {
        slot: usize,
        a: FlowId,
        b: FlowId,
        ri: f64,
    },
    /// A flow's active cells do not form one contiguous run.
    Gap {
        flow: FlowId,
    },
    ShapeMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BandMismatch { flow, slot } => {
                write!(f, "{flow} active off its band in slot {slot}")
            }
            Violation::SharedStation { slot, a, b } => {
                write!(f, "{a} and {b} share a station in slot {slot}")
            }
            Violation::Interference { slot, a, b, ri } => {
                write!(f, "{a} and {b} concurrent in slot {slot} with RI {ri:e}")
            }
            Violation::Gap { flow } => write!(f, "{flow} transmits in more than one run"),
            Violation::ShapeMismatch => f.write_str("matrix shape does not match scenario"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Also require each flow's active cells to be contiguous.
    pub contiguous: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { contiguous: true }
    }
}

/// Returns every violation found; an empty list means the matrix is feasible.
pub fn validate(
    scenario: &Scenario,
    matrix: &ScheduleMatrix,
    opts: ValidateOptions,
) -> Vec<Violation> {
    let mut out = Vec::new();
    if matrix.num_flows() != scenario.flows().len()
        || matrix.num_slots() != scenario.frame().num_slots
    {
        out.push(Violation::ShapeMismatch);
        return out;
    }

    for f in scenario.flows() {
        let assigned = matrix.band_of(f.id);
        for (slot, cell) in matrix.row(f.id).iter().enumerate() {
            if let Cell::Active(b) = cell {
                if assigned != Some(*b) {
                    out.push(Violation::BandMismatch { flow: f.id, slot });
                }
            }
        }
        if opts.contiguous {
            if let Some((first, last)) = matrix.active_span(f.id) {
                if last + 1 - first != matrix.active_count(f.id) {
                    out.push(Violation::Gap { flow: f.id });
                }
            }
        }
    }

    let mut ri_memo: HashMap<(FlowId, FlowId), f64> = HashMap::new();
    let mut ri = |a: FlowId, b: FlowId, scenario: &Scenario| -> f64 {
        let band = matrix.band_of(b).expect("active flow has band");
        *ri_memo
            .entry((a, b))
            .or_insert_with(|| relative_interference(scenario, a, b, band))
    };

    for slot in 0..matrix.num_slots() {
        let active: Vec<(FlowId, Cell)> = matrix
            .active_in_slot(slot)
            .map(|f| (f, matrix.get(f, slot)))
            .collect();
        for (k, &(a, ca)) in active.iter().enumerate() {
            for &(b, cb) in &active[k + 1..] {
                if adjacent(scenario.flow(a), scenario.flow(b)) {
                    out.push(Violation::SharedStation { slot, a, b });
                    continue;
                }
                let (Cell::Active(ba), Cell::Active(bb)) = (ca, cb) else {
                    unreachable!()
                };
                if ba != bb || matrix.band_of(a) != Some(ba) || matrix.band_of(b) != Some(bb) {
                    continue;
                }
                let sigma = scenario.band(ba).interference_threshold;
                let worst = ri(a, b, scenario).max(ri(b, a, scenario));
                if worst > sigma {
                    out.push(Violation::Interference {
                        slot,
                        a,
                        b,
                        ri: worst,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Band;

    fn scenario() -> Scenario {
        fixtures::with_slots(
            fixtures::line_scenario(
                &[
                    (0.0, 0.0),
                    (10.0, 0.0),
                    (20.0, 0.0),
                    (60.0, 0.0),
                    (90.0, 0.0),
                ],
                &[(0, 1, 1e9), (1, 2, 1e9), (3, 4, 1e9)],
                100.0,
            ),
            4,
        )
    }

    #[test]
    fn empty_matrix_is_feasible() {
        let s = scenario();
        let m = ScheduleMatrix::new(4, vec![Some(Band::Mm28); 3]);
        assert!(validate(&s, &m, ValidateOptions::default()).is_empty());
    }

    #[test]
    fn detects_shared_station() {
        let s = scenario();
        let mut m = ScheduleMatrix::new(4, vec![Some(Band::Mm28), Some(Band::Thz), None]);
        m.activate(FlowId(0), 1);
        m.activate(FlowId(1), 1);
        let v = validate(&s, &m, ValidateOptions::default());
        assert_eq!(
            v,
            vec![Violation::SharedStation {
                slot: 1,
                a: FlowId(0),
                b: FlowId(1)
            }]
        );
    }

    #[test]
    fn detects_band_mismatch_and_gap() {
        let s = scenario();
        let mut m = ScheduleMatrix::new(4, vec![Some(Band::Mm28), None, None]);
        m.activate(FlowId(0), 0);
        m.activate(FlowId(0), 2);
        m.set_raw(FlowId(1), 3, Cell::Active(Band::EBand));
        let v = validate(&s, &m, ValidateOptions::default());
        assert!(v.contains(&Violation::Gap { flow: FlowId(0) }));
        assert!(v.contains(&Violation::BandMismatch {
            flow: FlowId(1),
            slot: 3
        }));
        let v = validate(&s, &m, ValidateOptions { contiguous: false });
        assert!(!v.contains(&Violation::Gap { flow: FlowId(0) }));
    }

    #[test]
    fn detects_interference() {
        // F0 (0->1, 10 m) and F2 (3->4): interferer 3 sits 50 m from receiver 1,
        // gain product 100, RI = 4e-4 > 1e-4.
        let s = scenario();
        let mut m = ScheduleMatrix::new(4, vec![Some(Band::Mm28), None, Some(Band::Mm28)]);
        m.activate(FlowId(0), 0);
        m.activate(FlowId(2), 0);
        let v = validate(&s, &m, ValidateOptions::default());
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Interference { slot: 0, .. }));

        // Same pair on different bands is fine.
        let mut m = ScheduleMatrix::new(4, vec![Some(Band::Mm28), None, Some(Band::EBand)]);
        m.activate(FlowId(0), 0);
        m.activate(FlowId(2), 0);
        assert!(validate(&s, &m, ValidateOptions::default()).is_empty());
    }

    #[test]
    fn shape_mismatch() {
        let s = scenario();
        let m = ScheduleMatrix::new(3, vec![None; 3]);
        assert_eq!(
            validate(&s, &m, ValidateOptions::default()),
            vec![Violation::ShapeMismatch]
        );
    }
}
