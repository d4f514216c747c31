//! Slot-by-slot greedy scheduler.
//!
//! Flows are ranked once by (degree ascending, priority descending, id
//! ascending). In every slot each waiting flow, in rank order, joins the
//! transmitting set if it conflicts with none of its members. All members
//! then transmit for the slot at a rate computed against the final
//! membership, their residual demand shrinks, and members whose residual
//! reaches zero complete and leave. Admitted flows are never preempted.

use std::cmp::Ordering;

use crate::band_select::BandAssignment;
use crate::conflict::ConflictGraph;
use crate::model::{Band, FlowId, FlowOutcome, Scenario, ScheduleMatrix, ScheduleResult};
use crate::radio::interference_free_rate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowStatus {
    Waiting,
    Transmitting,
    Completed,
    /// Admitted but still short of its demand when the frame ended.
    Unserved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub flow: FlowId,
    pub band: Band,
    /// Bits still owed, starting at `q * (t0 + M dt)`.
    pub residual_bits: f64,
    pub delivered_bits: f64,
    pub degree: usize,
    pub priority: f64,
    pub status: FlowStatus,
    pub completion_slot: Option<usize>,
}

/// Reciprocal of the number of slots the flow would need without
/// interference: `R dt / (q (t0 + M dt))`.
pub fn priority(scenario: &Scenario, flow: FlowId, band: Band) -> f64 {
    let frame = scenario.frame();
    let r = interference_free_rate(scenario, flow, band);
    r * frame.slot_s / frame.demand_bits(scenario.flow(flow).qos_bps)
}

/// Shared slot machinery for the greedy scheduler and the independent-set
/// baseline: admission bookkeeping, per-slot rate evaluation and outcome
/// accounting.
pub(crate) struct SlotEngine<'a> {
    scenario: &'a Scenario,
    graph: &'a ConflictGraph,
    states: Vec<Option<FlowState>>,
    matrix: ScheduleMatrix,
    active: Vec<FlowId>,
}

impl<'a> SlotEngine<'a> {
    pub(crate) fn new(
        scenario: &'a Scenario,
        assignment: &BandAssignment,
        graph: &'a ConflictGraph,
    ) -> Self {
        let frame = scenario.frame();
        let states = scenario
            .flows()
            .iter()
            .map(|f| {
                assignment.band_of(f.id).map(|band| FlowState {
                    flow: f.id,
                    band,
                    residual_bits: frame.demand_bits(f.qos_bps),
                    delivered_bits: 0.0,
                    degree: graph.degree(f.id),
                    priority: priority(scenario, f.id, band),
                    status: FlowStatus::Waiting,
                    completion_slot: None,
                })
            })
            .collect();
        SlotEngine {
            scenario,
            graph,
            states,
            matrix: ScheduleMatrix::new(frame.num_slots, assignment.bands().to_vec()),
            active: Vec::new(),
        }
    }

    pub(crate) fn state(&self, flow: FlowId) -> &FlowState {
        self.states[flow.0].as_ref().expect("flow has a band")
    }

    /// Assigned flows ordered by (degree asc, priority desc, id asc).
    pub(crate) fn ranked(&self) -> Vec<FlowId> {
        let mut ids: Vec<FlowId> = self.states.iter().flatten().map(|s| s.flow).collect();
        ids.sort_by(|&a, &b| {
            let (sa, sb) = (self.state(a), self.state(b));
            sa.degree
                .cmp(&sb.degree)
                .then(
                    sb.priority
                        .partial_cmp(&sa.priority)
                        .unwrap_or(Ordering::Equal),
                )
                .then(a.cmp(&b))
        });
        ids
    }

    /// Priority-descending order (id ascending on ties), ignoring degree.
    pub(crate) fn by_priority(&self) -> Vec<FlowId> {
        let mut ids: Vec<FlowId> = self.states.iter().flatten().map(|s| s.flow).collect();
        ids.sort_by(|&a, &b| {
            self.state(b)
                .priority
                .partial_cmp(&self.state(a).priority)
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        ids
    }

    pub(crate) fn active(&self) -> &[FlowId] {
        &self.active
    }

    pub(crate) fn can_join(&self, flow: FlowId) -> bool {
        self.active.iter().all(|&a| !self.graph.conflicts(flow, a))
    }

    pub(crate) fn admit(&mut self, flow: FlowId) {
        let s = self.states[flow.0].as_mut().expect("flow has a band");
        debug_assert_eq!(s.status, FlowStatus::Waiting);
        s.status = FlowStatus::Transmitting;
        self.active.push(flow);
    }

    /// Every active flow transmits in `slot`; completed flows leave.
    /// Returns the flows that completed in this slot.
    pub(crate) fn transmit(&mut self, slot: usize) -> Vec<FlowId> {
        let dt = self.scenario.frame().slot_s;
        let rates: Vec<f64> = self
            .active
            .iter()
            .map(|&f| self.graph.rate(self.scenario, f, &self.active))
            .collect();
        let mut done = Vec::new();
        for (&f, r) in self.active.iter().zip(rates) {
            self.matrix.activate(f, slot);
            let s = self.states[f.0].as_mut().expect("active flow has a band");
            let bits = r * dt;
            s.delivered_bits += bits;
            s.residual_bits -= bits;
            if s.residual_bits <= 0.0 {
                s.status = FlowStatus::Completed;
                s.completion_slot = Some(slot);
                done.push(f);
            }
        }
        self.active.retain(|f| !done.contains(f));
        done
    }

    pub(crate) fn finish(mut self) -> (ScheduleResult, Vec<FlowState>) {
        for &f in &self.active {
            if let Some(s) = self.states[f.0].as_mut() {
                s.status = FlowStatus::Unserved;
            }
        }
        let frame_s = self.scenario.frame().frame_duration();
        let outcomes = self
            .scenario
            .flows()
            .iter()
            .map(|f| match &self.states[f.id.0] {
                Some(s) => FlowOutcome {
                    flow: f.id,
                    achieved_throughput_bps: s.delivered_bits / frame_s,
                    completed: s.status == FlowStatus::Completed,
                    completion_slot: s.completion_slot,
                },
                None => FlowOutcome {
                    flow: f.id,
                    achieved_throughput_bps: 0.0,
                    completed: false,
                    completion_slot: None,
                },
            })
            .collect();
        let states = self.states.into_iter().flatten().collect();
        (
            ScheduleResult {
                matrix: self.matrix,
                outcomes,
            },
            states,
        )
    }
}

/// Runs the greedy slot scheduler on a band assignment.
pub fn schedule(scenario: &Scenario, assignment: &BandAssignment) -> ScheduleResult {
    schedule_with_states(scenario, assignment).0
}

/// Like [`schedule`], also returning the final per-flow state of every
/// assigned flow.
pub fn schedule_with_states(
    scenario: &Scenario,
    assignment: &BandAssignment,
) -> (ScheduleResult, Vec<FlowState>) {
    let graph = ConflictGraph::build(scenario, assignment.bands());
    let mut engine = SlotEngine::new(scenario, assignment, &graph);
    let mut waiting = engine.ranked();

    for slot in 0..scenario.frame().num_slots {
        if waiting.is_empty() && engine.active().is_empty() {
            break;
        }
        waiting.retain(|&f| {
            if engine.can_join(f) {
                engine.admit(f);
                false
            } else {
                true
            }
        });
        engine.transmit(slot);
    }
    engine.finish()
}
