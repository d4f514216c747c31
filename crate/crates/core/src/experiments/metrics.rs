use crate::model::{FlowOutcome, FrameConfig};

/// Sum of per-flow frame throughputs, completed or not.
pub fn system_throughput(outcomes: &[FlowOutcome]) -> f64 {
    outcomes.iter().map(|o| o.achieved_throughput_bps).sum()
}

/// Mean time from frame start to completion over completed flows: the
/// scheduling phase plus every slot up to and including the completion slot.
/// `None` when nothing completed.
pub fn mean_delay(outcomes: &[FlowOutcome], frame: &FrameConfig) -> Option<f64> {
    let delays: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.completed)
        .filter_map(|o| o.completion_slot)
        .map(|slot| frame.sched_phase_s + (slot + 1) as f64 * frame.slot_s)
        .collect();
    if delays.is_empty() {
        None
    } else {
        Some(delays.iter().sum::<f64>() / delays.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::params::ScenarioParams;
    use crate::model::FlowId;

    fn done(slot: usize, t: f64) -> FlowOutcome {
        FlowOutcome {
            flow: FlowId(0),
            achieved_throughput_bps: t,
            completed: true,
            completion_slot: Some(slot),
        }
    }

    #[test]
    fn throughput_sums_everything() {
        assert_eq!(system_throughput(&[]), 0.0);
        let pending = FlowOutcome {
            flow: FlowId(1),
            achieved_throughput_bps: 2.0,
            completed: false,
            completion_slot: None,
        };
        assert_eq!(system_throughput(&[done(3, 5.0), pending]), 7.0);
    }

    #[test]
    fn delay_examples() {
        let frame = ScenarioParams::default().frame;
        let d = mean_delay(&[done(0, 1.0)], &frame).unwrap();
        assert!((d - 868e-6).abs() < 1e-15);
        assert_eq!(mean_delay(&[], &frame), None);
        let last = mean_delay(&[done(frame.num_slots - 1, 1.0)], &frame).unwrap();
        assert!((last - frame.frame_duration()).abs() < 1e-15);
        let two = mean_delay(&[done(0, 1.0), done(2, 1.0)], &frame).unwrap();
        assert!((two - (850e-6 + 36e-6)).abs() < 1e-15);
    }
}
