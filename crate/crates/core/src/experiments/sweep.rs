//! Parameter sweeps over (scheme x value x seed).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::baselines::SchemeKind;
use crate::error::{ConfigError, SweepError};
use crate::experiments::metrics::{mean_delay, system_throughput};
use crate::experiments::params::ScenarioParams;
use crate::validate::{validate, ValidateOptions, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// Number of requested flows.
    Flows,
    /// Slots per frame.
    Slots,
    /// THz reference distance, meters.
    Dref,
    /// `-log10(sigma_thz)`; the mmWave thresholds follow two decades lower.
    Threshold,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Flows => "flows",
            SweepAxis::Slots => "slots",
            SweepAxis::Dref => "dref",
            SweepAxis::Threshold => "threshold",
        }
    }

    /// Values swept when none are given.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepAxis::Flows => (1..=7).map(|k| 50.0 * k as f64).collect(),
            SweepAxis::Slots => (1..=9).map(|k| 500.0 * k as f64).collect(),
            SweepAxis::Dref => vec![30.0, 40.0, 50.0],
            SweepAxis::Threshold => (0..=6).map(f64::from).collect(),
        }
    }

    /// Value of this axis in `params`.
    pub fn current(self, params: &ScenarioParams) -> f64 {
        match self {
            SweepAxis::Flows => params.num_flows as f64,
            SweepAxis::Slots => params.frame.num_slots as f64,
            SweepAxis::Dref => params.frame.thz_ref_dist_m,
            SweepAxis::Threshold => params
                .bands
                .get(&crate::model::Band::Thz)
                .map_or(f64::NAN, |p| -p.interference_threshold.log10()),
        }
    }

    pub fn apply(self, params: &mut ScenarioParams, value: f64) {
        match self {
            SweepAxis::Flows => params.num_flows = value as usize,
            SweepAxis::Slots => params.frame.num_slots = value as usize,
            SweepAxis::Dref => params.frame.thz_ref_dist_m = value,
            SweepAxis::Threshold => params.set_thresholds(10f64.powf(-value)),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "flows" => Ok(SweepAxis::Flows),
            "slots" => Ok(SweepAxis::Slots),
            "dref" => Ok(SweepAxis::Dref),
            "threshold" => Ok(SweepAxis::Threshold),
            other => Err(ConfigError::UnknownAxis(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub schemes: Vec<SchemeKind>,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub base: ScenarioParams,
    /// Run the feasibility validator on every schedule.
    pub validate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scheme: SchemeKind,
    pub axis: SweepAxis,
    pub value: f64,
    pub seed: u64,
    pub completed: usize,
    pub throughput_bps: f64,
    pub mean_delay_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub scheme: SchemeKind,
    pub value: f64,
    pub seed: u64,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub records: Vec<RunRecord>,
    pub violations: Vec<ViolationReport>,
}

/// Evaluates the full cross product. Points run in parallel; records come back
/// ordered by (scheme in `schemes` order, value, seed) regardless.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport, SweepError> {
    if spec.schemes.is_empty() {
        return Err(SweepError::Empty("schemes"));
    }
    if spec.values.is_empty() {
        return Err(SweepError::Empty("values"));
    }
    if spec.seeds.is_empty() {
        return Err(SweepError::Empty("seeds"));
    }

    let points: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|v| (0..spec.seeds.len()).map(move |s| (v, s)))
        .collect();

    type Point = (
        (usize, usize),
        (Vec<(usize, RunRecord)>, Vec<ViolationReport>),
    );
    let results: Vec<Result<Point, SweepError>> = points
        .par_iter()
        .map(|&(v, s)| {
            let value = spec.values[v];
            let seed = spec.seeds[s];
            let mut params = spec.base.clone();
            spec.axis.apply(&mut params, value);
            let scenario = params
                .generate(seed)
                .map_err(|source| SweepError::Scenario {
                    param: spec.axis.name(),
                    value,
                    seed,
                    source,
                })?;
            let mut records = Vec::with_capacity(spec.schemes.len());
            let mut violations = Vec::new();
            for (k, &scheme) in spec.schemes.iter().enumerate() {
                let res = scheme.run(&scenario);
                if spec.validate {
                    violations.extend(
                        validate(&scenario, &res.matrix, ValidateOptions::default())
                            .into_iter()
                            .map(|violation| ViolationReport {
                                scheme,
                                value,
                                seed,
                                violation,
                            }),
                    );
                }
                records.push((
                    k,
                    RunRecord {
                        scheme,
                        axis: spec.axis,
                        value,
                        seed,
                        completed: res.completed_count(),
                        throughput_bps: system_throughput(&res.outcomes),
                        mean_delay_s: mean_delay(&res.outcomes, scenario.frame()),
                    },
                ));
            }
            Ok(((v, s), (records, violations)))
        })
        .collect();

    let mut keyed = Vec::new();
    let mut violations = Vec::new();
    for r in results {
        let ((v, s), (records, viol)) = r?;
        keyed.extend(records.into_iter().map(|(k, rec)| ((k, v, s), rec)));
        violations.extend(viol);
    }
    keyed.sort_by_key(|(key, _)| *key);
    Ok(SweepReport {
        records: keyed.into_iter().map(|(_, r)| r).collect(),
        violations,
    })
}

/// Mean and sample standard deviation per (scheme, value), in first-seen order.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub scheme: SchemeKind,
    pub value: f64,
    pub runs: usize,
    pub mean_completed: f64,
    pub std_completed: f64,
    pub mean_throughput_bps: f64,
    pub std_throughput_bps: f64,
}

pub fn aggregate(records: &[RunRecord]) -> Vec<Aggregate> {
    let mut keys: Vec<(SchemeKind, f64)> = Vec::new();
    for r in records {
        if !keys.iter().any(|&(s, v)| s == r.scheme && v == r.value) {
            keys.push((r.scheme, r.value));
        }
    }
    keys.into_iter()
        .map(|(scheme, value)| {
            let group: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.scheme == scheme && r.value == value)
                .collect();
            let completed: Vec<f64> = group.iter().map(|r| r.completed as f64).collect();
            let tput: Vec<f64> = group.iter().map(|r| r.throughput_bps).collect();
            let (mean_completed, std_completed) = mean_std(&completed);
            let (mean_throughput_bps, std_throughput_bps) = mean_std(&tput);
            Aggregate {
                scheme,
                value,
                runs: group.len(),
                mean_completed,
                std_completed,
                mean_throughput_bps,
                std_throughput_bps,
            }
        })
        .collect()
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        let mut base = ScenarioParams {
            num_flows: 20,
            ..ScenarioParams::default()
        };
        base.frame.num_slots = 300;
        SweepSpec {
            schemes: vec![SchemeKind::TripleBand],
            axis: SweepAxis::Flows,
            values: vec![20.0],
            seeds: vec![1, 2, 3],
            base,
            validate: true,
        }
    }

    #[test]
    fn one_scheme_one_value_three_seeds() {
        let report = run_sweep(&small_spec()).unwrap();
        assert_eq!(report.records.len(), 3);
        assert!(report.violations.is_empty());
        let seeds: Vec<u64> = report.records.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![1, 2, 3]);
        assert!(report
            .records
            .iter()
            .all(|r| r.completed <= 20 && r.throughput_bps >= 0.0));
    }

    #[test]
    fn ordering_is_scheme_value_seed() {
        let mut spec = small_spec();
        spec.schemes = vec![SchemeKind::Mqis, SchemeKind::TripleBand];
        spec.values = vec![10.0, 5.0];
        spec.seeds = vec![9, 4];
        let keys: Vec<(SchemeKind, f64, u64)> = run_sweep(&spec)
            .unwrap()
            .records
            .iter()
            .map(|r| (r.scheme, r.value, r.seed))
            .collect();
        let mut expected = Vec::new();
        for s in [SchemeKind::Mqis, SchemeKind::TripleBand] {
            for v in [10.0, 5.0] {
                for seed in [9, 4] {
                    expected.push((s, v, seed));
                }
            }
        }
        assert_eq!(keys, expected);
    }

    #[test]
    fn empty_spec_rejected() {
        let mut spec = small_spec();
        spec.seeds.clear();
        assert!(matches!(run_sweep(&spec), Err(SweepError::Empty("seeds"))));
    }

    #[test]
    fn scenario_errors_carry_coordinates() {
        let mut spec = small_spec();
        spec.base.num_stations = 1;
        match run_sweep(&spec) {
            Err(SweepError::Scenario {
                param: "flows",
                seed: 1,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn axis_apply_and_read_back() {
        let mut p = ScenarioParams::default();
        for axis in [
            SweepAxis::Flows,
            SweepAxis::Slots,
            SweepAxis::Dref,
            SweepAxis::Threshold,
        ] {
            let v = axis.default_values()[1];
            axis.apply(&mut p, v);
            assert!((axis.current(&p) - v).abs() < 1e-9, "{axis}");
            assert_eq!(axis.name().parse::<SweepAxis>().unwrap(), axis);
        }
        SweepAxis::Threshold.apply(&mut p, 3.0);
        assert!((p.bands[&crate::model::Band::Mm28].interference_threshold - 1e-5).abs() < 1e-18);
        assert!((p.bands[&crate::model::Band::Thz].interference_threshold - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn aggregate_mean_std() {
        let rec = |seed, completed| RunRecord {
            scheme: SchemeKind::TripleBand,
            axis: SweepAxis::Flows,
            value: 50.0,
            seed,
            completed,
            throughput_bps: completed as f64,
            mean_delay_s: None,
        };
        let agg = aggregate(&[rec(1, 2), rec(2, 4), rec(3, 6)]);
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].mean_completed, 4.0);
        assert!((agg[0].std_completed - 2.0).abs() < 1e-12);
        assert_eq!(agg[0].runs, 3);
    }
}
