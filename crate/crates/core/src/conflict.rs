//! Pairwise concurrency rules.
//!
//! Flows sharing a station never transmit together, whatever their bands.
//! Non-adjacent flows on the same band conflict when the relative
//! interference in either direction exceeds the band threshold. Flows on
//! different bands that share no station never conflict.

use std::collections::BTreeMap;

use crate::model::{adjacent, Band, Flow, FlowId, Scenario};
use crate::radio::{desired_power, interference_power, shannon_rate};

/// Interference at `victim` caused by `interferer`, relative to the victim's
/// own received power.
pub fn relative_interference(
    scenario: &Scenario,
    interferer: FlowId,
    victim: FlowId,
    band: Band,
) -> f64 {
    interference_power(scenario, interferer, victim, band) / desired_power(scenario, victim, band)
}

pub fn conflicts(scenario: &Scenario, i: FlowId, band_i: Band, j: FlowId, band_j: Band) -> bool {
    if adjacent(scenario.flow(i), scenario.flow(j)) {
        return true;
    }
    if band_i != band_j {
        return false;
    }
    let sigma = scenario.band(band_i).interference_threshold;
    relative_interference(scenario, j, i, band_i) > sigma
        || relative_interference(scenario, i, j, band_i) > sigma
}

/// Number of other flows in `flows` sharing a station with each flow.
pub fn degrees(flows: &[Flow]) -> BTreeMap<FlowId, usize> {
    flows
        .iter()
        .map(|f| {
            let d = flows
                .iter()
                .filter(|g| g.id != f.id && adjacent(f, g))
                .count();
            (f.id, d)
        })
        .collect()
}

/// Precomputed conflict relation, powers and degrees for one band assignment.
///
/// Flows without a band are isolated: they have degree zero, never conflict
/// and are never consulted by the schedulers.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    n: usize,
    bands: Vec<Option<Band>>,
    adjacency: Vec<bool>,
    conflict: Vec<bool>,
    /// `interference[j * n + i]`: power at i's receiver from j, same band only.
    interference: Vec<f64>,
    signal: Vec<f64>,
    degree: Vec<usize>,
}

impl ConflictGraph {
    pub fn build(scenario: &Scenario, bands: &[Option<Band>]) -> Self {
        let n = scenario.flows().len();
        assert_eq!(bands.len(), n, "one band slot per flow");
        let flows = scenario.flows();

        let signal: Vec<f64> = (0..n)
            .map(|i| bands[i].map_or(0.0, |b| desired_power(scenario, FlowId(i), b)))
            .collect();

        let mut adjacency = vec![false; n * n];
        let mut conflict = vec![false; n * n];
        let mut interference = vec![0.0; n * n];
        let mut degree = vec![0usize; n];

        for i in 0..n {
            let Some(bi) = bands[i] else { continue };
            for j in 0..n {
                if i == j {
                    continue;
                }
                let Some(bj) = bands[j] else { continue };
                if adjacent(&flows[i], &flows[j]) {
                    adjacency[i * n + j] = true;
                    conflict[i * n + j] = true;
                    degree[i] += 1;
                } else if bi == bj {
                    interference[j * n + i] =
                        interference_power(scenario, FlowId(j), FlowId(i), bi);
                }
            }
        }
        for i in 0..n {
            let Some(b) = bands[i] else { continue };
            let sigma = scenario.band(b).interference_threshold;
            for j in (i + 1)..n {
                if bands[j] != Some(b) || adjacency[i * n + j] {
                    continue;
                }
                let ri_ji = interference[j * n + i] / signal[i];
                let ri_ij = interference[i * n + j] / signal[j];
                if ri_ji > sigma || ri_ij > sigma {
                    conflict[i * n + j] = true;
                    conflict[j * n + i] = true;
                }
            }
        }

        ConflictGraph {
            n,
            bands: bands.to_vec(),
            adjacency,
            conflict,
            interference,
            signal,
            degree,
        }
    }

    pub fn num_flows(&self) -> usize {
        self.n
    }

    pub fn band(&self, flow: FlowId) -> Option<Band> {
        self.bands[flow.0]
    }

    pub fn adjacent(&self, i: FlowId, j: FlowId) -> bool {
        self.adjacency[i.0 * self.n + j.0]
    }

    pub fn conflicts(&self, i: FlowId, j: FlowId) -> bool {
        self.conflict[i.0 * self.n + j.0]
    }

    /// Shared-station degree among flows that carry a band.
    pub fn degree(&self, flow: FlowId) -> usize {
        self.degree[flow.0]
    }

    pub fn signal(&self, flow: FlowId) -> f64 {
        self.signal[flow.0]
    }

    /// RI of `interferer` on `victim`, defined for non-adjacent same-band pairs.
    pub fn relative_interference(&self, interferer: FlowId, victim: FlowId) -> Option<f64> {
        let (i, j) = (victim.0, interferer.0);
        if i == j || self.adjacency[i * self.n + j] {
            return None;
        }
        match (self.bands[i], self.bands[j]) {
            (Some(a), Some(b)) if a == b => {
                Some(self.interference[j * self.n + i] / self.signal[i])
            }
            _ => None,
        }
    }

    /// Current rate of `victim` given the set of flows transmitting this slot.
    /// Only members on the victim's band contribute interference.
    pub fn rate(&self, scenario: &Scenario, victim: FlowId, active: &[FlowId]) -> f64 {
        let band = self.bands[victim.0].expect("rate of a flow without band");
        let i = victim.0;
        let interference: f64 = active
            .iter()
            .filter(|j| j.0 != i && self.bands[j.0] == Some(band))
            .map(|j| self.interference[j.0 * self.n + i])
            .sum();
        shannon_rate(
            scenario.frame(),
            scenario.band(band).bandwidth_hz,
            self.signal[i],
            interference,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::params::ScenarioParams;
    use crate::fixtures;
    use crate::model::StationId;

    #[test]
    fn degree_examples() {
        let f = |id, s, d| Flow {
            id: FlowId(id),
            src: StationId(s),
            dst: StationId(d),
            qos_bps: 1.0,
        };
        assert_eq!(degrees(&[f(0, 0, 1)])[&FlowId(0)], 0);

        let star = [f(0, 0, 1), f(1, 0, 2), f(2, 0, 3)];
        assert!(degrees(&star).values().all(|&d| d == 2));

        let chain = [f(0, 0, 1), f(1, 1, 2), f(2, 2, 3)];
        let d = degrees(&chain);
        assert_eq!((d[&FlowId(0)], d[&FlowId(1)], d[&FlowId(2)]), (1, 2, 1));
    }

    #[test]
    fn ri_examples() {
        // Desired 10 m, interferer 50 m from the victim receiver with G_max*G_min.
        let s = fixtures::line_scenario(
            &[(0.0, 0.0), (10.0, 0.0), (60.0, 0.0), (90.0, 0.0)],
            &[(0, 1, 1e9), (2, 3, 1e9)],
            100.0,
        );
        let ri = relative_interference(&s, FlowId(1), FlowId(0), Band::Mm28);
        assert!((ri - 4e-4).abs() < 1e-15, "ri = {ri}");

        let mut parts = s.clone().into_parts();
        parts.bands.get_mut(&Band::Mm28).unwrap().mui_factor = 0.0;
        let quiet = Scenario::new(parts).unwrap();
        assert_eq!(
            relative_interference(&quiet, FlowId(1), FlowId(0), Band::Mm28),
            0.0
        );
    }

    #[test]
    fn ri_unity_for_mirrored_geometry() {
        // Interferer transmitter at the same distance from the victim receiver
        // as the victim's own transmitter, full main-lobe gain, rho = 1.
        let s = fixtures::line_scenario(
            &[(0.0, 0.0), (10.0, 0.0), (20.0, 0.0), (50.0, 50.0)],
            &[(0, 1, 1e9), (2, 3, 1e9)],
            1e4,
        );
        let ri = relative_interference(&s, FlowId(1), FlowId(0), Band::Mm28);
        assert!((ri - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conflict_examples() {
        let s = fixtures::line_scenario(
            &[
                (0.0, 0.0),
                (10.0, 0.0),
                (60.0, 0.0),
                (90.0, 0.0),
                (20.0, 0.0),
            ],
            &[(0, 1, 1e9), (2, 3, 1e9), (1, 4, 1e9)],
            100.0,
        );
        // adjacent, any bands
        assert!(conflicts(&s, FlowId(0), Band::Mm28, FlowId(2), Band::Thz));
        assert!(conflicts(&s, FlowId(0), Band::Thz, FlowId(2), Band::Thz));
        // non-adjacent, different bands
        assert!(!conflicts(
            &s,
            FlowId(0),
            Band::Mm28,
            FlowId(1),
            Band::EBand
        ));
        // RI 4e-4 = 4 sigma with sigma = 1e-4
        assert!(conflicts(&s, FlowId(0), Band::Mm28, FlowId(1), Band::Mm28));

        let mut parts = s.clone().into_parts();
        parts
            .bands
            .get_mut(&Band::Mm28)
            .unwrap()
            .interference_threshold = 4e-3; // RI = sigma/10
        let loose = Scenario::new(parts).unwrap();
        let ri_ji = relative_interference(&loose, FlowId(1), FlowId(0), Band::Mm28);
        let ri_ij = relative_interference(&loose, FlowId(0), FlowId(1), Band::Mm28);
        let sigma = 4e-3;
        assert_eq!(
            conflicts(&loose, FlowId(0), Band::Mm28, FlowId(1), Band::Mm28),
            ri_ji > sigma || ri_ij > sigma
        );

        // RI = 10 sigma
        let mut parts = s.into_parts();
        parts
            .bands
            .get_mut(&Band::Mm28)
            .unwrap()
            .interference_threshold = 4e-5;
        let tight = Scenario::new(parts).unwrap();
        assert!(conflicts(
            &tight,
            FlowId(0),
            Band::Mm28,
            FlowId(1),
            Band::Mm28
        ));
    }

    #[test]
    fn graph_matches_pairwise_predicate() {
        let params = ScenarioParams {
            num_flows: 60,
            ..ScenarioParams::default()
        };
        let s = params.generate(11).unwrap();
        let bands: Vec<Option<Band>> = (0..60)
            .map(|k| match k % 4 {
                0 => Some(Band::Mm28),
                1 => Some(Band::EBand),
                2 => Some(Band::Thz),
                _ => None,
            })
            .collect();
        let g = ConflictGraph::build(&s, &bands);
        let assigned: Vec<Flow> = s
            .flows()
            .iter()
            .filter(|f| bands[f.id.0].is_some())
            .copied()
            .collect();
        let deg = degrees(&assigned);
        for i in 0..60 {
            for j in 0..60 {
                if i == j {
                    continue;
                }
                let (fi, fj) = (FlowId(i), FlowId(j));
                assert_eq!(g.conflicts(fi, fj), g.conflicts(fj, fi));
                if let (Some(bi), Some(bj)) = (bands[i], bands[j]) {
                    assert_eq!(
                        g.conflicts(fi, fj),
                        conflicts(&s, fi, bi, fj, bj),
                        "{i} {j}"
                    );
                } else {
                    assert!(!g.conflicts(fi, fj));
                }
            }
            if bands[i].is_some() {
                assert_eq!(g.degree(FlowId(i)), deg[&FlowId(i)]);
            }
        }
    }
}
