//! Scenario parameters and seeded scenario generation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ScenarioError;
use crate::model::{
    Antennas, Band, BandParams, BaseStation, Flow, FlowId, FrameConfig, GainTable, Scenario,
    ScenarioParts, StationId,
};
use crate::radio::{sample_interferer_gain, CassegrainAntenna, SectoredAntenna};
use crate::units::dbm_per_mhz_to_w_per_hz;

/// Everything except the seed that determines a generated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub area_m: f64,
    pub num_stations: usize,
    pub num_flows: usize,
    pub frame: FrameConfig,
    pub qos_min_bps: f64,
    pub qos_max_bps: f64,
    pub bands: BTreeMap<Band, BandParams>,
    pub antennas: Antennas,
}

fn band(carrier_hz: f64, bandwidth_hz: f64, tx_power_w: f64, sigma: f64) -> BandParams {
    BandParams {
        carrier_hz,
        bandwidth_hz,
        tx_power_w,
        mui_factor: 1.0,
        interference_threshold: sigma,
        path_loss_exponent: 2.0,
    }
}

impl Default for ScenarioParams {
    /// 100 m x 100 m arena, 20 stations, 350 flows, 2000 slots of 18 us after
    /// an 850 us scheduling phase, demand uniform in [1 Mbps, 10 Gbps].
    fn default() -> Self {
        let bands = BTreeMap::from([
            (Band::Mm28, band(28e9, 800e6, 1.0, 1e-4)),
            (Band::EBand, band(73e9, 1.2e9, 1.0, 1e-4)),
            (Band::Thz, band(340e9, 10e9, 20e-3, 1e-2)),
            (Band::Sub6, band(2.4e9, 20e6, 1.0, 1e-4)),
            (Band::Mm60, band(60e9, 2.16e9, 1.0, 1e-4)),
        ]);
        ScenarioParams {
            area_m: 100.0,
            num_stations: 20,
            num_flows: 350,
            frame: FrameConfig {
                num_slots: 2000,
                slot_s: 18e-6,
                sched_phase_s: 850e-6,
                noise_psd_w_per_hz: dbm_per_mhz_to_w_per_hz(-134.0),
                efficiency: 0.5,
                thz_ref_dist_m: 50.0,
            },
            qos_min_bps: 1e6,
            qos_max_bps: 10e9,
            bands,
            antennas: Antennas {
                sectored: SectoredAntenna::from_db(20.0, 0.0, PI / 6.0),
                cassegrain: CassegrainAntenna::default(),
            },
        }
    }
}

impl ScenarioParams {
    /// Sets the THz threshold and couples every other band two orders of
    /// magnitude lower.
    pub fn set_thresholds(&mut self, sigma_thz: f64) {
        for (b, p) in self.bands.iter_mut() {
            p.interference_threshold = if b.is_thz() {
                sigma_thz
            } else {
                sigma_thz * 1e-2
            };
        }
    }

    /// Builds a scenario from one ChaCha8 stream seeded with `seed`.
    ///
    /// Draw order: station x then y for each station; for each flow its source
    /// then destination (drawn among the other stations); every QoS demand;
    /// finally the interferer gain products for each ordered pair (interferer
    /// outer, victim inner, diagonal skipped).
    pub fn generate(&self, seed: u64) -> Result<Scenario, ScenarioError> {
        let n = self.num_stations;
        if self.num_flows > 0 && n < 2 {
            return Err(ScenarioError::TooFewStations(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let stations: Vec<BaseStation> = (0..n)
            .map(|k| {
                let x = rng.gen::<f64>() * self.area_m;
                let y = rng.gen::<f64>() * self.area_m;
                BaseStation {
                    id: StationId(k),
                    x,
                    y,
                }
            })
            .collect();

        let endpoints: Vec<(usize, usize)> = (0..self.num_flows)
            .map(|_| {
                let src = rng.gen_range(0..n);
                let mut dst = rng.gen_range(0..n - 1);
                if dst >= src {
                    dst += 1;
                }
                (src, dst)
            })
            .collect();

        let span = self.qos_max_bps - self.qos_min_bps;
        let flows: Vec<Flow> = endpoints
            .into_iter()
            .enumerate()
            .map(|(k, (src, dst))| Flow {
                id: FlowId(k),
                src: StationId(src),
                dst: StationId(dst),
                qos_bps: self.qos_min_bps + span * rng.gen::<f64>(),
            })
            .collect();

        let f = self.num_flows;
        let ant = &self.antennas.sectored;
        let mut gains = GainTable::uniform(f, 0.0);
        for j in 0..f {
            for i in 0..f {
                if i != j {
                    gains.set(
                        FlowId(j),
                        FlowId(i),
                        sample_interferer_gain(&mut rng, ant, ant),
                    );
                }
            }
        }

        Scenario::new(ScenarioParts {
            area_m: self.area_m,
            stations,
            flows,
            frame: self.frame,
            bands: self.bands.clone(),
            antennas: self.antennas,
            interferer_gains: gains,
            seed,
        })
    }
}
