//! Link-budget physics: antenna patterns, path loss, received and
//! interference power, and Shannon rates for every band.
//!
//! Free-space bands (28 GHz, E-band and the dual-band baseline carriers) use
//! `k0 * G * d^-n * P_t` with a sectored antenna. The THz band uses the
//! 92.4 dB log-distance formula (f in GHz, d in km) and the ITU-R F.699
//! Cassegrain mask. The THz loss is converted from dB to a linear attenuation
//! before it is multiplied into power.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DegenerateGeometry, ScenarioError};
use crate::model::{distance, Band, BandParams, BaseStation, FlowId, FrameConfig, Scenario};
use crate::units::{db_to_linear, wavelength};

/// Two-level sectored pattern: `g_max` inside the main lobe, `g_min` outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectoredAntenna {
    pub g_max: f64,
    pub g_min: f64,
    pub beamwidth_rad: f64,
}

impl SectoredAntenna {
    pub fn from_db(g_max_db: f64, g_min_db: f64, beamwidth_rad: f64) -> Self {
        SectoredAntenna {
            g_max: db_to_linear(g_max_db),
            g_min: db_to_linear(g_min_db),
            beamwidth_rad,
        }
    }

    /// Probability that a uniformly oriented beam covers a given direction.
    pub fn main_lobe_probability(&self) -> f64 {
        self.beamwidth_rad / (2.0 * PI)
    }

    pub(crate) fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.g_min > 0.0 && self.g_max >= self.g_min && self.g_max.is_finite()) {
            return Err(ScenarioError::InvalidAntenna("sectored gains"));
        }
        if !(self.beamwidth_rad > 0.0 && self.beamwidth_rad <= 2.0 * PI) {
            return Err(ScenarioError::InvalidAntenna("sectored beamwidth"));
        }
        Ok(())
    }
}

/// Narrow-beam reference pattern (ITU-R F.699) parameterised by boresight
/// gain and the diameter-to-wavelength ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CassegrainAntenna {
    pub g_max_dbi: f64,
    pub d_over_lambda: f64,
}

impl Default for CassegrainAntenna {
    fn default() -> Self {
        CassegrainAntenna {
            g_max_dbi: 47.0,
            d_over_lambda: 152.0,
        }
    }
}

impl CassegrainAntenna {
    /// Second side-lobe gain, dBi.
    pub fn g1_dbi(&self) -> f64 {
        2.0 + 15.0 * self.d_over_lambda.log10()
    }

    /// End of the main-lobe parabola, degrees.
    pub fn phi_m_deg(&self) -> f64 {
        (20.0 / self.d_over_lambda) * (self.g_max_dbi - self.g1_dbi()).sqrt()
    }

    /// Start of the 32 - 25 log(phi) region, degrees.
    pub fn phi_r_deg(&self) -> f64 {
        15.85 * self.d_over_lambda.powf(-0.6)
    }

    /// Gain in dBi at off-axis angle `phi_deg`. Angles are folded into
    /// [0, 180] by symmetry.
    pub fn gain_dbi(&self, phi_deg: f64) -> f64 {
        let mut phi = phi_deg.rem_euclid(360.0);
        if phi > 180.0 {
            phi = 360.0 - phi;
        }
        if phi < self.phi_m_deg() {
            let x = self.d_over_lambda * phi;
            self.g_max_dbi - 2.5e-3 * x * x
        } else if phi < self.phi_r_deg() {
            self.g1_dbi()
        } else if phi < 48.0 {
            32.0 - 25.0 * phi.log10()
        } else {
            -13.0
        }
    }

    pub fn gain_linear(&self, phi_deg: f64) -> f64 {
        db_to_linear(self.gain_dbi(phi_deg))
    }

    pub fn boresight_linear(&self) -> f64 {
        db_to_linear(self.g_max_dbi)
    }

    pub(crate) fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.d_over_lambda > 0.0 && self.d_over_lambda.is_finite()) {
            return Err(ScenarioError::InvalidAntenna("cassegrain d_over_lambda"));
        }
        if !(self.g_max_dbi.is_finite() && self.g_max_dbi >= self.g1_dbi()) {
            return Err(ScenarioError::InvalidAntenna("cassegrain g_max_dbi"));
        }
        Ok(())
    }
}

/// Gain in dBi of the default 47 dBi, D/lambda = 152 Cassegrain antenna.
pub fn cassegrain_gain(phi_deg: f64) -> f64 {
    CassegrainAntenna::default().gain_dbi(phi_deg)
}

/// Free-space loss at the 1 m reference distance, `(lambda / 4 pi)^2`.
pub fn mmwave_k0(carrier_hz: f64) -> f64 {
    let l = wavelength(carrier_hz) / (4.0 * PI);
    l * l
}

fn positive(d: f64) -> Result<f64, DegenerateGeometry> {
    if d > 0.0 {
        Ok(d)
    } else {
        Err(DegenerateGeometry)
    }
}

/// Received power of a free-space link, W.
pub fn mmwave_rx_power(
    distance_m: f64,
    band: &BandParams,
    gain_product: f64,
) -> Result<f64, DegenerateGeometry> {
    let d = positive(distance_m)?;
    Ok(mmwave_k0(band.carrier_hz)
        * gain_product
        * d.powf(-band.path_loss_exponent)
        * band.tx_power_w)
}

/// Interference at a victim receiver `cross_distance_m` away from the
/// interfering transmitter, W.
pub fn mmwave_interference(
    cross_distance_m: f64,
    band: &BandParams,
    sampled_gain: f64,
) -> Result<f64, DegenerateGeometry> {
    Ok(band.mui_factor * mmwave_rx_power(cross_distance_m, band, sampled_gain)?)
}

/// Draws one directivity-gain product for an interferer/victim pair.
///
/// The interferer's transmit beam and the victim's receive beam are
/// independently uniform, so each end lands in its main lobe with
/// probability `beamwidth / 2 pi`.
pub fn sample_interferer_gain<R: Rng + ?Sized>(
    rng: &mut R,
    tx: &SectoredAntenna,
    rx: &SectoredAntenna,
) -> f64 {
    let (tx_main, rx_main) = sample_lobes(rng, tx, rx);
    let gt = if tx_main { tx.g_max } else { tx.g_min };
    let gr = if rx_main { rx.g_max } else { rx.g_min };
    gt * gr
}

/// Whether the interferer's transmit beam and the victim's receive beam each
/// land in their main lobe. Transmit end drawn first.
pub fn sample_lobes<R: Rng + ?Sized>(
    rng: &mut R,
    tx: &SectoredAntenna,
    rx: &SectoredAntenna,
) -> (bool, bool) {
    let t = rng.gen::<f64>() < tx.main_lobe_probability();
    let r = rng.gen::<f64>() < rx.main_lobe_probability();
    (t, r)
}

/// THz path loss in dB. `carrier_hz` and `distance_m` are SI; the formula
/// itself works in GHz and km.
pub fn thz_path_loss_db(carrier_hz: f64, distance_m: f64) -> Result<f64, DegenerateGeometry> {
    let d = positive(distance_m)?;
    Ok(92.4 + 20.0 * (carrier_hz / 1e9).log10() + 20.0 * (d / 1e3).log10())
}

pub fn thz_attenuation(carrier_hz: f64, distance_m: f64) -> Result<f64, DegenerateGeometry> {
    Ok(db_to_linear(-thz_path_loss_db(carrier_hz, distance_m)?))
}

/// Received power of a THz link, W.
pub fn thz_rx_power(
    distance_m: f64,
    band: &BandParams,
    gain_product: f64,
) -> Result<f64, DegenerateGeometry> {
    Ok(thz_attenuation(band.carrier_hz, distance_m)? * gain_product * band.tx_power_w)
}

/// Planar position, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<&BaseStation> for Point {
    fn from(s: &BaseStation) -> Self {
        Point { x: s.x, y: s.y }
    }
}

impl Point {
    fn dist(self, o: Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

/// Angle in degrees between the rays `origin -> a` and `origin -> b`.
fn off_axis_deg(origin: Point, a: Point, b: Point) -> Result<f64, DegenerateGeometry> {
    let (ux, uy) = (a.x - origin.x, a.y - origin.y);
    let (vx, vy) = (b.x - origin.x, b.y - origin.y);
    if (ux == 0.0 && uy == 0.0) || (vx == 0.0 && vy == 0.0) {
        return Err(DegenerateGeometry);
    }
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    Ok(cross.abs().atan2(dot).to_degrees())
}

/// Endpoints of an interfering THz flow and of the victim flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThzGeometry {
    pub interferer_tx: Point,
    pub interferer_rx: Point,
    pub victim_tx: Point,
    pub victim_rx: Point,
}

impl ThzGeometry {
    /// Off-axis angles at the interfering transmitter and the victim receiver.
    /// Each antenna's boresight points at its own link partner.
    pub fn off_axis_angles(&self) -> Result<(f64, f64), DegenerateGeometry> {
        let phi_t = off_axis_deg(self.interferer_tx, self.interferer_rx, self.victim_rx)?;
        let phi_r = off_axis_deg(self.victim_rx, self.victim_tx, self.interferer_tx)?;
        Ok((phi_t, phi_r))
    }
}

/// THz interference at the victim receiver, W.
pub fn thz_interference(
    geometry: &ThzGeometry,
    band: &BandParams,
    antenna: &CassegrainAntenna,
) -> Result<f64, DegenerateGeometry> {
    let (phi_t, phi_r) = geometry.off_axis_angles()?;
    let cross = geometry.interferer_tx.dist(geometry.victim_rx);
    let gains = antenna.gain_linear(phi_t) * antenna.gain_linear(phi_r);
    Ok(band.mui_factor * thz_rx_power(cross, band, gains)?)
}

/// `eta * W * log2(1 + P_r / (N0 W + I))`.
pub fn shannon_rate(
    frame: &FrameConfig,
    bandwidth_hz: f64,
    signal_w: f64,
    interference_w: f64,
) -> f64 {
    let noise = frame.noise_psd_w_per_hz * bandwidth_hz;
    frame.efficiency * bandwidth_hz * (signal_w / (noise + interference_w)).ln_1p()
        / std::f64::consts::LN_2
}

// Scenario-level helpers. A validated scenario has pairwise distinct station
// positions, so none of these can hit a zero distance for distinct stations.

const VALIDATED: &str = "validated scenario has distinct station positions";

/// Received power of `flow` on `band` with both beams aligned.
pub fn desired_power(scenario: &Scenario, flow: FlowId, band: Band) -> f64 {
    let params = scenario.band(band);
    let d = scenario.link_distance(flow);
    let antennas = scenario.antennas();
    if band.is_thz() {
        let g = antennas.cassegrain.boresight_linear();
        thz_rx_power(d, params, g * g).expect(VALIDATED)
    } else {
        let g = antennas.sectored.g_max;
        mmwave_rx_power(d, params, g * g).expect(VALIDATED)
    }
}

/// Interference caused at `victim`'s receiver by `interferer` when both
/// transmit on `band`. Callers must not pass adjacent flows.
pub fn interference_power(
    scenario: &Scenario,
    interferer: FlowId,
    victim: FlowId,
    band: Band,
) -> f64 {
    let params = scenario.band(band);
    let fj = scenario.flow(interferer);
    let fi = scenario.flow(victim);
    if band.is_thz() {
        let geometry = ThzGeometry {
            interferer_tx: scenario.station(fj.src).into(),
            interferer_rx: scenario.station(fj.dst).into(),
            victim_tx: scenario.station(fi.src).into(),
            victim_rx: scenario.station(fi.dst).into(),
        };
        thz_interference(&geometry, params, &scenario.antennas().cassegrain).expect(VALIDATED)
    } else {
        let d = distance(scenario.station(fj.src), scenario.station(fi.dst));
        let g = scenario.interferer_gains().gain(interferer, victim);
        mmwave_interference(d, params, g).expect(VALIDATED)
    }
}

/// Rate of `victim` on `band` while every flow in `concurrent` also transmits
/// on `band`. An empty set gives the noise-limited rate.
pub fn link_rate(scenario: &Scenario, victim: FlowId, concurrent: &[FlowId], band: Band) -> f64 {
    let signal = desired_power(scenario, victim, band);
    let interference: f64 = concurrent
        .iter()
        .filter(|&&j| j != victim)
        .map(|&j| interference_power(scenario, j, victim, band))
        .sum();
    shannon_rate(
        scenario.frame(),
        scenario.band(band).bandwidth_hz,
        signal,
        interference,
    )
}

/// Interference-free rate at full band bandwidth.
pub fn interference_free_rate(scenario: &Scenario, flow: FlowId, band: Band) -> f64 {
    link_rate(scenario, flow, &[], band)
}
