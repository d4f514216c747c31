//! Domain types shared by every scheduling scheme: stations, flows, bands,
//! frame timing, scenarios and the band-tagged activation grid.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;
use crate::radio::{CassegrainAntenna, SectoredAntenna};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StationId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FlowId(pub usize);

impl StationId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl FlowId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BS{}", self.0)
    }
}

impl fmt::Display for FlowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.0)
    }
}

/// A fixed base station in the planar arena. Coordinates are meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    pub id: StationId,
    pub x: f64,
    pub y: f64,
}

/// A traffic demand between two stations with a minimum-throughput requirement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub id: FlowId,
    pub src: StationId,
    pub dst: StationId,
    /// Demanded throughput over one frame, bit/s.
    pub qos_bps: f64,
}

impl Flow {
    pub fn endpoints(&self) -> [StationId; 2] {
        [self.src, self.dst]
    }
}

/// Transmission band. The first three form the triple-band system; `Sub6`
/// (2.4 GHz) and `Mm60` (60 GHz) only serve the dual-band baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Band {
    Mm28,
    EBand,
    Thz,
    Sub6,
    Mm60,
}

impl Band {
    pub const TRIPLE: [Band; 3] = [Band::Mm28, Band::EBand, Band::Thz];
    pub const DUAL: [Band; 2] = [Band::Sub6, Band::Mm60];
    pub const ALL: [Band; 5] = [Band::Mm28, Band::EBand, Band::Thz, Band::Sub6, Band::Mm60];

    /// THz links use the dB path-loss model and the Cassegrain antenna; every
    /// other band is free-space with the sectored antenna.
    pub fn is_thz(self) -> bool {
        matches!(self, Band::Thz)
    }

    pub fn name(self) -> &'static str {
        match self {
            Band::Mm28 => "mm28",
            Band::EBand => "eband",
            Band::Thz => "thz",
            Band::Sub6 => "sub6",
            Band::Mm60 => "mm60",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandParams {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    /// Multi-user interference factor (rho).
    pub mui_factor: f64,
    /// Relative-interference threshold (sigma).
    pub interference_threshold: f64,
    pub path_loss_exponent: f64,
}

impl BandParams {
    fn validate(&self, band: Band) -> Result<(), ScenarioError> {
        let checks: [(&'static str, f64); 6] = [
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("tx_power_w", self.tx_power_w),
            ("mui_factor", self.mui_factor),
            ("interference_threshold", self.interference_threshold),
            ("path_loss_exponent", self.path_loss_exponent),
        ];
        for (field, v) in checks {
            // rho = 0 is a legitimate "no MUI" setting; everything else must be positive.
            let ok = if field == "mui_factor" {
                v.is_finite() && v >= 0.0
            } else {
                v.is_finite() && v > 0.0
            };
            if !ok {
                return Err(ScenarioError::InvalidBandParams { band, field });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub num_slots: usize,
    pub slot_s: f64,
    /// Scheduling-phase duration t0.
    pub sched_phase_s: f64,
    pub noise_psd_w_per_hz: f64,
    /// Transceiver efficiency eta in (0, 1).
    pub efficiency: f64,
    /// Maximum THz link distance.
    pub thz_ref_dist_m: f64,
}

impl FrameConfig {
    pub fn frame_duration(&self) -> f64 {
        frame_duration(self)
    }

    /// Bits a flow must deliver within the frame to meet `qos_bps`.
    pub fn demand_bits(&self, qos_bps: f64) -> f64 {
        qos_bps * self.frame_duration()
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if self.num_slots == 0 {
            return Err(ScenarioError::InvalidFrame("num_slots"));
        }
        if !(self.slot_s.is_finite() && self.slot_s > 0.0) {
            return Err(ScenarioError::InvalidFrame("slot_s"));
        }
        if !(self.sched_phase_s.is_finite() && self.sched_phase_s >= 0.0) {
            return Err(ScenarioError::InvalidFrame("sched_phase_s"));
        }
        if !(self.noise_psd_w_per_hz.is_finite() && self.noise_psd_w_per_hz > 0.0) {
            return Err(ScenarioError::InvalidFrame("noise_psd_w_per_hz"));
        }
        if !(self.efficiency > 0.0 && self.efficiency < 1.0) {
            return Err(ScenarioError::InvalidFrame("efficiency"));
        }
        if !(self.thz_ref_dist_m.is_finite() && self.thz_ref_dist_m > 0.0) {
            return Err(ScenarioError::InvalidFrame("thz_ref_dist_m"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Antennas {
    pub sectored: SectoredAntenna,
    pub cassegrain: CassegrainAntenna,
}

/// Dense table of sampled directivity-gain products, indexed by
/// (interferer, victim). Diagonal entries are unused and stored as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainTable {
    flows: usize,
    gains: Vec<f64>,
}

impl GainTable {
    /// `gains` is row-major by interferer: `gains[j * flows + i]` is the gain
    /// product for interferer `j` and victim `i`.
    pub fn from_dense(flows: usize, gains: Vec<f64>) -> Self {
        assert_eq!(gains.len(), flows * flows, "gain table must be square");
        GainTable { flows, gains }
    }

    /// Fills every off-diagonal pair with the same product.
    pub fn uniform(flows: usize, gain: f64) -> Self {
        let mut gains = vec![gain; flows * flows];
        for k in 0..flows {
            gains[k * flows + k] = 0.0;
        }
        GainTable { flows, gains }
    }

    pub fn num_flows(&self) -> usize {
        self.flows
    }

    pub fn gain(&self, interferer: FlowId, victim: FlowId) -> f64 {
        self.gains[interferer.0 * self.flows + victim.0]
    }

    pub fn set(&mut self, interferer: FlowId, victim: FlowId, gain: f64) {
        self.gains[interferer.0 * self.flows + victim.0] = gain;
    }
}

/// Everything needed to build a [`Scenario`]. Public so callers can assemble
/// fixtures by hand; validation happens in [`Scenario::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParts {
    pub area_m: f64,
    pub stations: Vec<BaseStation>,
    pub flows: Vec<Flow>,
    pub frame: FrameConfig,
    pub bands: BTreeMap<Band, BandParams>,
    pub antennas: Antennas,
    pub interferer_gains: GainTable,
    pub seed: u64,
}

/// A validated, immutable scheduling problem.
///
/// Station and flow ids equal their index, positions are pairwise distinct and
/// inside the arena, so every distance between distinct stations is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    parts: ScenarioParts,
}

impl Scenario {
    pub fn new(parts: ScenarioParts) -> Result<Self, ScenarioError> {
        let ScenarioParts {
            area_m,
            stations,
            flows,
            frame,
            bands,
            antennas,
            interferer_gains,
            ..
        } = &parts;

        for (index, s) in stations.iter().enumerate() {
            if s.id.0 != index {
                return Err(ScenarioError::StationIdMismatch { index, id: s.id });
            }
            let inside = |v: f64| v.is_finite() && (0.0..=*area_m).contains(&v);
            if !inside(s.x) || !inside(s.y) {
                return Err(ScenarioError::StationOutOfArena(s.id));
            }
        }
        for (a, sa) in stations.iter().enumerate() {
            for sb in &stations[a + 1..] {
                if sa.x == sb.x && sa.y == sb.y {
                    return Err(ScenarioError::CoincidentStations(sa.id, sb.id));
                }
            }
        }
        for (index, f) in flows.iter().enumerate() {
            if f.id.0 != index {
                return Err(ScenarioError::FlowIdMismatch { index, id: f.id });
            }
            for station in f.endpoints() {
                if station.0 >= stations.len() {
                    return Err(ScenarioError::UnknownStation {
                        flow: f.id,
                        station,
                    });
                }
            }
            if f.src == f.dst {
                return Err(ScenarioError::SelfLoop(f.id));
            }
            if !(f.qos_bps.is_finite() && f.qos_bps > 0.0) {
                return Err(ScenarioError::InvalidQos(f.id));
            }
        }
        frame.validate()?;
        for (band, p) in bands {
            p.validate(*band)?;
        }
        antennas.sectored.validate()?;
        antennas.cassegrain.validate()?;
        if interferer_gains.num_flows() != flows.len() {
            return Err(ScenarioError::GainTableSize {
                expected: flows.len(),
                got: interferer_gains.num_flows(),
            });
        }
        Ok(Scenario { parts })
    }

    pub fn parts(&self) -> &ScenarioParts {
        &self.parts
    }

    pub fn into_parts(self) -> ScenarioParts {
        self.parts
    }

    pub fn area_m(&self) -> f64 {
        self.parts.area_m
    }

    pub fn stations(&self) -> &[BaseStation] {
        &self.parts.stations
    }

    pub fn flows(&self) -> &[Flow] {
        &self.parts.flows
    }

    pub fn flow(&self, id: FlowId) -> &Flow {
        &self.parts.flows[id.0]
    }

    pub fn station(&self, id: StationId) -> &BaseStation {
        &self.parts.stations[id.0]
    }

    pub fn frame(&self) -> &FrameConfig {
        &self.parts.frame
    }

    pub fn antennas(&self) -> &Antennas {
        &self.parts.antennas
    }

    pub fn seed(&self) -> u64 {
        self.parts.seed
    }

    pub fn interferer_gains(&self) -> &GainTable {
        &self.parts.interferer_gains
    }

    /// Parameters for `band`. Panics when the scenario does not carry the band,
    /// which is a caller bug (schemes only use bands they were configured with).
    pub fn band(&self, band: Band) -> &BandParams {
        self.parts
            .bands
            .get(&band)
            .unwrap_or_else(|| panic!("scenario has no parameters for band {band}"))
    }

    pub fn has_band(&self, band: Band) -> bool {
        self.parts.bands.contains_key(&band)
    }

    /// Transmitter-receiver distance of a flow.
    pub fn link_distance(&self, id: FlowId) -> f64 {
        let f = self.flow(id);
        distance(self.station(f.src), self.station(f.dst))
    }
}

pub fn distance(a: &BaseStation, b: &BaseStation) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Two flows are adjacent when they share any endpoint station.
pub fn adjacent(i: &Flow, j: &Flow) -> bool {
    i.src == j.src || i.src == j.dst || i.dst == j.src || i.dst == j.dst
}

/// Scheduling phase plus all transmission slots.
pub fn frame_duration(frame: &FrameConfig) -> f64 {
    frame.sched_phase_s + frame.num_slots as f64 * frame.slot_s
}

/// Frame-averaged throughput from per-slot rates (zero in idle slots).
pub fn throughput(rates: &[f64], frame: &FrameConfig) -> f64 {
    let delivered: f64 = rates.iter().map(|r| r * frame.slot_s).sum();
    delivered / frame_duration(frame)
}

/// One cell of the activation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Cell {
    #[default]
    Idle,
    Active(Band),
}

impl Cell {
    pub fn is_active(self) -> bool {
        matches!(self, Cell::Active(_))
    }
}

/// Flows x slots activation grid plus the band fixed for each flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleMatrix {
    num_flows: usize,
    num_slots: usize,
    cells: Vec<Cell>,
    per_flow_band: Vec<Option<Band>>,
}

impl ScheduleMatrix {
    pub fn new(num_slots: usize, per_flow_band: Vec<Option<Band>>) -> Self {
        let num_flows = per_flow_band.len();
        ScheduleMatrix {
            num_flows,
            num_slots,
            cells: vec![Cell::Idle; num_flows * num_slots],
            per_flow_band,
        }
    }

    pub fn num_flows(&self) -> usize {
        self.num_flows
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn band_of(&self, flow: FlowId) -> Option<Band> {
        self.per_flow_band[flow.0]
    }

    pub fn per_flow_band(&self) -> &[Option<Band>] {
        &self.per_flow_band
    }

    pub fn get(&self, flow: FlowId, slot: usize) -> Cell {
        self.cells[flow.0 * self.num_slots + slot]
    }

    /// Marks `flow` active in `slot` on its assigned band.
    ///
    /// Panics if the flow has no band; only scheduled flows transmit.
    pub fn activate(&mut self, flow: FlowId, slot: usize) {
        let band = self.per_flow_band[flow.0]
            .unwrap_or_else(|| panic!("flow {flow} has no band assignment"));
        self.cells[flow.0 * self.num_slots + slot] = Cell::Active(band);
    }

    /// Writes a raw cell, bypassing the per-flow band. Used to construct
    /// invalid matrices for validator tests.
    pub fn set_raw(&mut self, flow: FlowId, slot: usize, cell: Cell) {
        self.cells[flow.0 * self.num_slots + slot] = cell;
    }

    pub fn row(&self, flow: FlowId) -> &[Cell] {
        let start = flow.0 * self.num_slots;
        &self.cells[start..start + self.num_slots]
    }

    /// Flows active in `slot`, in ascending id order.
    pub fn active_in_slot(&self, slot: usize) -> impl Iterator<Item = FlowId> + '_ {
        (0..self.num_flows)
            .filter(move |&f| self.cells[f * self.num_slots + slot].is_active())
            .map(FlowId)
    }

    /// First and last active slot of a flow, if it ever transmits.
    pub fn active_span(&self, flow: FlowId) -> Option<(usize, usize)> {
        let row = self.row(flow);
        let first = row.iter().position(|c| c.is_active())?;
        let last = row.iter().rposition(|c| c.is_active())?;
        Some((first, last))
    }

    pub fn active_count(&self, flow: FlowId) -> usize {
        self.row(flow).iter().filter(|c| c.is_active()).count()
    }
}

/// Per-flow result of one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOutcome {
    pub flow: FlowId,
    pub achieved_throughput_bps: f64,
    pub completed: bool,
    /// 0-based slot in which the residual demand reached zero.
    pub completion_slot: Option<usize>,
}

/// Output of any scheduling scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleResult {
    pub matrix: ScheduleMatrix,
    pub outcomes: Vec<FlowOutcome>,
}

impl ScheduleResult {
    pub fn completed_count(&self) -> usize {
        self.outcomes.iter().filter(|o| o.completed).count()
    }
}
