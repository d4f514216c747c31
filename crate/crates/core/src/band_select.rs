//! Band selection: decides which band every flow uses for the frame.
//!
//! Flows are visited in ascending id order. Distance to the THz reference
//! range and the interference-free throughput ceiling of each band decide
//! which bands are usable; among usable bands the comparison parameter (the
//! slot-time already committed to adjacent flows in that band) balances load.

use crate::model::{adjacent, Band, FlowId, Scenario};
use crate::radio::interference_free_rate;

/// Per-flow band decision. `None` means the flow was dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandAssignment {
    bands: Vec<Option<Band>>,
}

impl BandAssignment {
    pub fn from_bands(bands: Vec<Option<Band>>) -> Self {
        BandAssignment { bands }
    }

    /// Every flow on `band`.
    pub fn uniform(num_flows: usize, band: Band) -> Self {
        BandAssignment {
            bands: vec![Some(band); num_flows],
        }
    }

    pub fn bands(&self) -> &[Option<Band>] {
        &self.bands
    }

    pub fn band_of(&self, flow: FlowId) -> Option<Band> {
        self.bands[flow.0]
    }

    pub fn members(&self, band: Band) -> Vec<FlowId> {
        self.ids(|b| b == Some(band))
    }

    pub fn dropped(&self) -> Vec<FlowId> {
        self.ids(|b| b.is_none())
    }

    pub fn assigned_count(&self) -> usize {
        self.bands.iter().filter(|b| b.is_some()).count()
    }

    fn ids(&self, pred: impl Fn(Option<Band>) -> bool) -> Vec<FlowId> {
        self.bands
            .iter()
            .enumerate()
            .filter(|(_, &b)| pred(b))
            .map(|(k, _)| FlowId(k))
            .collect()
    }
}

/// Fraction of a frame spent transmitting, `M dt / (t0 + M dt)`.
fn transmit_fraction(scenario: &Scenario) -> f64 {
    let f = scenario.frame();
    f.num_slots as f64 * f.slot_s / f.frame_duration()
}

/// Highest throughput `flow` could reach on `band` over one frame, ignoring
/// interference.
pub fn max_band_throughput(scenario: &Scenario, flow: FlowId, band: Band) -> f64 {
    transmit_fraction(scenario) * interference_free_rate(scenario, flow, band)
}

/// Sum of `q / R` over flows already placed on `band` that share a station
/// with `flow`, with interference-free rates.
pub fn comparison_param(
    scenario: &Scenario,
    flow: FlowId,
    band: Band,
    assignment: &BandAssignment,
) -> f64 {
    let f = scenario.flow(flow);
    assignment
        .members(band)
        .into_iter()
        .filter(|&k| k != flow && adjacent(f, scenario.flow(k)))
        .map(|k| scenario.flow(k).qos_bps / interference_free_rate(scenario, k, band))
        .sum()
}

/// Interference-free rates per flow for a fixed band list, computed once.
struct RateTable<'a> {
    bands: &'a [Band],
    rates: Vec<f64>,
}

impl<'a> RateTable<'a> {
    fn new(scenario: &Scenario, bands: &'a [Band]) -> Self {
        let rates = scenario
            .flows()
            .iter()
            .flat_map(|f| {
                bands
                    .iter()
                    .map(move |&b| interference_free_rate(scenario, f.id, b))
            })
            .collect();
        RateTable { bands, rates }
    }

    fn rate(&self, flow: FlowId, band: Band) -> f64 {
        let k = self
            .bands
            .iter()
            .position(|&b| b == band)
            .expect("band in table");
        self.rates[flow.0 * self.bands.len() + k]
    }
}

/// Incremental form of [`comparison_param`] over the partially built sets.
struct LoadTracker<'a> {
    scenario: &'a Scenario,
    table: RateTable<'a>,
    placed: Vec<Option<Band>>,
}

impl LoadTracker<'_> {
    fn comparison(&self, flow: FlowId, band: Band) -> f64 {
        let f = self.scenario.flow(flow);
        self.placed
            .iter()
            .enumerate()
            .filter(|(k, b)| {
                **b == Some(band) && *k != flow.0 && adjacent(f, self.scenario.flow(FlowId(*k)))
            })
            .map(|(k, _)| self.scenario.flow(FlowId(k)).qos_bps / self.table.rate(FlowId(k), band))
            .sum()
    }
}

/// Triple-band selection over {28 GHz, E-band, THz}.
///
/// Drops flows that exceed the E-band ceiling beyond the THz range, or the
/// THz ceiling at any range. Beyond the range the choice is 28 GHz vs E-band
/// (ties to E-band); within range the THz band is forced when only it fits,
/// THz vs E-band is decided with ties to THz, and otherwise the least loaded
/// of the three wins with ties resolved 28 GHz, then E-band, then THz.
pub fn select_bands(scenario: &Scenario) -> BandAssignment {
    let bands = &Band::TRIPLE;
    let frac = transmit_fraction(scenario);
    let d_ref = scenario.frame().thz_ref_dist_m;
    let mut load = LoadTracker {
        scenario,
        table: RateTable::new(scenario, bands),
        placed: vec![None; scenario.flows().len()],
    };

    for f in scenario.flows() {
        let id = f.id;
        let q = f.qos_bps;
        let mq = |b: Band| frac * load.table.rate(id, b);
        let (mq_mm, mq_me, mq_thz) = (mq(Band::Mm28), mq(Band::EBand), mq(Band::Thz));
        let far = scenario.link_distance(id) > d_ref;

        if (far && q > mq_me) || q > mq_thz {
            continue;
        }

        let c = |b: Band| load.comparison(id, b);
        let choice = if far {
            if q > mq_mm {
                Band::EBand
            } else if c(Band::EBand) > c(Band::Mm28) {
                Band::Mm28
            } else {
                Band::EBand
            }
        } else if q > mq_me {
            Band::Thz
        } else if q > mq_mm {
            if c(Band::EBand) >= c(Band::Thz) {
                Band::Thz
            } else {
                Band::EBand
            }
        } else {
            least_loaded(bands, c)
        };
        load.placed[id.0] = Some(choice);
    }

    BandAssignment { bands: load.placed }
}

/// Ceiling-only selection over an ordered band list: a flow may use any band
/// whose ceiling covers its demand, and picks the least loaded one with ties
/// going to the earlier band. Flows no band can carry are dropped.
pub fn select_bands_by_ceiling(scenario: &Scenario, bands: &[Band]) -> BandAssignment {
    let frac = transmit_fraction(scenario);
    let mut load = LoadTracker {
        scenario,
        table: RateTable::new(scenario, bands),
        placed: vec![None; scenario.flows().len()],
    };
    for f in scenario.flows() {
        let feasible: Vec<Band> = bands
            .iter()
            .copied()
            .filter(|&b| f.qos_bps <= frac * load.table.rate(f.id, b))
            .collect();
        if feasible.is_empty() {
            continue;
        }
        let choice = least_loaded(&feasible, |b| load.comparison(f.id, b));
        load.placed[f.id.0] = Some(choice);
    }
    BandAssignment { bands: load.placed }
}

fn least_loaded(bands: &[Band], cost: impl Fn(Band) -> f64) -> Band {
    let mut best = bands[0];
    let mut best_cost = cost(best);
    for &b in &bands[1..] {
        let c = cost(b);
        if c < best_cost {
            best = b;
            best_cost = c;
        }
    }
    best
}
