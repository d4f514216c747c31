//! TOML experiment configuration.
//!
//! Every key is optional and falls back to [`ScenarioParams::default`].
//! Unknown keys are rejected.
//!
//! ```toml
//! num_flows = 200
//! num_slots = 2000
//! sigma_thz = 1e-2
//! seeds = [1, 2, 3]
//! schemes = ["triple", "mqis"]
//!
//! [thz]
//! carrier_ghz = 340
//! bandwidth_mhz = 10000
//! tx_power_mw = 20
//! ```

use serde::Deserialize;

use crate::baselines::SchemeKind;
use crate::error::ConfigError;
use crate::experiments::params::ScenarioParams;
use crate::model::Band;

/// Upper bound on requested flows; the gain table is quadratic in this.
pub const MAX_FLOWS: usize = 2000;
/// Upper bound on schedule matrix cells per run.
pub const MAX_CELLS: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: ScenarioParams,
    pub seeds: Vec<u64>,
    pub schemes: Vec<SchemeKind>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBand {
    carrier_ghz: Option<f64>,
    bandwidth_mhz: Option<f64>,
    tx_power_mw: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    area_m: Option<f64>,
    num_stations: Option<usize>,
    num_flows: Option<usize>,
    num_slots: Option<usize>,
    slot_us: Option<f64>,
    sched_phase_us: Option<f64>,
    qos_min_bps: Option<f64>,
    qos_max_bps: Option<f64>,
    thz_ref_dist_m: Option<f64>,
    sigma_mm: Option<f64>,
    sigma_me: Option<f64>,
    sigma_thz: Option<f64>,
    seed: Option<u64>,
    seeds: Option<Vec<u64>>,
    scheme: Option<String>,
    schemes: Option<Vec<String>>,
    mm28: Option<RawBand>,
    eband: Option<RawBand>,
    thz: Option<RawBand>,
    sub6: Option<RawBand>,
    mm60: Option<RawBand>,
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

/// Accepts values in `(0, hi]`.
fn positive(key: &'static str, v: Option<f64>, hi: f64) -> Result<Option<f64>, ConfigError> {
    match v {
        Some(x) if !(x > 0.0 && x <= hi) => {
            Err(invalid(key, format!("must be in (0, {hi}], got {x}")))
        }
        other => Ok(other),
    }
}

fn range_check(
    key: &'static str,
    v: Option<f64>,
    lo: f64,
    hi: f64,
) -> Result<Option<f64>, ConfigError> {
    match v {
        Some(x) if !(x >= lo && x <= hi) => {
            Err(invalid(key, format!("must be in [{lo}, {hi}], got {x}")))
        }
        other => Ok(other),
    }
}

fn non_negative(key: &'static str, v: Option<f64>) -> Result<Option<f64>, ConfigError> {
    match v {
        Some(x) if !(x.is_finite() && x >= 0.0) => {
            Err(invalid(key, format!("must be finite and >= 0, got {x}")))
        }
        other => Ok(other),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let mut p = ScenarioParams::default();

        if let Some(a) = range_check("area_m", raw.area_m, 1.0, 1e6)? {
            p.area_m = a;
        }
        if let Some(n) = raw.num_stations {
            if !(2..=10_000).contains(&n) {
                return Err(invalid("num_stations", "must be in [2, 10000]"));
            }
            p.num_stations = n;
        }
        if let Some(f) = raw.num_flows {
            if f > MAX_FLOWS {
                return Err(invalid("num_flows", format!("at most {MAX_FLOWS}")));
            }
            p.num_flows = f;
        }
        if let Some(m) = raw.num_slots {
            if m == 0 {
                return Err(invalid("num_slots", "must be >= 1"));
            }
            p.frame.num_slots = m;
        }
        if p.num_flows.saturating_mul(p.frame.num_slots) > MAX_CELLS {
            return Err(invalid(
                "num_slots",
                format!("num_flows * num_slots exceeds {MAX_CELLS}"),
            ));
        }
        if let Some(us) = positive("slot_us", raw.slot_us, 1e6)? {
            p.frame.slot_s = us * 1e-6;
        }
        if let Some(us) = range_check("sched_phase_us", raw.sched_phase_us, 0.0, 1e7)? {
            p.frame.sched_phase_s = us * 1e-6;
        }
        if let Some(q) = positive("qos_min_bps", raw.qos_min_bps, 1e13)? {
            p.qos_min_bps = q;
        }
        if let Some(q) = positive("qos_max_bps", raw.qos_max_bps, 1e13)? {
            p.qos_max_bps = q;
        }
        if p.qos_min_bps > p.qos_max_bps {
            return Err(invalid("qos_min_bps", "exceeds qos_max_bps"));
        }
        if let Some(d) = positive("thz_ref_dist_m", raw.thz_ref_dist_m, 1e7)? {
            p.frame.thz_ref_dist_m = d;
        }

        let sigma_mm = non_negative("sigma_mm", raw.sigma_mm)?;
        let sigma_me = non_negative("sigma_me", raw.sigma_me)?;
        let sigma_thz = non_negative("sigma_thz", raw.sigma_thz)?;
        if let Some(s) = sigma_thz {
            p.set_thresholds(s);
        }
        let mut set_sigma = |b: Band, s: Option<f64>| {
            if let (Some(s), Some(bp)) = (s, p.bands.get_mut(&b)) {
                bp.interference_threshold = s;
            }
        };
        set_sigma(Band::Mm28, sigma_mm);
        set_sigma(Band::EBand, sigma_me);

        for (band, key, rb) in [
            (Band::Mm28, "mm28", raw.mm28),
            (Band::EBand, "eband", raw.eband),
            (Band::Thz, "thz", raw.thz),
            (Band::Sub6, "sub6", raw.sub6),
            (Band::Mm60, "mm60", raw.mm60),
        ] {
            let Some(rb) = rb else { continue };
            let bp = p
                .bands
                .get_mut(&band)
                .expect("default params carry every band");
            if let Some(c) = positive(key, rb.carrier_ghz, 1e4)? {
                bp.carrier_hz = c * 1e9;
            }
            if let Some(w) = positive(key, rb.bandwidth_mhz, 1e6)? {
                bp.bandwidth_hz = w * 1e6;
            }
            if let Some(pw) = positive(key, rb.tx_power_mw, 1e6)? {
                bp.tx_power_w = pw * 1e-3;
            }
        }

        let seeds = match (raw.seed, raw.seeds) {
            (Some(_), Some(_)) => return Err(invalid("seeds", "give either seed or seeds")),
            (Some(s), None) => vec![s],
            (None, Some(v)) if v.is_empty() => return Err(invalid("seeds", "empty list")),
            (None, Some(v)) => v,
            (None, None) => vec![1],
        };
        let names = match (raw.scheme, raw.schemes) {
            (Some(_), Some(_)) => return Err(invalid("schemes", "give either scheme or schemes")),
            (Some(s), None) => vec![s],
            (None, Some(v)) if v.is_empty() => return Err(invalid("schemes", "empty list")),
            (None, Some(v)) => v,
            (None, None) => Vec::new(),
        };
        let schemes = if names.is_empty() {
            SchemeKind::ALL.to_vec()
        } else {
            names.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
        };

        Ok(ExperimentConfig {
            params: p,
            seeds,
            schemes,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: ScenarioParams::default(),
            seeds: vec![1],
            schemes: SchemeKind::ALL.to_vec(),
        }
    }
}
