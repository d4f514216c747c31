//! Unit conversions and physical constants.
//!
//! Everything inside the crate is SI linear (W, Hz, m, s, bit/s). Logarithmic
//! units only appear at configuration and report boundaries.

pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watt(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

pub fn watt_to_dbm(w: f64) -> f64 {
    linear_to_db(w * 1e3)
}

/// Noise density given in dBm/MHz, converted to W/Hz.
pub fn dbm_per_mhz_to_w_per_hz(dbm_per_mhz: f64) -> f64 {
    dbm_to_watt(dbm_per_mhz) / 1e6
}

pub fn wavelength(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_hz
}
