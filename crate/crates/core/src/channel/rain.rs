//! ITU-R P.838-3 rain specific attenuation.
//!
//! Coefficients live in `data/p838-3.toml` and are parsed once on first use.

use std::sync::OnceLock;

use serde::Deserialize;

use super::ChannelError;

static COEFFICIENT_TABLE: &str = include_str!("../../data/p838-3.toml");

#[derive(Debug, Deserialize)]
struct Regression {
    terms: Vec<[f64; 3]>,
    m: f64,
    c: f64,
}

impl Regression {
    fn evaluate(&self, log_f: f64) -> f64 {
        self.terms
            .iter()
            .map(|[a, b, c]| a * (-((log_f - b) / c).powi(2)).exp())
            .sum::<f64>()
            + self.m * log_f
            + self.c
    }
}

#[derive(Debug, Deserialize)]
struct RainCoefficients {
    version: String,
    min_frequency_ghz: f64,
    max_frequency_ghz: f64,
    k_h: Regression,
    k_v: Regression,
    alpha_h: Regression,
    alpha_v: Regression,
}

fn table() -> &'static RainCoefficients {
    static TABLE: OnceLock<RainCoefficients> = OnceLock::new();
    TABLE.get_or_init(|| toml::from_str(COEFFICIENT_TABLE).expect("embedded P.838 table parses"))
}

/// Version string of the embedded coefficient table.
pub fn coefficient_table_version() -> &'static str {
    &table().version
}

/// Path geometry for the rain model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RainGeometry {
    /// Path elevation angle, degrees.
    pub elevation_deg: f64,
    /// Polarization tilt relative to horizontal, degrees (0 = horizontal, 90 = vertical).
    pub polarization_tilt_deg: f64,
}

impl Default for RainGeometry {
    fn default() -> Self {
        Self {
            elevation_deg: 0.0,
            polarization_tilt_deg: 0.0,
        }
    }
}

/// Power-law coefficients `(k, α)` of `γ = k·R^α` at `frequency_ghz`.
pub fn rain_coefficients(
    frequency_ghz: f64,
    geometry: RainGeometry,
) -> Result<(f64, f64), ChannelError> {
    let t = table();
    if !(frequency_ghz >= t.min_frequency_ghz && frequency_ghz <= t.max_frequency_ghz) {
        return Err(ChannelError::FrequencyOutOfModelRange {
            model: "rain (P.838-3)",
            frequency_ghz,
            min_ghz: t.min_frequency_ghz,
            max_ghz: t.max_frequency_ghz,
        });
    }
    let log_f = frequency_ghz.log10();
    let k_h = 10f64.powf(t.k_h.evaluate(log_f));
    let k_v = 10f64.powf(t.k_v.evaluate(log_f));
    let a_h = t.alpha_h.evaluate(log_f);
    let a_v = t.alpha_v.evaluate(log_f);

    let cos_el = geometry.elevation_deg.to_radians().cos();
    let mix = cos_el * cos_el * (2.0 * geometry.polarization_tilt_deg.to_radians()).cos();
    let k = 0.5 * (k_h + k_v + (k_h - k_v) * mix);
    let alpha = (k_h * a_h + k_v * a_v + (k_h * a_h - k_v * a_v) * mix) / (2.0 * k);
    Ok((k, alpha))
}

/// Specific attenuation in dB/km for rain rate `rain_rate_mm_h`.
pub fn rain_attenuation_with_geometry(
    frequency_ghz: f64,
    rain_rate_mm_h: f64,
    geometry: RainGeometry,
) -> Result<f64, ChannelError> {
    if !(rain_rate_mm_h >= 0.0) || !rain_rate_mm_h.is_finite() {
        return Err(ChannelError::InvalidWeather(format!(
            "rain rate must be finite and non-negative, got {rain_rate_mm_h}"
        )));
    }
    let (k, alpha) = rain_coefficients(frequency_ghz, geometry)?;
    Ok(k * rain_rate_mm_h.powf(alpha))
}

/// Horizontal polarization, zero elevation.
pub fn rain_attenuation_db_per_km(
    frequency_ghz: f64,
    rain_rate_mm_h: f64,
) -> Result<f64, ChannelError> {
    rain_attenuation_with_geometry(frequency_ghz, rain_rate_mm_h, RainGeometry::default())
}
