//! Line-by-line molecular absorption.

use super::{AtmosphereState, ChannelError};
use crate::spectroscopy::{LineCatalog, SpectralLine, GHZ_PER_WAVENUMBER};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// HITRAN reference pressure (1 atm), Pa.
pub const REFERENCE_PRESSURE_PA: f64 = 101_325.0;
/// HITRAN reference temperature, K.
pub const REFERENCE_TEMPERATURE_K: f64 = 296.0;

/// Pressure-broadened line profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LineShape {
    /// Van Vleck–Weisskopf with the low-frequency `(f/f0)²` scaling.
    #[default]
    VanVleckWeisskopf,
    Lorentzian,
}

impl LineShape {
    /// Profile value in 1/GHz at `f` for a line at `f0` with HWHM `gamma` (all GHz).
    pub fn evaluate(self, f: f64, f0: f64, gamma: f64) -> f64 {
        let lorentz = |delta: f64| gamma / (delta * delta + gamma * gamma);
        match self {
            Self::VanVleckWeisskopf => {
                if f0 == 0.0 {
                    return 0.0;
                }
                let ratio = f / f0;
                ratio * ratio / std::f64::consts::PI * (lorentz(f - f0) + lorentz(f + f0))
            }
            Self::Lorentzian => lorentz(f - f0) / std::f64::consts::PI,
        }
    }
}

/// Absorber number density `q·p/(k_B·T)`, molecules per m³.
pub fn absorber_number_density(atmosphere: &AtmosphereState) -> f64 {
    atmosphere.water_mixing_ratio * atmosphere.pressure_pa / (BOLTZMANN * atmosphere.temperature_k)
}

/// Collision-broadened HWHM of `line` in GHz.
pub fn line_halfwidth_ghz(line: &SpectralLine, atmosphere: &AtmosphereState) -> f64 {
    let q = atmosphere.water_mixing_ratio;
    let mixed = line.air_halfwidth * (1.0 - q) + line.self_halfwidth * q;
    mixed
        * (atmosphere.pressure_pa / REFERENCE_PRESSURE_PA)
        * (REFERENCE_TEMPERATURE_K / atmosphere.temperature_k).powf(line.temperature_exponent)
        * GHZ_PER_WAVENUMBER
}

/// Absorption coefficient in 1/m at `frequency_ghz`.
///
/// Intensities are used at their 296 K reference value; no partition-function
/// rescaling is applied. There is no far-wing cutoff.
pub fn absorption_coefficient_with_shape(
    frequency_ghz: f64,
    catalog: &LineCatalog,
    atmosphere: &AtmosphereState,
    shape: LineShape,
) -> Result<f64, ChannelError> {
    atmosphere.validate()?;
    if !(frequency_ghz > 0.0) || !frequency_ghz.is_finite() {
        return Err(ChannelError::NonPositiveInput {
            name: "frequency",
            value: frequency_ghz,
        });
    }
    let density = absorber_number_density(atmosphere);
    if density == 0.0 {
        return Ok(0.0);
    }
    // S [cm/molecule] · F [1/cm⁻¹] = cm², and n is per m³: 1e-4 m²/cm².
    let sum: f64 = catalog
        .lines()
        .iter()
        .map(|line| {
            let gamma = line_halfwidth_ghz(line, atmosphere);
            let profile = shape.evaluate(frequency_ghz, line.center_frequency_ghz, gamma);
            line.intensity * profile * GHZ_PER_WAVENUMBER
        })
        .sum();
    Ok(density * sum * 1e-4)
}

/// Van Vleck–Weisskopf absorption coefficient in 1/m.
pub fn absorption_coefficient(
    frequency_ghz: f64,
    catalog: &LineCatalog,
    atmosphere: &AtmosphereState,
) -> Result<f64, ChannelError> {
    absorption_coefficient_with_shape(frequency_ghz, catalog, atmosphere, LineShape::default())
}

/// Beer–Lambert attenuation `10·log10(e)·k·d` in dB.
pub fn beer_lambert_db(coefficient_per_m: f64, distance_m: f64) -> f64 {
    10.0 * std::f64::consts::LOG10_E * coefficient_per_m * distance_m
}
