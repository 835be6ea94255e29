//! Line-of-sight propagation losses: free-space spreading, water-vapour
//! absorption, rain and fog.
//!
//! Weather is assumed uniform along the path, so rain and fog losses scale
//! linearly with distance. Absorption uses the Beer–Lambert law over the
//! line-by-line coefficient from [`absorption`].

pub mod absorption;
pub mod fog;
pub mod rain;

use rayon::prelude::*;
use thiserror::Error;

use crate::spectroscopy::LineCatalog;

pub use absorption::{absorption_coefficient, beer_lambert_db, LineShape};
pub use fog::{fog_attenuation_db_per_km, FogAttenuation};
pub use rain::{rain_attenuation_db_per_km, RainGeometry};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid atmosphere: {0}")]
    InvalidAtmosphere(String),
    #[error("invalid weather: {0}")]
    InvalidWeather(String),
    #[error("{name} must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
    #[error("{model} model is defined for {min_ghz}-{max_ghz} GHz, got {frequency_ghz} GHz")]
    FrequencyOutOfModelRange {
        model: &'static str,
        frequency_ghz: f64,
        min_ghz: f64,
        max_ghz: f64,
    },
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
}

/// Gas state along the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphereState {
    pub pressure_pa: f64,
    pub temperature_k: f64,
    /// Water-vapour volume mixing ratio, `0 ≤ q < 1`.
    pub water_mixing_ratio: f64,
}

impl Default for AtmosphereState {
    /// HITRAN reference conditions with `q = 0.01`.
    fn default() -> Self {
        Self {
            pressure_pa: absorption::REFERENCE_PRESSURE_PA,
            temperature_k: absorption::REFERENCE_TEMPERATURE_K,
            water_mixing_ratio: 0.01,
        }
    }
}

impl AtmosphereState {
    pub fn with_mixing_ratio(self, q: f64) -> Self {
        Self {
            water_mixing_ratio: q,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.pressure_pa > 0.0) || !self.pressure_pa.is_finite() {
            return Err(ChannelError::InvalidAtmosphere(format!(
                "pressure must be positive, got {} Pa",
                self.pressure_pa
            )));
        }
        if !(self.temperature_k > 0.0) || !self.temperature_k.is_finite() {
            return Err(ChannelError::InvalidAtmosphere(format!(
                "temperature must be positive, got {} K",
                self.temperature_k
            )));
        }
        if !(0.0..1.0).contains(&self.water_mixing_ratio) {
            return Err(ChannelError::InvalidAtmosphere(format!(
                "water mixing ratio must lie in [0, 1), got {}",
                self.water_mixing_ratio
            )));
        }
        Ok(())
    }
}

/// Rain and fog along the path.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WeatherState {
    pub rain_rate_mm_h: f64,
    pub fog_liquid_water_g_m3: f64,
}

impl WeatherState {
    pub const CLEAR: Self = Self {
        rain_rate_mm_h: 0.0,
        fog_liquid_water_g_m3: 0.0,
    };

    /// Heavy rain (50 mm/h) with dense fog (0.5 g/m³).
    pub const HARSH: Self = Self {
        rain_rate_mm_h: 50.0,
        fog_liquid_water_g_m3: 0.5,
    };

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.rain_rate_mm_h >= 0.0) || !self.rain_rate_mm_h.is_finite() {
            return Err(ChannelError::InvalidWeather(format!(
                "rain rate must be non-negative, got {}",
                self.rain_rate_mm_h
            )));
        }
        if !(self.fog_liquid_water_g_m3 >= 0.0) || !self.fog_liquid_water_g_m3.is_finite() {
            return Err(ChannelError::InvalidWeather(format!(
                "fog liquid water must be non-negative, got {}",
                self.fog_liquid_water_g_m3
            )));
        }
        Ok(())
    }
}

/// Per-mechanism losses at one frequency and distance, all in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub frequency_ghz: f64,
    pub distance_m: f64,
    pub fspl_db: f64,
    pub absorption_db: f64,
    pub rain_db: f64,
    pub fog_db: f64,
    pub total_db: f64,
    /// The fog model was evaluated above its stated validity range.
    pub fog_extrapolated: bool,
}

impl LossBreakdown {
    /// Absorption normalised to dB/km.
    pub fn absorption_db_per_km(&self) -> f64 {
        self.absorption_db * 1000.0 / self.distance_m
    }
}

/// Loss breakdowns on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSpectrum {
    pub distance_m: f64,
    pub atmosphere: AtmosphereState,
    pub weather: WeatherState,
    pub points: Vec<LossBreakdown>,
}

impl LossSpectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.frequency_ghz)
    }

    /// Grid spacing, or `None` with fewer than two points.
    pub fn step_ghz(&self) -> Option<f64> {
        match self.points.as_slice() {
            [a, b, ..] => Some(b.frequency_ghz - a.frequency_ghz),
            _ => None,
        }
    }
}

/// Free-space path loss `20·log10(4π·d·f/c)` in dB.
pub fn fspl_db(frequency_ghz: f64, distance_m: f64) -> Result<f64, ChannelError> {
    if !(frequency_ghz > 0.0) || !frequency_ghz.is_finite() {
        return Err(ChannelError::NonPositiveInput {
            name: "frequency",
            value: frequency_ghz,
        });
    }
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(ChannelError::NonPositiveInput {
            name: "distance",
            value: distance_m,
        });
    }
    let x = 4.0 * std::f64::consts::PI * distance_m * frequency_ghz * 1e9 / SPEED_OF_LIGHT;
    Ok(20.0 * x.log10())
}

/// Regular grid `lo, lo+step, …, ≤ hi`, each point computed as `lo + i·step`.
pub fn frequency_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, ChannelError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(ChannelError::InvalidGrid(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(ChannelError::InvalidGrid(format!(
            "band [{lo}, {hi}] is empty"
        )));
    }
    // tolerate rounding in (hi - lo) / step
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Model options shared by [`LossModel::total_loss`] and [`LossModel::loss_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossModel {
    pub line_shape: LineShape,
    pub rain_geometry: RainGeometry,
}

impl LossModel {
    pub fn total_loss(
        &self,
        frequency_ghz: f64,
        distance_m: f64,
        atmosphere: &AtmosphereState,
        weather: &WeatherState,
        catalog: &LineCatalog,
    ) -> Result<LossBreakdown, ChannelError> {
        weather.validate()?;
        let fspl = fspl_db(frequency_ghz, distance_m)?;
        let k = absorption::absorption_coefficient_with_shape(
            frequency_ghz,
            catalog,
            atmosphere,
            self.line_shape,
        )?;
        let absorption = beer_lambert_db(k, distance_m);
        let km = distance_m / 1000.0;

        // no rain means no rain model, so clear-sky spectra may extend below 1 GHz
        let rain = if weather.rain_rate_mm_h > 0.0 {
            rain::rain_attenuation_with_geometry(
                frequency_ghz,
                weather.rain_rate_mm_h,
                self.rain_geometry,
            )? * km
        } else {
            0.0
        };
        let fog = fog::fog_attenuation_db_per_km(
            frequency_ghz,
            weather.fog_liquid_water_g_m3,
            atmosphere.temperature_k,
        )?;
        let fog_db = fog.db_per_km * km;

        Ok(LossBreakdown {
            frequency_ghz,
            distance_m,
            fspl_db: fspl,
            absorption_db: absorption,
            rain_db: rain,
            fog_db,
            total_db: fspl + absorption + rain + fog_db,
            fog_extrapolated: fog.extrapolated && weather.fog_liquid_water_g_m3 > 0.0,
        })
    }

    pub fn loss_spectrum(
        &self,
        band: (f64, f64),
        step_ghz: f64,
        distance_m: f64,
        atmosphere: &AtmosphereState,
        weather: &WeatherState,
        catalog: &LineCatalog,
    ) -> Result<LossSpectrum, ChannelError> {
        let grid = frequency_grid(band.0, band.1, step_ghz)?;
        let points = grid
            .par_iter()
            .map(|&f| self.total_loss(f, distance_m, atmosphere, weather, catalog))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LossSpectrum {
            distance_m,
            atmosphere: *atmosphere,
            weather: *weather,
            points,
        })
    }
}

/// All loss components at one frequency and distance, default model options.
pub fn total_loss(
    frequency_ghz: f64,
    distance_m: f64,
    atmosphere: &AtmosphereState,
    weather: &WeatherState,
    catalog: &LineCatalog,
) -> Result<LossBreakdown, ChannelError> {
    LossModel::default().total_loss(frequency_ghz, distance_m, atmosphere, weather, catalog)
}

/// [`total_loss`] on the grid `band.0, band.0 + step, …, ≤ band.1`.
pub fn loss_spectrum(
    band: (f64, f64),
    step_ghz: f64,
    distance_m: f64,
    atmosphere: &AtmosphereState,
    weather: &WeatherState,
    catalog: &LineCatalog,
) -> Result<LossSpectrum, ChannelError> {
    LossModel::default().loss_spectrum(band, step_ghz, distance_m, atmosphere, weather, catalog)
}
