//! Scenario files.
//!
//! A scenario is a TOML document; every section is optional and falls back
//! to the backhaul defaults. Unknown keys are rejected. Dotted `KEY=VALUE`
//! overrides are applied to the parsed document before it is typed, so
//! they obey the same schema.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::arrays::{ElementGain, SubarrayConfig, PENCIL_BEAM_CONSTANT};
use crate::channel::{self, AtmosphereState, WeatherState};
use crate::linkbudget::{AntennaGain, LinkScenario, DEFAULT_CODE_RATE, DEFAULT_TARGET_BER};
use crate::spectroscopy::{self, LineCatalog, SpectroscopyError};
use crate::windows::DEFAULT_WINDOW_THRESHOLD_DB_PER_KM;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("invalid scenario: {0}")]
    Parse(String),
    #[error("invalid override {0:?}: expected KEY=VALUE")]
    Override(String),
    #[error("invalid scenario value: {0}")]
    Invalid(String),
    #[error("catalog file {0} does not exist")]
    MissingCatalog(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    pub carrier_frequency_ghz: f64,
    pub symbol_rate_gbd: f64,
    /// Defaults to the symbol rate.
    pub noise_bandwidth_ghz: Option<f64>,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: Option<f64>,
    pub tx_aperture_diameter_m: Option<f64>,
    pub tx_aperture_efficiency: Option<f64>,
    pub rx_gain_dbi: Option<f64>,
    pub rx_aperture_diameter_m: Option<f64>,
    pub rx_aperture_efficiency: Option<f64>,
    pub noise_figure_db: f64,
    pub implementation_margin_db: f64,
    pub code_rate: f64,
    pub polarizations: u8,
    pub max_qam_order: u32,
    pub target_ber: f64,
}

impl Default for LinkSection {
    fn default() -> Self {
        let b = LinkScenario::backhaul();
        Self {
            carrier_frequency_ghz: b.carrier_frequency_ghz,
            symbol_rate_gbd: b.symbol_rate_gbd,
            noise_bandwidth_ghz: None,
            tx_power_dbm: b.tx_power_dbm,
            tx_gain_dbi: None,
            tx_aperture_diameter_m: None,
            tx_aperture_efficiency: None,
            rx_gain_dbi: None,
            rx_aperture_diameter_m: None,
            rx_aperture_efficiency: None,
            noise_figure_db: b.noise_figure_db,
            implementation_margin_db: b.implementation_margin_db,
            code_rate: DEFAULT_CODE_RATE,
            polarizations: b.polarizations,
            max_qam_order: b.max_qam_order,
            target_ber: DEFAULT_TARGET_BER,
        }
    }
}

const DEFAULT_GAIN_DBI: f64 = 55.0;
const DEFAULT_APERTURE_EFFICIENCY: f64 = 0.8;

fn antenna(
    side: &str,
    gain: Option<f64>,
    diameter: Option<f64>,
    efficiency: Option<f64>,
) -> Result<AntennaGain, ConfigError> {
    match (gain, diameter) {
        (Some(_), Some(_)) => Err(ConfigError::Invalid(format!(
            "{side}: give either a gain or an aperture diameter, not both"
        ))),
        (Some(dbi), None) => {
            if efficiency.is_some() {
                return Err(ConfigError::Invalid(format!(
                    "{side}: aperture efficiency without aperture diameter"
                )));
            }
            Ok(AntennaGain::Fixed { dbi })
        }
        (None, Some(diameter_m)) => Ok(AntennaGain::Aperture {
            diameter_m,
            efficiency: efficiency.unwrap_or(DEFAULT_APERTURE_EFFICIENCY),
        }),
        (None, None) => Ok(AntennaGain::Fixed {
            dbi: DEFAULT_GAIN_DBI,
        }),
    }
}

impl LinkSection {
    pub fn scenario(&self) -> Result<LinkScenario, ConfigError> {
        let s = LinkScenario {
            carrier_frequency_ghz: self.carrier_frequency_ghz,
            symbol_rate_gbd: self.symbol_rate_gbd,
            noise_bandwidth_ghz: self.noise_bandwidth_ghz.unwrap_or(self.symbol_rate_gbd),
            tx_power_dbm: self.tx_power_dbm,
            tx_antenna: antenna(
                "link.tx",
                self.tx_gain_dbi,
                self.tx_aperture_diameter_m,
                self.tx_aperture_efficiency,
            )?,
            rx_antenna: antenna(
                "link.rx",
                self.rx_gain_dbi,
                self.rx_aperture_diameter_m,
                self.rx_aperture_efficiency,
            )?,
            noise_figure_db: self.noise_figure_db,
            implementation_margin_db: self.implementation_margin_db,
            code_rate: self.code_rate,
            polarizations: self.polarizations,
            max_qam_order: self.max_qam_order,
            target_ber: self.target_ber,
        };
        s.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtmosphereSection {
    pub pressure_pa: f64,
    pub temperature_k: f64,
    pub water_mixing_ratio: f64,
}

impl Default for AtmosphereSection {
    fn default() -> Self {
        let a = AtmosphereState::default();
        Self {
            pressure_pa: a.pressure_pa,
            temperature_k: a.temperature_k,
            water_mixing_ratio: a.water_mixing_ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeatherSection {
    pub rain_rate_mm_h: f64,
    pub fog_liquid_water_g_m3: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatalogSection {
    /// `.par` file; the bundled water catalog when absent.
    pub path: Option<PathBuf>,
    pub molecule: u8,
    pub band_ghz: [f64; 2],
}

impl Default for CatalogSection {
    fn default() -> Self {
        Self {
            path: None,
            molecule: spectroscopy::WATER,
            band_ghz: [0.0, 1100.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub f_lo_ghz: f64,
    pub f_hi_ghz: f64,
    pub step_ghz: f64,
    pub distance_m: f64,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            f_lo_ghz: 100.0,
            f_hi_ghz: 1000.0,
            step_ghz: 1.0,
            distance_m: 1000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateSection {
    pub distances_m: Vec<f64>,
}

impl Default for RateSection {
    fn default() -> Self {
        Self {
            distances_m: vec![
                1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0,
                10000.0,
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubarraySection {
    pub n_elements: Vec<u32>,
    pub opening_angles_deg: Vec<f64>,
    pub per_element_power_dbm: f64,
    pub link_distance_m: f64,
    pub pencil_beam_constant: f64,
}

impl Default for SubarraySection {
    fn default() -> Self {
        Self {
            n_elements: vec![4, 8, 16],
            opening_angles_deg: (2..=20).map(|i| f64::from(i) * 2.5).collect(),
            per_element_power_dbm: 0.0,
            link_distance_m: 10.0,
            pencil_beam_constant: PENCIL_BEAM_CONSTANT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowsSection {
    pub threshold_db_per_km: f64,
    /// Distance at which usable widths are reported.
    pub distance_m: f64,
}

impl Default for WindowsSection {
    fn default() -> Self {
        Self {
            threshold_db_per_km: DEFAULT_WINDOW_THRESHOLD_DB_PER_KM,
            distance_m: 1000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

/// One scenario document driving every command.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub link: LinkSection,
    pub atmosphere: AtmosphereSection,
    pub weather: WeatherSection,
    pub catalog: CatalogSection,
    pub spectrum: SpectrumSection,
    pub rate: RateSection,
    pub subarray: SubarraySection,
    pub windows: WindowsSection,
    pub output: OutputSection,
    /// Directory relative catalog paths resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn parse_override(raw: &str) -> Result<(Vec<String>, toml::Value), ConfigError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| ConfigError::Override(raw.to_string()))?;
    let path: Vec<String> = key.trim().split('.').map(str::to_string).collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::Override(raw.to_string()));
    }
    let value = value.trim();
    // typed TOML literal if it parses, otherwise a bare string
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    Ok((path, parsed))
}

fn apply_override(
    doc: &mut toml::Table,
    path: &[String],
    value: toml::Value,
) -> Result<(), ConfigError> {
    let (last, parents) = path.split_last().expect("non-empty key");
    let mut table = doc;
    for part in parents {
        let entry = table
            .entry(part.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Override(format!("{} is not a section", path.join("."))))?;
    }
    table.insert(last.clone(), value);
    Ok(())
}

impl ScenarioConfig {
    /// Parses a scenario document and applies `KEY=VALUE` overrides.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut doc: toml::Table =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        for raw in overrides {
            let (path, value) = parse_override(raw)?;
            apply_override(&mut doc, &path, value)?;
        }
        toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut config = Self::from_toml_str(&text, overrides)?;
        config.base_dir = path.parent().map(Path::to_path_buf);
        Ok(config)
    }

    pub fn scenario(&self) -> Result<LinkScenario, ConfigError> {
        self.link.scenario()
    }

    pub fn atmosphere(&self) -> Result<AtmosphereState, ConfigError> {
        let a = AtmosphereState {
            pressure_pa: self.atmosphere.pressure_pa,
            temperature_k: self.atmosphere.temperature_k,
            water_mixing_ratio: self.atmosphere.water_mixing_ratio,
        };
        a.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(a)
    }

    pub fn weather(&self) -> Result<WeatherState, ConfigError> {
        let w = WeatherState {
            rain_rate_mm_h: self.weather.rain_rate_mm_h,
            fog_liquid_water_g_m3: self.weather.fog_liquid_water_g_m3,
        };
        w.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(w)
    }

    pub fn subarray_template(&self) -> Result<SubarrayConfig, ConfigError> {
        let s = &self.subarray;
        if s.n_elements.is_empty() || s.opening_angles_deg.is_empty() {
            return Err(ConfigError::Invalid(
                "subarray grids must be non-empty".into(),
            ));
        }
        let template = SubarrayConfig {
            n_elements: s.n_elements[0],
            per_element_power_dbm: s.per_element_power_dbm,
            opening_angle_deg: s.opening_angles_deg[0],
            link_distance_m: s.link_distance_m,
            element_gain: ElementGain::Pencil {
                kappa: s.pencil_beam_constant,
            },
            base: self.scenario()?,
        };
        let cells = s
            .n_elements
            .iter()
            .map(|&n| SubarrayConfig {
                n_elements: n,
                ..template
            })
            .chain(s.opening_angles_deg.iter().map(|&theta| SubarrayConfig {
                opening_angle_deg: theta,
                ..template
            }));
        for cell in cells {
            cell.validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if !(s.pencil_beam_constant > 0.0) {
            return Err(ConfigError::Invalid(
                "subarray.pencil_beam_constant must be positive".into(),
            ));
        }
        Ok(template)
    }

    pub fn spectrum_band(&self) -> Result<((f64, f64), f64), ConfigError> {
        let s = &self.spectrum;
        channel::frequency_grid(s.f_lo_ghz, s.f_hi_ghz, s.step_ghz)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(s.f_lo_ghz > 0.0) {
            return Err(ConfigError::Invalid(
                "spectrum.f_lo_ghz must be positive".into(),
            ));
        }
        if !(s.distance_m > 0.0) {
            return Err(ConfigError::Invalid(
                "spectrum.distance_m must be positive".into(),
            ));
        }
        Ok(((s.f_lo_ghz, s.f_hi_ghz), s.step_ghz))
    }

    pub fn catalog_path(&self) -> Option<PathBuf> {
        self.catalog.path.as_ref().map(|p| match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        })
    }

    /// Checks every section against its domain invariants.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario()?;
        self.atmosphere()?;
        self.weather()?;
        self.subarray_template()?;
        self.spectrum_band()?;
        let d = &self.rate.distances_m;
        if d.iter().any(|x| !(*x > 0.0)) || d.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ConfigError::Invalid(
                "rate.distances_m must be positive and strictly ascending".into(),
            ));
        }
        if !(self.windows.threshold_db_per_km > 0.0) || !(self.windows.distance_m > 0.0) {
            return Err(ConfigError::Invalid(
                "windows.threshold_db_per_km and windows.distance_m must be positive".into(),
            ));
        }
        let [lo, hi] = self.catalog.band_ghz;
        if !(lo >= 0.0 && lo < hi) {
            return Err(ConfigError::Invalid(format!(
                "catalog.band_ghz [{lo}, {hi}]"
            )));
        }
        if let Some(path) = self.catalog_path() {
            if !path.is_file() {
                return Err(ConfigError::MissingCatalog(path));
            }
        }
        Ok(())
    }

    /// Loads the configured catalog (bundled when no path is set).
    pub fn load_catalog(&self) -> Result<LineCatalog, SpectroscopyError> {
        let [lo, hi] = self.catalog.band_ghz;
        match self.catalog_path() {
            None => spectroscopy::load_catalog(
                spectroscopy::bundled_catalog_text().as_bytes(),
                self.catalog.molecule,
                (lo, hi),
                "bundled:h2o_lines.par",
            ),
            Some(path) => {
                let file = std::fs::File::open(&path)
                    .map_err(|e| SpectroscopyError::Io(format!("{}: {e}", path.display())))?;
                spectroscopy::load_catalog(
                    std::io::BufReader::new(file),
                    self.catalog.molecule,
                    (lo, hi),
                    path.display().to_string(),
                )
            }
        }
    }
}
