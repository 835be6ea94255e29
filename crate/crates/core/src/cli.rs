//! Command implementations behind the `thzlink` binary.
//!
//! Each command turns a validated [`ScenarioConfig`] and catalog into a CSV
//! document (one header row, six significant digits). Errors carry the
//! process exit code: 2 configuration, 3 catalog/data (including a missing
//! catalog file), 4 numerical failure.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arrays;
use crate::channel::{self, WeatherState};
use crate::config::{ConfigError, ScenarioConfig};
use crate::linkbudget;
use crate::spectroscopy::{LineCatalog, SpectroscopyError};
use crate::windows::{self, WindowError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Catalog(#[from] SpectroscopyError),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(ConfigError::MissingCatalog(_)) => 3,
            Self::Config(_) => 2,
            Self::Catalog(_) | Self::Output(_) => 3,
            Self::Numerical(_) => 4,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// `value` to six significant digits; fixed notation for exponents in [-5, 6).
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{value:.5e}");
    let exp: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent in LowerExp output");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        format!("{value:.decimals$}")
    } else {
        sci
    }
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(header)
            .map_err(|e| CliError::Output(e.to_string()))?;
        Ok(Self { writer })
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) -> Result<(), CliError> {
        self.writer
            .write_record(cells.into_iter().collect::<Vec<_>>())
            .map_err(|e| CliError::Output(e.to_string()))
    }

    fn finish(self) -> Result<String, CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Loss components over the configured frequency grid.
pub fn cmd_spectrum(config: &ScenarioConfig, catalog: &LineCatalog) -> Result<String, CliError> {
    config.validate()?;
    let (band, step) = config.spectrum_band()?;
    let spectrum = channel::loss_spectrum(
        band,
        step,
        config.spectrum.distance_m,
        &config.atmosphere()?,
        &config.weather()?,
        catalog,
    )
    .map_err(numerical)?;
    let mut table = Table::new(&[
        "frequency_ghz",
        "fspl_db",
        "absorption_db",
        "rain_db",
        "fog_db",
        "total_db",
    ])?;
    for p in &spectrum.points {
        table.row(
            [
                p.frequency_ghz,
                p.fspl_db,
                p.absorption_db,
                p.rain_db,
                p.fog_db,
                p.total_db,
            ]
            .map(format_sig6),
        )?;
    }
    table.finish()
}

/// Net rate over the configured distances at the carrier.
pub fn cmd_rate_distance(
    config: &ScenarioConfig,
    catalog: &LineCatalog,
) -> Result<String, CliError> {
    config.validate()?;
    let points = linkbudget::rate_vs_distance(
        &config.scenario()?,
        &config.rate.distances_m,
        &config.atmosphere()?,
        &config.weather()?,
        catalog,
    )
    .map_err(numerical)?;
    let mut table = Table::new(&["distance_m", "snr_db", "qam_order", "net_rate_gbps"])?;
    for p in &points {
        table.row([
            format_sig6(p.distance_m),
            format_sig6(p.snr_db),
            p.selected_order
                .map_or_else(|| "none".to_string(), |m| m.to_string()),
            format_sig6(p.net_rate_gbps),
        ])?;
    }
    table.finish()
}

/// Element count × opening angle grid.
pub fn cmd_subarray(config: &ScenarioConfig, catalog: &LineCatalog) -> Result<String, CliError> {
    config.validate()?;
    let rows = arrays::subarray_sweep(
        &config.subarray.n_elements,
        &config.subarray.opening_angles_deg,
        &config.subarray_template()?,
        &config.atmosphere()?,
        catalog,
    )
    .map_err(numerical)?;
    let mut table = Table::new(&["n_elements", "opening_angle_deg", "net_rate_gbps"])?;
    for r in &rows {
        table.row([
            r.n_elements.to_string(),
            format_sig6(r.opening_angle_deg),
            format_sig6(r.net_rate_gbps),
        ])?;
    }
    table.finish()
}

/// Absorption windows over the spectrum grid with usable width at `windows.distance_m`.
pub fn cmd_windows(config: &ScenarioConfig, catalog: &LineCatalog) -> Result<String, CliError> {
    config.validate()?;
    let (band, step) = config.spectrum_band()?;
    let atmosphere = config.atmosphere()?;
    // absorption does not depend on weather or distance once normalised per km
    let spectrum = channel::loss_spectrum(
        band,
        step,
        1000.0,
        &atmosphere,
        &WeatherState::CLEAR,
        catalog,
    )
    .map_err(numerical)?;
    let found = windows::find_windows(&spectrum, config.windows.threshold_db_per_km)
        .map_err(|e: WindowError| numerical(e))?;
    let scenario = config.scenario()?;
    let weather = config.weather()?;
    let mut table = Table::new(&[
        "f_lo_ghz",
        "f_hi_ghz",
        "width_ghz",
        "usable_width_at_distance_ghz",
    ])?;
    for w in &found {
        let usable = windows::usable_bandwidth(
            w,
            &scenario,
            config.windows.distance_m,
            step,
            &atmosphere,
            &weather,
            catalog,
        )
        .map_err(numerical)?;
        table.row([w.f_lo_ghz, w.f_hi_ghz, w.width_ghz(), usable.width_ghz].map(format_sig6))?;
    }
    table.finish()
}

/// Line count and frequency range, optionally followed by a per-line table.
pub fn cmd_parse_catalog(catalog: &LineCatalog, with_table: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "source: {}", catalog.source_label());
    let _ = writeln!(out, "lines: {}", catalog.len());
    match catalog.frequency_range() {
        Some((lo, hi)) => {
            let _ = writeln!(
                out,
                "frequency range: {} - {} GHz",
                format_sig6(lo),
                format_sig6(hi)
            );
        }
        None => {
            let _ = writeln!(out, "frequency range: none");
        }
    }
    if with_table {
        let _ = writeln!(
            out,
            "{:>12} {:>11} {:>8} {:>8} {:>11} {:>6}",
            "freq_ghz", "intensity", "g_air", "g_self", "e_lower", "n_air"
        );
        for l in catalog.lines() {
            let _ = writeln!(
                out,
                "{:>12.6} {:>11.3e} {:>8.4} {:>8.3} {:>11.4} {:>6.2}",
                l.center_frequency_ghz,
                l.intensity,
                l.air_halfwidth,
                l.self_halfwidth,
                l.lower_state_energy,
                l.temperature_exponent
            );
        }
    }
    out
}
