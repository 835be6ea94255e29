//! Transmission windows and distance-aware band selection.
//!
//! Windows are found on molecular absorption alone (dB/km, FSPL excluded) at
//! grid resolution. Usable bandwidth brings the full link budget back in:
//! the part of a window where total loss still lets the lowest QAM rung close.

use thiserror::Error;

use crate::channel::{self, AtmosphereState, ChannelError, LossSpectrum, WeatherState};
use crate::linkbudget::{LinkError, LinkScenario};
use crate::spectroscopy::LineCatalog;

/// Default absorption threshold for a window, dB/km.
pub const DEFAULT_WINDOW_THRESHOLD_DB_PER_KM: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindowError {
    #[error("spectrum has no points")]
    EmptySpectrum,
    #[error("threshold must be positive, got {0}")]
    InvalidThreshold(f64),
    #[error("required bandwidth {required_ghz} GHz does not fit in a {available_ghz} GHz window")]
    InsufficientWindow {
        required_ghz: f64,
        available_ghz: f64,
    },
    #[error("invalid window [{0}, {1}] GHz")]
    InvalidWindow(f64, f64),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Maximal contiguous run of grid points with absorption below the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionWindow {
    pub f_lo_ghz: f64,
    pub f_hi_ghz: f64,
    pub min_absorption_db_per_km: f64,
    pub max_absorption_db_per_km: f64,
}

impl TransmissionWindow {
    pub fn width_ghz(&self) -> f64 {
        self.f_hi_ghz - self.f_lo_ghz
    }

    pub fn midpoint_ghz(&self) -> f64 {
        0.5 * (self.f_lo_ghz + self.f_hi_ghz)
    }

    fn validate(&self) -> Result<(), WindowError> {
        if self.f_lo_ghz < self.f_hi_ghz && self.f_lo_ghz > 0.0 {
            Ok(())
        } else {
            Err(WindowError::InvalidWindow(self.f_lo_ghz, self.f_hi_ghz))
        }
    }
}

/// Windows of `spectrum` where absorption (per km) is strictly below `threshold_db_per_km`.
///
/// Runs consisting of a single grid point have zero width and are dropped.
pub fn find_windows(
    spectrum: &LossSpectrum,
    threshold_db_per_km: f64,
) -> Result<Vec<TransmissionWindow>, WindowError> {
    if spectrum.is_empty() {
        return Err(WindowError::EmptySpectrum);
    }
    if !(threshold_db_per_km > 0.0) {
        return Err(WindowError::InvalidThreshold(threshold_db_per_km));
    }
    let mut windows = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    let close = |(start, end): (usize, usize), out: &mut Vec<TransmissionWindow>| {
        if end > start {
            let pts = &spectrum.points[start..=end];
            let per_km = pts.iter().map(|p| p.absorption_db_per_km());
            out.push(TransmissionWindow {
                f_lo_ghz: pts[0].frequency_ghz,
                f_hi_ghz: pts[pts.len() - 1].frequency_ghz,
                min_absorption_db_per_km: per_km.clone().fold(f64::INFINITY, f64::min),
                max_absorption_db_per_km: per_km.fold(f64::NEG_INFINITY, f64::max),
            });
        }
    };
    for (i, p) in spectrum.points.iter().enumerate() {
        if p.absorption_db_per_km() < threshold_db_per_km {
            run = Some(run.map_or((i, i), |(s, _)| (s, i)));
        } else if let Some(r) = run.take() {
            close(r, &mut windows);
        }
    }
    if let Some(r) = run {
        close(r, &mut windows);
    }
    Ok(windows)
}

/// Widest feasible part of a window at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsableBand {
    pub width_ghz: f64,
    /// `None` when no grid point of the window closes the link.
    pub sub_band: Option<(f64, f64)>,
}

/// Widest contiguous sub-band of `window` (sampled every `step_ghz` from its
/// lower edge) where the lowest ladder rung closes at `distance_m`.
pub fn usable_bandwidth(
    window: &TransmissionWindow,
    scenario: &LinkScenario,
    distance_m: f64,
    step_ghz: f64,
    atmosphere: &AtmosphereState,
    weather: &WeatherState,
    catalog: &LineCatalog,
) -> Result<UsableBand, WindowError> {
    window.validate()?;
    scenario.validate()?;
    let lowest = *scenario.ladder()?.first().ok_or(LinkError::EmptyLadder)?;
    let n = ((window.width_ghz()) / step_ghz).round() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| (window.f_lo_ghz + i as f64 * step_ghz).min(window.f_hi_ghz))
        .collect();

    let mut best: Option<(f64, f64)> = None;
    let mut current: Option<(f64, f64)> = None;
    for &f in &grid {
        let loss = channel::total_loss(f, distance_m, atmosphere, weather, catalog)?;
        let budget = scenario.max_tolerable_loss_db(f, lowest.required_snr_db)?;
        if loss.total_db <= budget {
            current = Some(current.map_or((f, f), |(lo, _)| (lo, f)));
            let (lo, hi) = current.expect("just set");
            if best.is_none_or(|(blo, bhi)| hi - lo > bhi - blo) {
                best = Some((lo, hi));
            }
        } else {
            current = None;
        }
    }
    Ok(UsableBand {
        width_ghz: best.map_or(0.0, |(lo, hi)| hi - lo),
        sub_band: best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandStrategy {
    /// The entire window.
    WholeWindow,
    /// A sub-band centred on the window midpoint.
    Center,
    /// Two half-width sub-bands abutting the window edges.
    Edges,
}

impl std::str::FromStr for BandStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "whole" | "whole-window" => Ok(Self::WholeWindow),
            "center" | "centre" => Ok(Self::Center),
            "edges" => Ok(Self::Edges),
            other => Err(format!("unknown band strategy {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandPlan {
    pub strategy: BandStrategy,
    pub sub_bands: Vec<(f64, f64)>,
    pub target_distance_m: f64,
}

pub fn select_band(
    strategy: BandStrategy,
    window: &TransmissionWindow,
    required_bandwidth_ghz: f64,
    target_distance_m: f64,
) -> Result<BandPlan, WindowError> {
    window.validate()?;
    let (lo, hi) = (window.f_lo_ghz, window.f_hi_ghz);
    let needs_fit = strategy != BandStrategy::WholeWindow;
    if needs_fit && !(required_bandwidth_ghz > 0.0 && required_bandwidth_ghz <= window.width_ghz())
    {
        return Err(WindowError::InsufficientWindow {
            required_ghz: required_bandwidth_ghz,
            available_ghz: window.width_ghz(),
        });
    }
    let sub_bands = match strategy {
        BandStrategy::WholeWindow => vec![(lo, hi)],
        BandStrategy::Center => {
            let half = 0.5 * required_bandwidth_ghz;
            let mid = window.midpoint_ghz();
            vec![(mid - half, mid + half)]
        }
        BandStrategy::Edges => {
            let half = 0.5 * required_bandwidth_ghz;
            vec![(lo, lo + half), (hi - half, hi)]
        }
    };
    Ok(BandPlan {
        strategy,
        sub_bands,
        target_distance_m,
    })
}
