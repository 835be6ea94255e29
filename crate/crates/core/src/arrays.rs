//! Small pencil-beam sub-arrays: element count vs opening angle vs rate.
//!
//! The opening angle Θ is twice the maximum scan angle and equals the 3-dB
//! beamwidth of one element. Elements are symmetric pencil beams with gain
//! `κ/Θ²` (Θ in degrees). An `N`-element array adds `10·log10 N` of
//! transmit power (spatial combining) and `10·log10 N` of coherent gain; the
//! receiver is an identical array. Evaluation is at boresight, without scan loss.

use rayon::prelude::*;

use crate::channel::{self, AtmosphereState, WeatherState};
use crate::linkbudget::{self, AntennaGain, LinkError, LinkScenario, RatePoint};
use crate::spectroscopy::LineCatalog;

/// Pencil-beam constant κ (deg²), calibrated so that four 15° elements per
/// end over 10 m at 0 dBm per element land on the ladder rung nearest 200 Gbps
/// (8-QAM, ≈ 171 Gbps) on the backhaul parameter set. See `examples/calibrate_element_gain.rs`.
pub const PENCIL_BEAM_CONSTANT: f64 = 21_760.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementGain {
    /// `G = κ/Θ²`.
    Pencil { kappa: f64 },
    /// Angle-independent gain, dBi.
    Fixed { dbi: f64 },
}

impl Default for ElementGain {
    fn default() -> Self {
        Self::Pencil {
            kappa: PENCIL_BEAM_CONSTANT,
        }
    }
}

impl ElementGain {
    pub fn gain_dbi(&self, opening_angle_deg: f64) -> Result<f64, LinkError> {
        check_angle(opening_angle_deg)?;
        match *self {
            Self::Pencil { kappa } => {
                if !(kappa > 0.0) {
                    return Err(LinkError::NonPositiveInput {
                        name: "pencil-beam constant",
                        value: kappa,
                    });
                }
                Ok(10.0 * (kappa / (opening_angle_deg * opening_angle_deg)).log10())
            }
            Self::Fixed { dbi } => Ok(dbi),
        }
    }
}

fn check_angle(theta: f64) -> Result<(), LinkError> {
    if theta > 0.0 && theta <= 180.0 {
        Ok(())
    } else {
        Err(LinkError::InvalidScenario(format!(
            "opening angle {theta}° outside (0, 180]"
        )))
    }
}

/// Element gain for opening angle Θ (degrees) with the calibrated κ.
pub fn element_gain_dbi(opening_angle_deg: f64) -> Result<f64, LinkError> {
    ElementGain::default().gain_dbi(opening_angle_deg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    pub max_scan_angle_deg: f64,
    pub element_beamwidth_3db_deg: f64,
}

impl BeamGeometry {
    pub fn from_opening_angle(opening_angle_deg: f64) -> Self {
        Self {
            max_scan_angle_deg: opening_angle_deg / 2.0,
            element_beamwidth_3db_deg: opening_angle_deg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubarrayConfig {
    pub n_elements: u32,
    pub per_element_power_dbm: f64,
    pub opening_angle_deg: f64,
    pub link_distance_m: f64,
    pub element_gain: ElementGain,
    /// Everything else (symbol rate, NF, BER threshold, ladder, code rate).
    pub base: LinkScenario,
}

impl Default for SubarrayConfig {
    fn default() -> Self {
        Self {
            n_elements: 4,
            per_element_power_dbm: 0.0,
            opening_angle_deg: 15.0,
            link_distance_m: 10.0,
            element_gain: ElementGain::default(),
            base: LinkScenario::backhaul(),
        }
    }
}

impl SubarrayConfig {
    pub fn validate(&self) -> Result<(), LinkError> {
        if self.n_elements == 0 {
            return Err(LinkError::InvalidScenario(
                "sub-array needs at least one element".into(),
            ));
        }
        check_angle(self.opening_angle_deg)?;
        if !(self.link_distance_m > 0.0) {
            return Err(LinkError::NonPositiveInput {
                name: "link distance",
                value: self.link_distance_m,
            });
        }
        self.base.validate()
    }

    pub fn geometry(&self) -> BeamGeometry {
        BeamGeometry::from_opening_angle(self.opening_angle_deg)
    }

    /// Equivalent single-antenna scenario for this array pair.
    pub fn effective_scenario(&self) -> Result<LinkScenario, LinkError> {
        self.validate()?;
        let combining_db = 10.0 * f64::from(self.n_elements).log10();
        let array_gain = combining_db + self.element_gain.gain_dbi(self.opening_angle_deg)?;
        Ok(LinkScenario {
            tx_power_dbm: self.per_element_power_dbm + combining_db,
            tx_antenna: AntennaGain::Fixed { dbi: array_gain },
            rx_antenna: AntennaGain::Fixed { dbi: array_gain },
            ..self.base
        })
    }

    /// Transmit EIRP, dBm.
    pub fn eirp_dbm(&self) -> Result<f64, LinkError> {
        let s = self.effective_scenario()?;
        Ok(s.tx_power_dbm + s.tx_antenna.gain_dbi(s.carrier_frequency_ghz)?)
    }
}

/// Clear-sky rate of one sub-array link at `config.link_distance_m`.
pub fn subarray_rate(
    config: &SubarrayConfig,
    atmosphere: &AtmosphereState,
    catalog: &LineCatalog,
) -> Result<RatePoint, LinkError> {
    let scenario = config.effective_scenario()?;
    let ladder = scenario.ladder()?;
    let loss = channel::total_loss(
        scenario.carrier_frequency_ghz,
        config.link_distance_m,
        atmosphere,
        &WeatherState::CLEAR,
        catalog,
    )?;
    linkbudget::rate_point(&scenario, &ladder, &loss)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubarrayRow {
    pub n_elements: u32,
    pub opening_angle_deg: f64,
    pub snr_db: f64,
    pub selected_order: Option<u32>,
    pub net_rate_gbps: f64,
}

/// Cross product of element counts (outer, in the given order) and opening
/// angles (inner, ascending).
pub fn subarray_sweep(
    n_list: &[u32],
    angle_grid_deg: &[f64],
    template: &SubarrayConfig,
    atmosphere: &AtmosphereState,
    catalog: &LineCatalog,
) -> Result<Vec<SubarrayRow>, LinkError> {
    if n_list.is_empty() || angle_grid_deg.is_empty() {
        return Err(LinkError::InvalidScenario(
            "empty sub-array sweep grid".into(),
        ));
    }
    let mut angles = angle_grid_deg.to_vec();
    angles.sort_by(f64::total_cmp);
    let cells: Vec<(u32, f64)> = n_list
        .iter()
        .flat_map(|&n| angles.iter().map(move |&a| (n, a)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, theta)| {
            let config = SubarrayConfig {
                n_elements: n,
                opening_angle_deg: theta,
                ..*template
            };
            let point = subarray_rate(&config, atmosphere, catalog)?;
            Ok(SubarrayRow {
                n_elements: n,
                opening_angle_deg: theta,
                snr_db: point.snr_db,
                selected_order: point.selected_order,
                net_rate_gbps: point.net_rate_gbps,
            })
        })
        .collect()
}

/// Widest opening angle in `rows` for `n_elements` that sustains at least `min_rate_gbps`.
pub fn max_opening_angle(rows: &[SubarrayRow], n_elements: u32, min_rate_gbps: f64) -> Option<f64> {
    rows.iter()
        .filter(|r| r.n_elements == n_elements && r.net_rate_gbps >= min_rate_gbps)
        .map(|r| r.opening_angle_deg)
        .max_by(f64::total_cmp)
}

/// Result of fitting κ to a target rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilCalibration {
    /// Geometric centre of the admissible interval.
    pub kappa: f64,
    pub kappa_min: f64,
    /// Upper end (exclusive); infinite when the target rung is the top of the ladder.
    pub kappa_max: f64,
    pub order: u32,
    pub net_rate_gbps: f64,
}

/// Finds the κ interval for which `template` selects the ladder rung whose
/// net rate is closest to `target_rate_gbps`.
///
/// κ enters the SNR twice (both ends) as `20·log10 κ`, so the interval
/// follows from the SNR at κ = 1 and the rung thresholds.
pub fn calibrate_pencil_constant(
    target_rate_gbps: f64,
    template: &SubarrayConfig,
    atmosphere: &AtmosphereState,
    catalog: &LineCatalog,
) -> Result<PencilCalibration, LinkError> {
    let unit = SubarrayConfig {
        element_gain: ElementGain::Pencil { kappa: 1.0 },
        ..*template
    };
    let scenario = unit.effective_scenario()?;
    let ladder = scenario.ladder()?;
    let (index, rung) = ladder
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let da = (linkbudget::net_rate(a, &scenario) - target_rate_gbps).abs();
            let db = (linkbudget::net_rate(b, &scenario) - target_rate_gbps).abs();
            da.total_cmp(&db)
        })
        .ok_or(LinkError::EmptyLadder)?;
    let snr_unit = subarray_rate(&unit, atmosphere, catalog)?.snr_db;
    let kappa_for = |required: f64| 10f64.powf((required - snr_unit) / 20.0);
    let kappa_min = kappa_for(rung.required_snr_db);
    let kappa_max = ladder
        .get(index + 1)
        .map_or(f64::INFINITY, |next| kappa_for(next.required_snr_db));
    let kappa = if kappa_max.is_finite() {
        (kappa_min * kappa_max).sqrt()
    } else {
        kappa_min * 2.0
    };
    Ok(PencilCalibration {
        kappa,
        kappa_min,
        kappa_max,
        order: rung.order,
        net_rate_gbps: linkbudget::net_rate(rung, &scenario),
    })
}
