//! Link budgets, QAM feasibility at a pre-FEC BER threshold, and net rates.
//!
//! The SNR chain is `P_tx + G_tx + G_rx − L_total − N − margin` with thermal
//! noise `N = −174 dBm/Hz + NF + 10·log10(B)`. A QAM rung is feasible when its
//! required SNR (the SNR at which the Gray-coded AWGN BER approximation hits
//! the target BER) does not exceed the link SNR.

use rayon::prelude::*;
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::channel::{self, AtmosphereState, ChannelError, LossBreakdown, WeatherState};
use crate::spectroscopy::LineCatalog;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

/// Code rate giving 800 Gbps for 64 Gbd, 128-QAM, two polarizations.
pub const DEFAULT_CODE_RATE: f64 = 0.893;

/// Pre-FEC BER threshold.
pub const DEFAULT_TARGET_BER: f64 = 2e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("{name} must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
    #[error("invalid link scenario: {0}")]
    InvalidScenario(String),
    #[error("loss evaluated at {loss_ghz} GHz but the scenario carrier is {carrier_ghz} GHz")]
    InconsistentFrequency { carrier_ghz: f64, loss_ghz: f64 },
    #[error("QAM order {0} is not a power of two ≥ 4")]
    InvalidOrder(u32),
    #[error("target BER {target_ber} is not reachable for {order}-QAM")]
    NoSolution { order: u32, target_ber: f64 },
    #[error("modulation ladder is empty")]
    EmptyLadder,
    #[error("modulation ladder is not sorted by order")]
    UnsortedLadder,
    #[error("distances must be positive and ascending")]
    InvalidDistances,
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Antenna gain, either given directly or derived from a circular aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AntennaGain {
    Fixed { dbi: f64 },
    Aperture { diameter_m: f64, efficiency: f64 },
}

impl AntennaGain {
    pub fn gain_dbi(&self, frequency_ghz: f64) -> Result<f64, LinkError> {
        match *self {
            Self::Fixed { dbi } => Ok(dbi),
            Self::Aperture {
                diameter_m,
                efficiency,
            } => antenna_gain_from_aperture(diameter_m, efficiency, frequency_ghz),
        }
    }
}

/// Transmit/receive parameter set for one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkScenario {
    pub carrier_frequency_ghz: f64,
    pub symbol_rate_gbd: f64,
    pub noise_bandwidth_ghz: f64,
    pub tx_power_dbm: f64,
    pub tx_antenna: AntennaGain,
    pub rx_antenna: AntennaGain,
    pub noise_figure_db: f64,
    pub implementation_margin_db: f64,
    pub code_rate: f64,
    pub polarizations: u8,
    pub max_qam_order: u32,
    pub target_ber: f64,
}

impl LinkScenario {
    /// 300 GHz backhaul: 64 Gbd, 0 dBm, 55 dBi at both ends, NF 10 dB,
    /// 128-QAM cap, one polarization.
    pub fn backhaul() -> Self {
        Self {
            carrier_frequency_ghz: 300.0,
            symbol_rate_gbd: 64.0,
            noise_bandwidth_ghz: 64.0,
            tx_power_dbm: 0.0,
            tx_antenna: AntennaGain::Fixed { dbi: 55.0 },
            rx_antenna: AntennaGain::Fixed { dbi: 55.0 },
            noise_figure_db: 10.0,
            implementation_margin_db: 0.0,
            code_rate: DEFAULT_CODE_RATE,
            polarizations: 1,
            max_qam_order: 128,
            target_ber: DEFAULT_TARGET_BER,
        }
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        let bad = |msg: String| Err(LinkError::InvalidScenario(msg));
        if !(self.carrier_frequency_ghz > 0.0) {
            return bad(format!(
                "carrier frequency {} GHz",
                self.carrier_frequency_ghz
            ));
        }
        if !(self.symbol_rate_gbd > 0.0) {
            return bad(format!("symbol rate {} Gbd", self.symbol_rate_gbd));
        }
        if !(self.noise_bandwidth_ghz >= self.symbol_rate_gbd) {
            return bad(format!(
                "noise bandwidth {} GHz is below the symbol rate {} Gbd",
                self.noise_bandwidth_ghz, self.symbol_rate_gbd
            ));
        }
        if !(self.implementation_margin_db >= 0.0) {
            return bad(format!(
                "implementation margin {} dB",
                self.implementation_margin_db
            ));
        }
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return bad(format!("code rate {} outside (0, 1]", self.code_rate));
        }
        if !matches!(self.polarizations, 1 | 2) {
            return bad(format!(
                "polarizations {} not in {{1, 2}}",
                self.polarizations
            ));
        }
        if !is_valid_order(self.max_qam_order) {
            return bad(format!("max QAM order {}", self.max_qam_order));
        }
        if !(self.target_ber > 0.0 && self.target_ber < 0.5) {
            return bad(format!("target BER {}", self.target_ber));
        }
        for antenna in [self.tx_antenna, self.rx_antenna] {
            if let AntennaGain::Aperture {
                diameter_m,
                efficiency,
            } = antenna
            {
                if !(diameter_m > 0.0) || !(efficiency > 0.0 && efficiency <= 1.0) {
                    return bad(format!(
                        "aperture diameter {diameter_m} m, efficiency {efficiency}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// QAM ladder `4, 8, …, max_qam_order` at the scenario's target BER.
    pub fn ladder(&self) -> Result<Vec<ModulationScheme>, LinkError> {
        qam_ladder(self.max_qam_order, self.target_ber)
    }

    /// Largest total path loss (dB) at which `required_snr_db` is still met.
    pub fn max_tolerable_loss_db(
        &self,
        frequency_ghz: f64,
        required_snr_db: f64,
    ) -> Result<f64, LinkError> {
        Ok(self.tx_power_dbm
            + self.tx_antenna.gain_dbi(frequency_ghz)?
            + self.rx_antenna.gain_dbi(frequency_ghz)?
            - noise_power_dbm(self.noise_bandwidth_ghz, self.noise_figure_db)?
            - self.implementation_margin_db
            - required_snr_db)
    }
}

impl Default for LinkScenario {
    fn default() -> Self {
        Self::backhaul()
    }
}

/// One QAM rung.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationScheme {
    pub order: u32,
    pub required_snr_db: f64,
}

impl ModulationScheme {
    pub fn bits_per_symbol(&self) -> u32 {
        self.order.trailing_zeros()
    }
}

/// Link state at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub distance_m: f64,
    pub snr_db: f64,
    pub selected_order: Option<u32>,
    pub net_rate_gbps: f64,
}

/// `10·log10(η·(π·D·f/c)²)` in dBi.
pub fn antenna_gain_from_aperture(
    diameter_m: f64,
    efficiency: f64,
    frequency_ghz: f64,
) -> Result<f64, LinkError> {
    for (name, value) in [
        ("aperture diameter", diameter_m),
        ("aperture efficiency", efficiency),
        ("frequency", frequency_ghz),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(LinkError::NonPositiveInput { name, value });
        }
    }
    let x = std::f64::consts::PI * diameter_m * frequency_ghz * 1e9 / channel::SPEED_OF_LIGHT;
    Ok(10.0 * (efficiency * x * x).log10())
}

/// Receiver noise power in dBm over `bandwidth_ghz`.
pub fn noise_power_dbm(bandwidth_ghz: f64, noise_figure_db: f64) -> Result<f64, LinkError> {
    if !(bandwidth_ghz > 0.0) || !bandwidth_ghz.is_finite() {
        return Err(LinkError::NonPositiveInput {
            name: "noise bandwidth",
            value: bandwidth_ghz,
        });
    }
    Ok(THERMAL_NOISE_DBM_PER_HZ + noise_figure_db + 10.0 * (bandwidth_ghz * 1e9).log10())
}

/// SNR for a loss evaluated at an arbitrary frequency; aperture gains follow that frequency.
pub fn snr_at_frequency_db(
    scenario: &LinkScenario,
    loss: &LossBreakdown,
) -> Result<f64, LinkError> {
    let f = loss.frequency_ghz;
    Ok(scenario.tx_power_dbm
        + scenario.tx_antenna.gain_dbi(f)?
        + scenario.rx_antenna.gain_dbi(f)?
        - loss.total_db
        - noise_power_dbm(scenario.noise_bandwidth_ghz, scenario.noise_figure_db)?
        - scenario.implementation_margin_db)
}

/// Link SNR in dB for a loss evaluated at the scenario's carrier.
pub fn snr_db(scenario: &LinkScenario, loss: &LossBreakdown) -> Result<f64, LinkError> {
    let carrier = scenario.carrier_frequency_ghz;
    if (loss.frequency_ghz - carrier).abs() > 1e-9 * carrier.abs().max(1.0) {
        return Err(LinkError::InconsistentFrequency {
            carrier_ghz: carrier,
            loss_ghz: loss.frequency_ghz,
        });
    }
    snr_at_frequency_db(scenario, loss)
}

fn is_valid_order(order: u32) -> bool {
    order >= 4 && order.is_power_of_two()
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `(coefficient, distance_scale)` such that `BER ≈ coefficient · Q(√(distance_scale · SNR))`.
///
/// Square QAM (even `log2 M`) uses the standard nearest-neighbour
/// approximation. 32/128 and above with odd `log2 M` are cross
/// constellations with mean energy `(31M/32 − 1)·d²/6`. 8-QAM has no cross
/// form and is treated as the 4×2 rectangular constellation.
fn ber_form(order: u32) -> (f64, f64) {
    let m = f64::from(order);
    let bits = f64::from(order.trailing_zeros());
    if order.trailing_zeros().is_multiple_of(2) {
        (4.0 / bits * (1.0 - 1.0 / m.sqrt()), 3.0 / (m - 1.0))
    } else if order == 8 {
        // 4×2 grid: P_s ≈ 2(1 − 1/4 + 1 − 1/2)·Q, d²/(2N0) = 6·SNR/(4² + 2² − 2)
        (2.0 * (0.75 + 0.5) / bits, 6.0 / 18.0)
    } else {
        (
            4.0 / bits * (1.0 - 1.0 / (2.0 * m).sqrt()),
            3.0 / (31.0 * m / 32.0 - 1.0),
        )
    }
}

/// Approximate Gray-coded AWGN bit error rate of `order`-QAM at linear SNR (Es/N0).
pub fn qam_ber(order: u32, snr_linear: f64) -> Result<f64, LinkError> {
    if !is_valid_order(order) {
        return Err(LinkError::InvalidOrder(order));
    }
    let (coef, scale) = ber_form(order);
    Ok(coef * q_function((scale * snr_linear.max(0.0)).sqrt()))
}

/// SNR (dB) at which [`qam_ber`] equals `target_ber`, by bisection in dB.
pub fn required_snr_for_ber(order: u32, target_ber: f64) -> Result<f64, LinkError> {
    if !is_valid_order(order) {
        return Err(LinkError::InvalidOrder(order));
    }
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(LinkError::NoSolution { order, target_ber });
    }
    let ber_at = |db: f64| qam_ber(order, 10f64.powf(db / 10.0)).expect("order checked");
    let (mut lo, mut hi) = (-30.0_f64, 80.0_f64);
    if ber_at(lo) <= target_ber || ber_at(hi) >= target_ber {
        return Err(LinkError::NoSolution { order, target_ber });
    }
    // BER is decreasing in SNR; stop well inside the 0.01 dB requirement
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if ber_at(mid) > target_ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Ladder `4, 8, 16, …, max_order` with required SNRs at `target_ber`.
pub fn qam_ladder(max_order: u32, target_ber: f64) -> Result<Vec<ModulationScheme>, LinkError> {
    if !is_valid_order(max_order) {
        return Err(LinkError::InvalidOrder(max_order));
    }
    std::iter::successors(Some(4u32), |&m| m.checked_mul(2))
        .take_while(|&m| m <= max_order)
        .map(|order| {
            Ok(ModulationScheme {
                order,
                required_snr_db: required_snr_for_ber(order, target_ber)?,
            })
        })
        .collect()
}

/// Highest rung with `required_snr ≤ snr` and `order ≤ cap`; `None` means outage.
pub fn max_modulation(
    snr_db: f64,
    ladder: &[ModulationScheme],
    cap: u32,
) -> Result<Option<ModulationScheme>, LinkError> {
    if ladder.is_empty() {
        return Err(LinkError::EmptyLadder);
    }
    if ladder.windows(2).any(|w| w[0].order >= w[1].order) {
        return Err(LinkError::UnsortedLadder);
    }
    Ok(ladder
        .iter()
        .rev()
        .find(|s| s.order <= cap && s.required_snr_db <= snr_db)
        .copied())
}

/// `symbol_rate · log2(M) · code_rate · polarizations` in Gbps.
pub fn net_rate(scheme: &ModulationScheme, scenario: &LinkScenario) -> f64 {
    scenario.symbol_rate_gbd
        * f64::from(scheme.bits_per_symbol())
        * scenario.code_rate
        * f64::from(scenario.polarizations)
}

/// Rate point for an already computed loss at the carrier.
pub fn rate_point(
    scenario: &LinkScenario,
    ladder: &[ModulationScheme],
    loss: &LossBreakdown,
) -> Result<RatePoint, LinkError> {
    let snr = snr_db(scenario, loss)?;
    let scheme = max_modulation(snr, ladder, scenario.max_qam_order)?;
    Ok(RatePoint {
        distance_m: loss.distance_m,
        snr_db: snr,
        selected_order: scheme.map(|s| s.order),
        net_rate_gbps: scheme.map_or(0.0, |s| net_rate(&s, scenario)),
    })
}

/// Net rate over a sweep of ascending distances at the scenario carrier.
pub fn rate_vs_distance(
    scenario: &LinkScenario,
    distances_m: &[f64],
    atmosphere: &AtmosphereState,
    weather: &WeatherState,
    catalog: &LineCatalog,
) -> Result<Vec<RatePoint>, LinkError> {
    scenario.validate()?;
    if distances_m.iter().any(|d| !(*d > 0.0)) || distances_m.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LinkError::InvalidDistances);
    }
    let ladder = scenario.ladder()?;
    distances_m
        .par_iter()
        .map(|&d| {
            let loss = channel::total_loss(
                scenario.carrier_frequency_ghz,
                d,
                atmosphere,
                weather,
                catalog,
            )?;
            rate_point(scenario, &ladder, &loss)
        })
        .collect()
}
