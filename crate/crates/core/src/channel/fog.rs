//! ITU-R P.840-6 cloud/fog attenuation from the double-Debye water permittivity.

use super::ChannelError;

/// Upper frequency of the recommendation's stated validity, GHz.
pub const FOG_MODEL_MAX_GHZ: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FogAttenuation {
    pub db_per_km: f64,
    /// Set when the frequency lies above [`FOG_MODEL_MAX_GHZ`].
    pub extrapolated: bool,
}

/// Specific attenuation coefficient `K_l`, (dB/km)/(g/m³).
pub fn liquid_water_coefficient(frequency_ghz: f64, temperature_k: f64) -> f64 {
    let theta = 300.0 / temperature_k;
    let eps0 = 77.66 + 103.3 * (theta - 1.0);
    let eps1 = 0.0671 * eps0;
    let eps2 = 3.52;
    let fp = 20.20 - 146.0 * (theta - 1.0) + 316.0 * (theta - 1.0).powi(2);
    let fs = 39.8 * fp;
    let f = frequency_ghz;

    let eps_im = f * (eps0 - eps1) / (fp * (1.0 + (f / fp).powi(2)))
        + f * (eps1 - eps2) / (fs * (1.0 + (f / fs).powi(2)));
    let eps_re =
        (eps0 - eps1) / (1.0 + (f / fp).powi(2)) + (eps1 - eps2) / (1.0 + (f / fs).powi(2)) + eps2;
    let eta = (2.0 + eps_re) / eps_im;
    0.819 * f / (eps_im * (1.0 + eta * eta))
}

/// `K_l(f, T) · M` in dB/km.
pub fn fog_attenuation_db_per_km(
    frequency_ghz: f64,
    liquid_water_g_m3: f64,
    temperature_k: f64,
) -> Result<FogAttenuation, ChannelError> {
    if !(frequency_ghz > 0.0) || !frequency_ghz.is_finite() {
        return Err(ChannelError::NonPositiveInput {
            name: "frequency",
            value: frequency_ghz,
        });
    }
    if !(temperature_k > 0.0) {
        return Err(ChannelError::NonPositiveInput {
            name: "temperature",
            value: temperature_k,
        });
    }
    if !(liquid_water_g_m3 >= 0.0) || !liquid_water_g_m3.is_finite() {
        return Err(ChannelError::InvalidWeather(format!(
            "fog liquid water must be finite and non-negative, got {liquid_water_g_m3}"
        )));
    }
    Ok(FogAttenuation {
        db_per_km: liquid_water_coefficient(frequency_ghz, temperature_k) * liquid_water_g_m3,
        extrapolated: frequency_ghz > FOG_MODEL_MAX_GHZ,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_water_no_loss() {
        let a = fog_attenuation_db_per_km(300.0, 0.0, 288.0).unwrap();
        assert_eq!(a.db_per_km, 0.0);
        assert!(a.extrapolated);
    }

    #[test]
    fn linear_in_liquid_water() {
        let one = fog_attenuation_db_per_km(150.0, 0.5, 288.0).unwrap();
        let two = fog_attenuation_db_per_km(150.0, 1.0, 288.0).unwrap();
        assert!((two.db_per_km - 2.0 * one.db_per_km).abs() < 1e-12);
        assert!(!one.extrapolated);
    }

    #[test]
    fn recommendation_figure_level() {
        // P.840 figure 1: K_l at 0 °C, 100 GHz is close to 5 (dB/km)/(g/m³)
        let k = liquid_water_coefficient(100.0, 273.15);
        assert!((4.5..5.5).contains(&k), "{k}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(fog_attenuation_db_per_km(0.0, 0.5, 288.0).is_err());
        assert!(fog_attenuation_db_per_km(300.0, -0.5, 288.0).is_err());
        assert!(fog_attenuation_db_per_km(300.0, 0.5, 0.0).is_err());
    }
}
