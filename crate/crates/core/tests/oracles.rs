//! Library results against independent, deliberately naive reimplementations.

use proptest::prelude::*;

use thzlink::channel::absorption::absorption_coefficient_with_shape;
use thzlink::channel::{
    self, absorption_coefficient, AtmosphereState, LineShape, LossBreakdown, LossSpectrum,
    WeatherState,
};
use thzlink::linkbudget::{qam_ber, required_snr_for_ber, LinkScenario};
use thzlink::spectroscopy::{bundled_catalog, LineCatalog, SpectralLine};
use thzlink::windows::{find_windows, select_band, usable_bandwidth, BandStrategy};

/// Term-by-term absorption in 1/m from first principles.
fn brute_force_absorption(f: f64, lines: &[SpectralLine], atm: &AtmosphereState, vvw: bool) -> f64 {
    let c_cm = 29.979_245_8; // GHz per cm⁻¹
    let k_b = 1.380_649e-23;
    let n_m3 = atm.water_mixing_ratio * atm.pressure_pa / (k_b * atm.temperature_k);
    let mut total = 0.0;
    for l in lines {
        let q = atm.water_mixing_ratio;
        let width_cm = (l.air_halfwidth * (1.0 - q) + l.self_halfwidth * q)
            * (atm.pressure_pa / 101_325.0)
            * (296.0 / atm.temperature_k).powf(l.temperature_exponent);
        let g = width_cm * c_cm;
        let f0 = l.center_frequency_ghz;
        let lor = |x: f64| g / (x * x + g * g) / std::f64::consts::PI;
        let shape_per_ghz = if vvw {
            (f / f0).powi(2) * (lor(f - f0) + lor(f + f0))
        } else {
            lor(f - f0)
        };
        let shape_per_wavenumber = shape_per_ghz * c_cm;
        let sigma_cm2 = l.intensity * shape_per_wavenumber;
        total += n_m3 * sigma_cm2 / 10_000.0;
    }
    total
}

fn synthetic_line() -> impl Strategy<Value = SpectralLine> {
    (
        20.0..1000.0f64,
        1e-25..1e-19f64,
        0.01..0.12f64,
        0.1..0.6f64,
        0.2..1.0f64,
    )
        .prop_map(|(f0, s, ga, gs, n)| SpectralLine {
            molecule_id: 1,
            isotopologue_id: 1,
            center_frequency_ghz: f0,
            intensity: s,
            air_halfwidth: ga,
            self_halfwidth: gs,
            lower_state_energy: 100.0,
            temperature_exponent: n,
        })
}

fn synthetic_spectrum(per_km: &[f64], f0: f64, step: f64) -> LossSpectrum {
    LossSpectrum {
        distance_m: 1000.0,
        atmosphere: AtmosphereState::default(),
        weather: WeatherState::CLEAR,
        points: per_km
            .iter()
            .enumerate()
            .map(|(i, &a)| LossBreakdown {
                frequency_ghz: f0 + i as f64 * step,
                distance_m: 1000.0,
                fspl_db: 0.0,
                absorption_db: a,
                rain_db: 0.0,
                fog_db: 0.0,
                total_db: a,
                fog_extrapolated: false,
            })
            .collect(),
    }
}

/// Threshold scan returning (first, last) index pairs of runs longer than one point.
fn brute_force_windows(per_km: &[f64], threshold: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < per_km.len() {
        if per_km[i] < threshold {
            let mut j = i;
            while j + 1 < per_km.len() && per_km[j + 1] < threshold {
                j += 1;
            }
            if j > i {
                out.push((i, j));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn absorption_matches_term_summation(
        lines in prop::collection::vec(synthetic_line(), 1..=3),
        f in 1.0..1100.0f64,
        q in 0.0..0.04f64,
        p in 30_000.0..110_000.0f64,
        t in 240.0..320.0f64,
    ) {
        let atm = AtmosphereState { pressure_pa: p, temperature_k: t, water_mixing_ratio: q };
        let cat = LineCatalog::new(lines.clone(), "synthetic").unwrap();
        for (shape, vvw) in [(LineShape::VanVleckWeisskopf, true), (LineShape::Lorentzian, false)] {
            let got = absorption_coefficient_with_shape(f, &cat, &atm, shape).unwrap();
            let want = brute_force_absorption(f, &lines, &atm, vvw);
            if want == 0.0 {
                prop_assert_eq!(got, 0.0);
            } else {
                prop_assert!((got / want - 1.0).abs() < 1e-12, "{} vs {}", got, want);
            }
        }
    }

    #[test]
    fn windows_match_threshold_scan(
        per_km in prop::collection::vec(0.0..20.0f64, 1..200),
        threshold in 0.5..20.0f64,
    ) {
        let spectrum = synthetic_spectrum(&per_km, 100.0, 0.5);
        let got = find_windows(&spectrum, threshold).unwrap();
        let want = brute_force_windows(&per_km, threshold);
        prop_assert_eq!(got.len(), want.len());
        for (w, (i, j)) in got.iter().zip(want) {
            prop_assert_eq!(w.f_lo_ghz, spectrum.points[i].frequency_ghz);
            prop_assert_eq!(w.f_hi_ghz, spectrum.points[j].frequency_ghz);
            prop_assert!(w.max_absorption_db_per_km < threshold);
        }
    }

    #[test]
    fn required_snr_round_trips_through_ber(
        k in 1u32..=7,
        target in 1e-6..0.1f64,
    ) {
        let order = 1u32 << k;
        prop_assume!(order >= 4);
        let snr_db = required_snr_for_ber(order, target).unwrap();
        let ber = qam_ber(order, 10f64.powf(snr_db / 10.0)).unwrap();
        prop_assert!((ber / target - 1.0).abs() < 0.02, "M={} ber={} target={}", order, ber, target);
    }
}

#[test]
fn bundled_absorption_matches_term_summation_on_grid() {
    let cat = bundled_catalog();
    let atm = AtmosphereState::default();
    for i in 1..=1000 {
        let f = f64::from(i);
        let got = absorption_coefficient(f, &cat, &atm).unwrap();
        let want = brute_force_absorption(f, cat.lines(), &atm, true);
        assert!((got / want - 1.0).abs() < 1e-12, "{f} GHz");
    }
}

#[test]
fn windows_on_bundled_catalog_match_scan() {
    let cat = bundled_catalog();
    let spectrum = channel::loss_spectrum(
        (100.0, 1000.0),
        1.0,
        1000.0,
        &AtmosphereState::default(),
        &WeatherState::CLEAR,
        &cat,
    )
    .unwrap();
    let per_km: Vec<f64> = spectrum
        .points
        .iter()
        .map(|p| p.absorption_db_per_km())
        .collect();
    let got = find_windows(&spectrum, 10.0).unwrap();
    let want = brute_force_windows(&per_km, 10.0);
    assert!(got.len() >= 2, "strong lines should split the band");
    let pairs: Vec<(f64, f64)> = got.iter().map(|w| (w.f_lo_ghz, w.f_hi_ghz)).collect();
    let expected: Vec<(f64, f64)> = want
        .iter()
        .map(|&(i, j)| {
            (
                spectrum.points[i].frequency_ghz,
                spectrum.points[j].frequency_ghz,
            )
        })
        .collect();
    assert_eq!(pairs, expected);
}

/// Widest feasible run by exhaustive scan of every grid point in the window.
#[allow(clippy::too_many_arguments)]
fn brute_force_usable(
    lo: f64,
    hi: f64,
    step: f64,
    scenario: &LinkScenario,
    distance: f64,
    atm: &AtmosphereState,
    w: &WeatherState,
    cat: &LineCatalog,
) -> f64 {
    let required = required_snr_for_ber(4, scenario.target_ber).unwrap();
    let noise =
        -174.0 + scenario.noise_figure_db + 10.0 * (scenario.noise_bandwidth_ghz * 1e9).log10();
    let n = ((hi - lo) / step).round() as usize;
    let ok: Vec<(f64, bool)> = (0..=n)
        .map(|i| {
            let f = lo + i as f64 * step;
            let loss = channel::total_loss(f, distance, atm, w, cat)
                .unwrap()
                .total_db;
            let snr = scenario.tx_power_dbm + 110.0 - loss - noise;
            (f, snr >= required)
        })
        .collect();
    let mut best = 0.0f64;
    for a in 0..ok.len() {
        for b in a..ok.len() {
            if ok[a..=b].iter().all(|x| x.1) {
                best = best.max(ok[b].0 - ok[a].0);
            }
        }
    }
    best
}

#[test]
fn usable_bandwidth_matches_exhaustive_scan() {
    let cat = bundled_catalog();
    let atm = AtmosphereState::default();
    let scenario = LinkScenario::backhaul();
    let spectrum = channel::loss_spectrum(
        (100.0, 1000.0),
        1.0,
        1000.0,
        &atm,
        &WeatherState::CLEAR,
        &cat,
    )
    .unwrap();
    let windows = find_windows(&spectrum, 10.0).unwrap();
    for distance in [100.0, 1000.0, 3000.0, 10_000.0] {
        for w in &windows {
            let got = usable_bandwidth(
                w,
                &scenario,
                distance,
                1.0,
                &atm,
                &WeatherState::CLEAR,
                &cat,
            )
            .unwrap();
            let want = brute_force_usable(
                w.f_lo_ghz,
                w.f_hi_ghz,
                1.0,
                &scenario,
                distance,
                &atm,
                &WeatherState::CLEAR,
                &cat,
            );
            assert!((got.width_ghz - want).abs() < 1e-9, "{distance} m, {w:?}");
        }
    }
}

#[test]
fn usable_width_shrinks_with_distance() {
    let cat = bundled_catalog();
    let atm = AtmosphereState::default();
    let scenario = LinkScenario::backhaul();
    let spectrum = channel::loss_spectrum(
        (100.0, 1000.0),
        1.0,
        1000.0,
        &atm,
        &WeatherState::CLEAR,
        &cat,
    )
    .unwrap();
    for w in find_windows(&spectrum, 10.0).unwrap() {
        let mut last = f64::INFINITY;
        for d in [10.0, 100.0, 1000.0, 2000.0, 5000.0, 10_000.0] {
            let u = usable_bandwidth(&w, &scenario, d, 1.0, &atm, &WeatherState::CLEAR, &cat)
                .unwrap()
                .width_ghz;
            assert!(u <= last + 1e-12);
            assert!(u <= w.width_ghz() + 1e-12);
            last = u;
        }
    }
}

#[test]
fn band_strategies_stay_inside_window() {
    let spectrum = synthetic_spectrum(&[1.0; 101], 200.0, 1.0);
    let w = find_windows(&spectrum, 5.0).unwrap()[0];
    assert_eq!((w.f_lo_ghz, w.f_hi_ghz), (200.0, 300.0));
    for strategy in [
        BandStrategy::WholeWindow,
        BandStrategy::Center,
        BandStrategy::Edges,
    ] {
        let plan = select_band(strategy, &w, 40.0, 1000.0).unwrap();
        let total: f64 = plan.sub_bands.iter().map(|(a, b)| b - a).sum();
        for &(a, b) in &plan.sub_bands {
            assert!(a >= w.f_lo_ghz && b <= w.f_hi_ghz && a < b);
        }
        match strategy {
            BandStrategy::WholeWindow => assert_eq!(total, 100.0),
            _ => assert!((total - 40.0).abs() < 1e-12),
        }
    }
    assert!(select_band(BandStrategy::Center, &w, 150.0, 1000.0).is_err());
}
