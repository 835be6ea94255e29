use proptest::prelude::*;

use thzlink::channel::{
    self, fog_attenuation_db_per_km, rain_attenuation_db_per_km, AtmosphereState, WeatherState,
};
use thzlink::linkbudget::{
    max_modulation, qam_ladder, rate_vs_distance, snr_db, LinkScenario, ModulationScheme,
};
use thzlink::spectroscopy::{
    bundled_catalog, bundled_catalog_text, format_line_record, parse_line_record, LineCatalog,
    SpectralLine,
};

fn atmosphere() -> impl Strategy<Value = AtmosphereState> {
    (50_000.0..110_000.0f64, 250.0..320.0f64, 0.0..0.04f64).prop_map(|(p, t, q)| AtmosphereState {
        pressure_pa: p,
        temperature_k: t,
        water_mixing_ratio: q,
    })
}

fn weather() -> impl Strategy<Value = WeatherState> {
    (0.0..150.0f64, 0.0..2.0f64).prop_map(|(r, m)| WeatherState {
        rain_rate_mm_h: r,
        fog_liquid_water_g_m3: m,
    })
}

#[test]
fn bundled_fixture_round_trips_field_by_field() {
    for (i, record) in bundled_catalog_text().lines().enumerate() {
        let line = parse_line_record(record).unwrap();
        let back = format_line_record(&line);
        let again = parse_line_record(&back).unwrap();
        assert_eq!(line, again, "record {}", i + 1);
        // the ignored columns are not echoed, the parsed ones are bit-exact
        for range in [0..3, 3..15, 15..25, 35..40, 40..45, 45..55, 55..59] {
            assert_eq!(
                &record[range.clone()],
                &back[range.clone()],
                "record {} cols {range:?}",
                i + 1
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parser_round_trip(
        iso in 1u8..10,
        wavenumber in 0.1..100.0f64,
        mantissa in 1.0..9.999f64,
        exponent in -28i32..-18,
        air in 0.001..0.2f64,
        selfw in 0.01..0.9f64,
        energy in 0.0..5000.0f64,
        n in 0.0..1.0f64,
    ) {
        // quantize to the column precisions first
        let q = |x: f64, d: i32| (x * 10f64.powi(d)).round() / 10f64.powi(d);
        let line = SpectralLine {
            molecule_id: 1,
            isotopologue_id: iso,
            center_frequency_ghz: q(wavenumber, 6) * 29.979_245_8,
            intensity: q(mantissa, 3) * 10f64.powi(exponent),
            air_halfwidth: q(air, 4).max(0.0001),
            self_halfwidth: q(selfw, 3).max(0.001),
            lower_state_energy: q(energy, 4),
            temperature_exponent: q(n, 2),
        };
        let record = format_line_record(&line);
        prop_assert_eq!(record.len(), 160);
        let parsed = parse_line_record(&record).unwrap();
        prop_assert_eq!(format_line_record(&parsed), record);
        prop_assert!((parsed.center_frequency_ghz - line.center_frequency_ghz).abs() < 1e-9);
        prop_assert!((parsed.intensity / line.intensity - 1.0).abs() < 1e-12);
        prop_assert_eq!(parsed.air_halfwidth, line.air_halfwidth);
        prop_assert_eq!(parsed.temperature_exponent, line.temperature_exponent);
    }

    #[test]
    fn total_is_sum_of_components(
        f in 1.0..1000.0f64,
        d in 1.0..20_000.0f64,
        atm in atmosphere(),
        w in weather(),
    ) {
        let cat = bundled_catalog();
        let l = channel::total_loss(f, d, &atm, &w, &cat).unwrap();
        let sum = l.fspl_db + l.absorption_db + l.rain_db + l.fog_db;
        prop_assert!((l.total_db - sum).abs() < 1e-9);
        for c in [l.fspl_db, l.absorption_db, l.rain_db, l.fog_db] {
            prop_assert!(c >= 0.0);
        }
    }

    #[test]
    fn loss_grows_with_distance(
        f in 1.0..1000.0f64,
        d in 1.0..10_000.0f64,
        extra in 0.1..10_000.0f64,
        atm in atmosphere(),
        w in weather(),
    ) {
        let cat = bundled_catalog();
        let near = channel::total_loss(f, d, &atm, &w, &cat).unwrap();
        let far = channel::total_loss(f, d + extra, &atm, &w, &cat).unwrap();
        prop_assert!(far.total_db > near.total_db);
        prop_assert!(far.absorption_db >= near.absorption_db);
        prop_assert!(far.rain_db >= near.rain_db);
        prop_assert!(far.fog_db >= near.fog_db);
    }

    #[test]
    fn rain_non_decreasing_in_rate(f in 1.0..1000.0f64, r in 0.0..200.0f64, dr in 0.0..50.0f64) {
        let a = rain_attenuation_db_per_km(f, r).unwrap();
        let b = rain_attenuation_db_per_km(f, r + dr).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn fog_non_decreasing_in_liquid_water(
        f in 1.0..1000.0f64,
        m in 0.0..3.0f64,
        dm in 0.0..1.0f64,
        t in 250.0..310.0f64,
    ) {
        let a = fog_attenuation_db_per_km(f, m, t).unwrap().db_per_km;
        let b = fog_attenuation_db_per_km(f, m + dm, t).unwrap().db_per_km;
        prop_assert!(b >= a);
    }

    #[test]
    fn absorption_scales_with_mixing_ratio_when_self_width_matches(
        f in 1.0..1000.0f64,
        q in 0.001..0.03f64,
        k in 1.1..3.0f64,
    ) {
        // with γ_self = γ_air the width no longer depends on q, so k ∝ q
        let lines: Vec<SpectralLine> = bundled_catalog()
            .lines()
            .iter()
            .map(|l| SpectralLine { self_halfwidth: l.air_halfwidth, ..*l })
            .collect();
        let cat = LineCatalog::new(lines, "equal widths").unwrap();
        let base = AtmosphereState::default();
        let a = channel::absorption_coefficient(f, &cat, &base.with_mixing_ratio(q)).unwrap();
        let b = channel::absorption_coefficient(f, &cat, &base.with_mixing_ratio(q * k)).unwrap();
        prop_assert!((b / a - k).abs() < 1e-9 * k);
    }

    #[test]
    fn selection_invariant_under_common_offset(
        snr in -10.0..40.0f64,
        offset in -5.0..5.0f64,
        cap_exp in 2u32..8,
    ) {
        let ladder = qam_ladder(128, 2e-2).unwrap();
        let shifted: Vec<ModulationScheme> = ladder
            .iter()
            .map(|s| ModulationScheme { required_snr_db: s.required_snr_db + offset, ..*s })
            .collect();
        let cap = 1u32 << cap_exp;
        let a = max_modulation(snr, &ladder, cap).unwrap().map(|s| s.order);
        let b = max_modulation(snr + offset, &shifted, cap).unwrap().map(|s| s.order);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn snr_is_affine_in_power_and_loss(
        p in -20.0..20.0f64,
        dp in -10.0..10.0f64,
        loss in 50.0..250.0f64,
        dl in -20.0..20.0f64,
    ) {
        let s = LinkScenario { tx_power_dbm: p, ..LinkScenario::backhaul() };
        let mk = |total: f64| channel::LossBreakdown {
            frequency_ghz: 300.0,
            distance_m: 1000.0,
            fspl_db: total,
            absorption_db: 0.0,
            rain_db: 0.0,
            fog_db: 0.0,
            total_db: total,
            fog_extrapolated: false,
        };
        let base = snr_db(&s, &mk(loss)).unwrap();
        let more_power = snr_db(&LinkScenario { tx_power_dbm: p + dp, ..s }, &mk(loss)).unwrap();
        let more_loss = snr_db(&s, &mk(loss + dl)).unwrap();
        prop_assert!((more_power - base - dp).abs() < 1e-9);
        prop_assert!((base - more_loss - dl).abs() < 1e-9);
    }

    #[test]
    fn rate_non_increasing_with_distance(
        mut distances in prop::collection::vec(1.0..20_000.0f64, 2..12),
        q in 0.0..0.03f64,
        w in weather(),
    ) {
        distances.sort_by(f64::total_cmp);
        distances.dedup();
        prop_assume!(distances.len() >= 2);
        let atm = AtmosphereState::default().with_mixing_ratio(q);
        let points = rate_vs_distance(&LinkScenario::backhaul(), &distances, &atm, &w, &bundled_catalog()).unwrap();
        for pair in points.windows(2) {
            prop_assert!(pair[1].net_rate_gbps <= pair[0].net_rate_gbps);
            prop_assert!(pair[1].snr_db < pair[0].snr_db);
        }
    }
}
