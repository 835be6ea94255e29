use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use thzlink_ffi::*;

fn last_error() -> Option<String> {
    let p = thz_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn bundled() -> *mut ThzCatalog {
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { thz_catalog_bundled(&mut cat) }, ThzStatus::Ok);
    assert!(!cat.is_null());
    cat
}

#[test]
fn bundled_catalog_handle_lifecycle() {
    let cat = bundled();
    assert_eq!(unsafe { thz_catalog_len(cat) }, 34);
    unsafe { thz_catalog_free(cat) };
    unsafe { thz_catalog_free(ptr::null_mut()) };
    assert_eq!(unsafe { thz_catalog_len(ptr::null()) }, 0);
}

#[test]
fn fspl_matches_closed_form() {
    let mut v = 0.0;
    assert_eq!(unsafe { thz_fspl_db(300.0, 1000.0, &mut v) }, ThzStatus::Ok);
    let want = 20.0 * (4.0 * std::f64::consts::PI * 1000.0 * 300e9 / 299_792_458.0).log10();
    assert!((v - want).abs() < 1e-12);
    assert!(last_error().is_none());
}

#[test]
fn invalid_input_sets_status_and_message() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { thz_fspl_db(-1.0, 1000.0, &mut v) },
        ThzStatus::InvalidArgument
    );
    assert!(last_error().unwrap().contains("frequency"));
    assert_eq!(
        unsafe { thz_fspl_db(300.0, 1.0, ptr::null_mut()) },
        ThzStatus::NullPointer
    );
    assert_eq!(
        unsafe { thz_required_snr_db(5, 0.02, &mut v) },
        ThzStatus::InvalidArgument
    );
    // success clears the message
    assert_eq!(unsafe { thz_fspl_db(300.0, 1.0, &mut v) }, ThzStatus::Ok);
    assert!(last_error().is_none());
}

#[test]
fn total_loss_components_add_up() {
    let cat = bundled();
    let atm = thz_atmosphere_default();
    let weather = ThzWeather {
        rain_rate_mm_h: 50.0,
        fog_liquid_water_g_m3: 0.5,
    };
    let mut loss = ThzLoss::default();
    let status = unsafe { thz_total_loss(cat, 300.0, 1000.0, &atm, &weather, &mut loss) };
    assert_eq!(status, ThzStatus::Ok);
    let sum = loss.fspl_db + loss.absorption_db + loss.rain_db + loss.fog_db;
    assert!((loss.total_db - sum).abs() < 1e-9);
    assert!(loss.rain_db > 0.0 && loss.fog_db > 0.0 && loss.fog_extrapolated);

    let status = unsafe { thz_total_loss(ptr::null(), 300.0, 1000.0, &atm, &weather, &mut loss) };
    assert_eq!(status, ThzStatus::NullPointer);
    unsafe { thz_catalog_free(cat) };
}

#[test]
fn rate_matches_library() {
    let cat = bundled();
    let params = thz_link_params_default();
    let atm = thz_atmosphere_default();
    let clear = ThzWeather {
        rain_rate_mm_h: 0.0,
        fog_liquid_water_g_m3: 0.0,
    };
    let mut near = ThzRatePoint::default();
    let mut far = ThzRatePoint::default();
    unsafe {
        assert_eq!(
            thz_rate_at_distance(cat, &params, 10.0, &atm, &clear, &mut near),
            ThzStatus::Ok
        );
        assert_eq!(
            thz_rate_at_distance(cat, &params, 1e5, &atm, &clear, &mut far),
            ThzStatus::Ok
        );
        thz_catalog_free(cat);
    }
    assert_eq!(near.qam_order, 128);
    let want = thzlink::linkbudget::rate_vs_distance(
        &thzlink::linkbudget::LinkScenario::backhaul(),
        &[10.0],
        &thzlink::channel::AtmosphereState::default(),
        &thzlink::channel::WeatherState::CLEAR,
        &thzlink::spectroscopy::bundled_catalog(),
    )
    .unwrap()[0];
    assert_eq!(near.net_rate_gbps, want.net_rate_gbps);
    assert_eq!(near.snr_db, want.snr_db);
    assert_eq!(far.qam_order, 0);
    assert_eq!(far.net_rate_gbps, 0.0);
}

#[test]
fn load_catalog_from_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("lines.par");
    std::fs::write(&good, thzlink::spectroscopy::bundled_catalog_text()).unwrap();
    let bad = dir.path().join("bad.par");
    std::fs::write(&bad, "short\n").unwrap();

    let mut cat = ptr::null_mut();
    let path = CString::new(good.to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { thz_catalog_load(path.as_ptr(), 1, 100.0, 400.0, &mut cat) },
        ThzStatus::Ok
    );
    assert_eq!(unsafe { thz_catalog_len(cat) }, 7);
    unsafe { thz_catalog_free(cat) };

    let mut cat = ptr::null_mut();
    let path = CString::new(bad.to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { thz_catalog_load(path.as_ptr(), 1, 0.0, 1000.0, &mut cat) },
        ThzStatus::CatalogError
    );
    assert!(cat.is_null());
    assert!(last_error().unwrap().contains("line 1"));

    let missing = CString::new("/nonexistent/lines.par").unwrap();
    assert_eq!(
        unsafe { thz_catalog_load(missing.as_ptr(), 1, 0.0, 1000.0, &mut cat) },
        ThzStatus::CatalogError
    );
    assert_eq!(
        unsafe { thz_catalog_load(ptr::null(), 1, 0.0, 1000.0, &mut cat) },
        ThzStatus::NullPointer
    );
}

#[test]
fn status_strings_are_static() {
    for s in [ThzStatus::Ok, ThzStatus::CatalogError, ThzStatus::Panic] {
        let text = unsafe { CStr::from_ptr(thz_status_str(s)) };
        assert!(!text.to_bytes().is_empty());
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("thzlink.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "thz_catalog_bundled",
        "thz_catalog_load",
        "thz_catalog_free",
        "thz_total_loss",
        "thz_rate_at_distance",
        "thz_last_error",
        "typedef struct ThzCatalog ThzCatalog;",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"thzlink.h\"\n\
         int f(void) {\n\
           ThzCatalog *c = NULL;\n\
           ThzLoss l;\n\
           ThzAtmosphere a = thz_atmosphere_default();\n\
           ThzWeather w = {0.0, 0.0};\n\
           if (thz_catalog_bundled(&c) != THZ_STATUS_OK) return 1;\n\
           ThzStatus s = thz_total_loss(c, 300.0, 1000.0, &a, &w, &l);\n\
           thz_catalog_free(c);\n\
           return s == THZ_STATUS_OK ? 0 : (int)s;\n\
         }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let Ok(status) = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler ({cc}); header content checks only");
        return;
    };
    assert!(status.success(), "header does not compile as C99");
}
