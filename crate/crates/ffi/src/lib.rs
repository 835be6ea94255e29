//! C ABI over `thzlink`.
//!
//! Every fallible function returns a [`ThzStatus`] and writes its result
//! through an out-pointer. On failure, [`thz_last_error`] holds a message for
//! the calling thread. Catalogs are opaque handles released with
//! [`thz_catalog_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thzlink::channel::{self, AtmosphereState, ChannelError, LossBreakdown, WeatherState};
use thzlink::linkbudget::{self, LinkError, LinkScenario};
use thzlink::spectroscopy::{self, LineCatalog, SpectroscopyError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CatalogError = 3,
    NumericalError = 4,
    Panic = 5,
}

/// Opaque line catalog.
pub struct ThzCatalog(LineCatalog);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ThzAtmosphere {
    pub pressure_pa: f64,
    pub temperature_k: f64,
    pub water_mixing_ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ThzWeather {
    pub rain_rate_mm_h: f64,
    pub fog_liquid_water_g_m3: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ThzLoss {
    pub frequency_ghz: f64,
    pub distance_m: f64,
    pub fspl_db: f64,
    pub absorption_db: f64,
    pub rain_db: f64,
    pub fog_db: f64,
    pub total_db: f64,
    pub fog_extrapolated: bool,
}

/// Backhaul link parameters; see [`thz_link_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ThzLinkParams {
    pub carrier_frequency_ghz: f64,
    pub symbol_rate_gbd: f64,
    pub noise_bandwidth_ghz: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub noise_figure_db: f64,
    pub implementation_margin_db: f64,
    pub code_rate: f64,
    pub polarizations: u8,
    pub max_qam_order: u32,
    pub target_ber: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ThzRatePoint {
    pub distance_m: f64,
    pub snr_db: f64,
    /// 0 on outage.
    pub qam_order: u32,
    pub net_rate_gbps: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ThzStatus, String);

impl From<ChannelError> for Failure {
    fn from(e: ChannelError) -> Self {
        let status = match e {
            ChannelError::NonPositiveInput { .. }
            | ChannelError::InvalidAtmosphere(_)
            | ChannelError::InvalidWeather(_)
            | ChannelError::InvalidGrid(_) => ThzStatus::InvalidArgument,
            _ => ThzStatus::NumericalError,
        };
        Self(status, e.to_string())
    }
}

impl From<LinkError> for Failure {
    fn from(e: LinkError) -> Self {
        let status = match e {
            LinkError::NoSolution { .. } => ThzStatus::NumericalError,
            LinkError::Channel(ref c) => return Self(Failure::from(c.clone()).0, e.to_string()),
            _ => ThzStatus::InvalidArgument,
        };
        Self(status, e.to_string())
    }
}

impl From<SpectroscopyError> for Failure {
    fn from(e: SpectroscopyError) -> Self {
        let status = match e {
            SpectroscopyError::EmptyBand { .. } => ThzStatus::InvalidArgument,
            _ => ThzStatus::CatalogError,
        };
        Self(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(ThzStatus::NullPointer, format!("{name} is null"))
}

/// Runs `body`, records any failure or panic, and returns the status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ThzStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ThzStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside thzlink".to_string());
            ThzStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn catalog_ref<'a>(catalog: *const ThzCatalog) -> Result<&'a LineCatalog, Failure> {
    catalog
        .as_ref()
        .map(|c| &c.0)
        .ok_or_else(|| null("catalog"))
}

impl From<ThzAtmosphere> for AtmosphereState {
    fn from(a: ThzAtmosphere) -> Self {
        Self {
            pressure_pa: a.pressure_pa,
            temperature_k: a.temperature_k,
            water_mixing_ratio: a.water_mixing_ratio,
        }
    }
}

impl From<ThzWeather> for WeatherState {
    fn from(w: ThzWeather) -> Self {
        Self {
            rain_rate_mm_h: w.rain_rate_mm_h,
            fog_liquid_water_g_m3: w.fog_liquid_water_g_m3,
        }
    }
}

impl From<LossBreakdown> for ThzLoss {
    fn from(l: LossBreakdown) -> Self {
        Self {
            frequency_ghz: l.frequency_ghz,
            distance_m: l.distance_m,
            fspl_db: l.fspl_db,
            absorption_db: l.absorption_db,
            rain_db: l.rain_db,
            fog_db: l.fog_db,
            total_db: l.total_db,
            fog_extrapolated: l.fog_extrapolated,
        }
    }
}

impl From<ThzLinkParams> for LinkScenario {
    fn from(p: ThzLinkParams) -> Self {
        Self {
            carrier_frequency_ghz: p.carrier_frequency_ghz,
            symbol_rate_gbd: p.symbol_rate_gbd,
            noise_bandwidth_ghz: p.noise_bandwidth_ghz,
            tx_power_dbm: p.tx_power_dbm,
            tx_antenna: linkbudget::AntennaGain::Fixed { dbi: p.tx_gain_dbi },
            rx_antenna: linkbudget::AntennaGain::Fixed { dbi: p.rx_gain_dbi },
            noise_figure_db: p.noise_figure_db,
            implementation_margin_db: p.implementation_margin_db,
            code_rate: p.code_rate,
            polarizations: p.polarizations,
            max_qam_order: p.max_qam_order,
            target_ber: p.target_ber,
        }
    }
}

/// Message for the last failed call on this thread, or NULL after a success.
/// Valid until the next `thz_*` call on the same thread.
#[no_mangle]
pub extern "C" fn thz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn thz_status_str(status: ThzStatus) -> *const c_char {
    let s: &'static CStr = match status {
        ThzStatus::Ok => c"ok",
        ThzStatus::NullPointer => c"null pointer argument",
        ThzStatus::InvalidArgument => c"invalid argument",
        ThzStatus::CatalogError => c"catalog error",
        ThzStatus::NumericalError => c"numerical failure",
        ThzStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Bundled water-vapour catalog.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn thz_catalog_bundled(out: *mut *mut ThzCatalog) -> ThzStatus {
    guard(|| {
        let handle = Box::into_raw(Box::new(ThzCatalog(spectroscopy::bundled_catalog())));
        write(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// Loads lines of `molecule` with centres in `[band_lo_ghz, band_hi_ghz]` from a `.par` file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thz_catalog_load(
    path: *const c_char,
    molecule: u8,
    band_lo_ghz: f64,
    band_hi_ghz: f64,
    out: *mut *mut ThzCatalog,
) -> ThzStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|e| {
            Failure(
                ThzStatus::InvalidArgument,
                format!("path is not UTF-8: {e}"),
            )
        })?;
        let file = File::open(path)
            .map_err(|e| Failure(ThzStatus::CatalogError, format!("{path}: {e}")))?;
        let catalog = spectroscopy::load_catalog(
            BufReader::new(file),
            molecule,
            (band_lo_ghz, band_hi_ghz),
            path,
        )?;
        write(out, Box::into_raw(Box::new(ThzCatalog(catalog))), "out")
    })
}

/// Number of lines; 0 for a NULL handle.
///
/// # Safety
/// `catalog` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_catalog_len(catalog: *const ThzCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.0.len())
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `catalog` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thz_catalog_free(catalog: *mut ThzCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// 296 K, 1 atm, mixing ratio 0.01.
#[no_mangle]
pub extern "C" fn thz_atmosphere_default() -> ThzAtmosphere {
    let a = AtmosphereState::default();
    ThzAtmosphere {
        pressure_pa: a.pressure_pa,
        temperature_k: a.temperature_k,
        water_mixing_ratio: a.water_mixing_ratio,
    }
}

/// 300 GHz, 64 Gbd, 0 dBm, 55 dBi at both ends, NF 10 dB, 128-QAM cap.
#[no_mangle]
pub extern "C" fn thz_link_params_default() -> ThzLinkParams {
    let s = LinkScenario::backhaul();
    let gain = |a: linkbudget::AntennaGain| {
        a.gain_dbi(s.carrier_frequency_ghz)
            .expect("backhaul gains are valid")
    };
    ThzLinkParams {
        carrier_frequency_ghz: s.carrier_frequency_ghz,
        symbol_rate_gbd: s.symbol_rate_gbd,
        noise_bandwidth_ghz: s.noise_bandwidth_ghz,
        tx_power_dbm: s.tx_power_dbm,
        tx_gain_dbi: gain(s.tx_antenna),
        rx_gain_dbi: gain(s.rx_antenna),
        noise_figure_db: s.noise_figure_db,
        implementation_margin_db: s.implementation_margin_db,
        code_rate: s.code_rate,
        polarizations: s.polarizations,
        max_qam_order: s.max_qam_order,
        target_ber: s.target_ber,
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thz_fspl_db(
    frequency_ghz: f64,
    distance_m: f64,
    out: *mut f64,
) -> ThzStatus {
    guard(|| write(out, channel::fspl_db(frequency_ghz, distance_m)?, "out"))
}

/// All loss components at one frequency and distance.
///
/// # Safety
/// `catalog` must be a live handle; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thz_total_loss(
    catalog: *const ThzCatalog,
    frequency_ghz: f64,
    distance_m: f64,
    atmosphere: *const ThzAtmosphere,
    weather: *const ThzWeather,
    out: *mut ThzLoss,
) -> ThzStatus {
    guard(|| {
        let catalog = catalog_ref(catalog)?;
        let atmosphere = atmosphere.as_ref().ok_or_else(|| null("atmosphere"))?;
        let weather = weather.as_ref().ok_or_else(|| null("weather"))?;
        let loss = channel::total_loss(
            frequency_ghz,
            distance_m,
            &(*atmosphere).into(),
            &(*weather).into(),
            catalog,
        )?;
        write(out, loss.into(), "out")
    })
}

/// SNR in dB at which M-QAM reaches `target_ber`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thz_required_snr_db(
    order: u32,
    target_ber: f64,
    out: *mut f64,
) -> ThzStatus {
    guard(|| {
        write(
            out,
            linkbudget::required_snr_for_ber(order, target_ber)?,
            "out",
        )
    })
}

/// Selected modulation and net rate at one distance on the carrier.
///
/// # Safety
/// `catalog` must be a live handle; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thz_rate_at_distance(
    catalog: *const ThzCatalog,
    params: *const ThzLinkParams,
    distance_m: f64,
    atmosphere: *const ThzAtmosphere,
    weather: *const ThzWeather,
    out: *mut ThzRatePoint,
) -> ThzStatus {
    guard(|| {
        let catalog = catalog_ref(catalog)?;
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let atmosphere = atmosphere.as_ref().ok_or_else(|| null("atmosphere"))?;
        let weather = weather.as_ref().ok_or_else(|| null("weather"))?;
        let point = linkbudget::rate_vs_distance(
            &(*params).into(),
            &[distance_m],
            &(*atmosphere).into(),
            &(*weather).into(),
            catalog,
        )?[0];
        write(
            out,
            ThzRatePoint {
                distance_m: point.distance_m,
                snr_db: point.snr_db,
                qam_order: point.selected_order.unwrap_or(0),
                net_rate_gbps: point.net_rate_gbps,
            },
            "out",
        )
    })
}
