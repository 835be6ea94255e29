#ifndef THZLINK_H
#define THZLINK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThzStatus {
  THZ_STATUS_OK = 0,
  THZ_STATUS_NULL_POINTER = 1,
  THZ_STATUS_INVALID_ARGUMENT = 2,
  THZ_STATUS_CATALOG_ERROR = 3,
  THZ_STATUS_NUMERICAL_ERROR = 4,
  THZ_STATUS_PANIC = 5,
} ThzStatus;

/**
 * Opaque line catalog.
 */
typedef struct ThzCatalog ThzCatalog;

typedef struct ThzAtmosphere {
  double pressure_pa;
  double temperature_k;
  double water_mixing_ratio;
} ThzAtmosphere;

/**
 * Backhaul link parameters; see [`thz_link_params_default`].
 */
typedef struct ThzLinkParams {
  double carrier_frequency_ghz;
  double symbol_rate_gbd;
  double noise_bandwidth_ghz;
  double tx_power_dbm;
  double tx_gain_dbi;
  double rx_gain_dbi;
  double noise_figure_db;
  double implementation_margin_db;
  double code_rate;
  uint8_t polarizations;
  uint32_t max_qam_order;
  double target_ber;
} ThzLinkParams;

typedef struct ThzWeather {
  double rain_rate_mm_h;
  double fog_liquid_water_g_m3;
} ThzWeather;

typedef struct ThzLoss {
  double frequency_ghz;
  double distance_m;
  double fspl_db;
  double absorption_db;
  double rain_db;
  double fog_db;
  double total_db;
  bool fog_extrapolated;
} ThzLoss;

typedef struct ThzRatePoint {
  double distance_m;
  double snr_db;
  /**
   * 0 on outage.
   */
  uint32_t qam_order;
  double net_rate_gbps;
} ThzRatePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * Valid until the next `thz_*` call on the same thread.
 */
const char *thz_last_error(void);

/**
 * Static description of a status code.
 */
const char *thz_status_str(enum ThzStatus status);

/**
 * Bundled water-vapour catalog.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum ThzStatus thz_catalog_bundled(struct ThzCatalog **out);

/**
 * Loads lines of `molecule` with centres in `[band_lo_ghz, band_hi_ghz]` from a `.par` file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ThzStatus thz_catalog_load(const char *path,
                                uint8_t molecule,
                                double band_lo_ghz,
                                double band_hi_ghz,
                                struct ThzCatalog **out);

/**
 * Number of lines; 0 for a NULL handle.
 *
 * # Safety
 * `catalog` must be NULL or a live handle.
 */
size_t thz_catalog_len(const struct ThzCatalog *catalog);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `catalog` must be NULL or a handle not yet freed.
 */
void thz_catalog_free(struct ThzCatalog *catalog);

/**
 * 296 K, 1 atm, mixing ratio 0.01.
 */
struct ThzAtmosphere thz_atmosphere_default(void);

/**
 * 300 GHz, 64 Gbd, 0 dBm, 55 dBi at both ends, NF 10 dB, 128-QAM cap.
 */
struct ThzLinkParams thz_link_params_default(void);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum ThzStatus thz_fspl_db(double frequency_ghz, double distance_m, double *out);

/**
 * All loss components at one frequency and distance.
 *
 * # Safety
 * `catalog` must be a live handle; the other pointers must be valid.
 */
enum ThzStatus thz_total_loss(const struct ThzCatalog *catalog,
                              double frequency_ghz,
                              double distance_m,
                              const struct ThzAtmosphere *atmosphere,
                              const struct ThzWeather *weather,
                              struct ThzLoss *out);

/**
 * SNR in dB at which M-QAM reaches `target_ber`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ThzStatus thz_required_snr_db(uint32_t order, double target_ber, double *out);

/**
 * Selected modulation and net rate at one distance on the carrier.
 *
 * # Safety
 * `catalog` must be a live handle; the other pointers must be valid.
 */
enum ThzStatus thz_rate_at_distance(const struct ThzCatalog *catalog,
                                    const struct ThzLinkParams *params,
                                    double distance_m,
                                    const struct ThzAtmosphere *atmosphere,
                                    const struct ThzWeather *weather,
                                    struct ThzRatePoint *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THZLINK_H */
