//! Terahertz wireless link planning.
//!
//! * [`spectroscopy`]: HITRAN `.par` ingestion into water-line catalogs.
//! * [`channel`]: free-space, line-by-line absorption, rain and fog losses.
//! * [`linkbudget`]: SNR, QAM selection at a BER threshold, net rates over distance.
//! * [`arrays`]: pencil-beam sub-array rate vs element count and opening angle.
//! * [`windows`]: low-absorption windows and distance-aware band selection.
//! * [`config`] / [`cli`]: scenario files and the CSV-emitting commands.

// NaN must fail every range check, so `!(x > 0.0)` is used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arrays;
pub mod channel;
pub mod cli;
pub mod config;
pub mod linkbudget;
pub mod spectroscopy;
pub mod windows;

pub use channel::{AtmosphereState, LossBreakdown, LossSpectrum, WeatherState};
pub use linkbudget::{LinkScenario, ModulationScheme, RatePoint};
pub use spectroscopy::{LineCatalog, SpectralLine};
