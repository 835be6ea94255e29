//! HITRAN 2004 `.par` line records and water-vapour line catalogs.
//!
//! Each record is a 160-character fixed-width line. Only the fields the
//! line-by-line absorption model needs are kept; Einstein-A, pressure shift
//! and the quantum labels are sliced out positionally and dropped.
//!
//! | columns | field                                   |
//! |---------|-----------------------------------------|
//! | 1-2     | molecule id                             |
//! | 3       | isotopologue id                         |
//! | 4-15    | vacuum wavenumber (cm⁻¹)                |
//! | 16-25   | intensity at 296 K (cm⁻¹/(molecule·cm⁻²)) |
//! | 26-35   | Einstein-A (ignored)                    |
//! | 36-40   | air-broadened HWHM (cm⁻¹/atm)           |
//! | 41-45   | self-broadened HWHM (cm⁻¹/atm)          |
//! | 46-55   | lower-state energy (cm⁻¹)               |
//! | 56-59   | air-width temperature exponent          |
//! | 60-67   | pressure shift (ignored)                |
//! | 68-160  | quantum labels, error codes, refs (ignored) |

use std::io::BufRead;
use std::ops::Range;

use thiserror::Error;

/// GHz per cm⁻¹ (speed of light in cm/ns).
pub const GHZ_PER_WAVENUMBER: f64 = 29.979_245_8;

/// Length of one HITRAN 2004 record, excluding the line terminator.
pub const RECORD_LEN: usize = 160;

/// HITRAN molecule number for water.
pub const WATER: u8 = 1;

const MOLECULE: Range<usize> = 0..2;
const ISOTOPOLOGUE: Range<usize> = 2..3;
const WAVENUMBER: Range<usize> = 3..15;
const INTENSITY: Range<usize> = 15..25;
const EINSTEIN_A: Range<usize> = 25..35;
const AIR_WIDTH: Range<usize> = 35..40;
const SELF_WIDTH: Range<usize> = 40..45;
const LOWER_ENERGY: Range<usize> = 45..55;
const TEMP_EXPONENT: Range<usize> = 55..59;
const PRESSURE_SHIFT: Range<usize> = 59..67;

static BUNDLED_PAR: &str = include_str!("../data/h2o_lines.par");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectroscopyError {
    #[error("line {}: malformed record: {reason}", line.map_or_else(|| "?".to_string(), |l| l.to_string()))]
    MalformedRecord { line: Option<usize>, reason: String },
    #[error("line {}: air-broadened half-width must be positive, got {width}", line.map_or_else(|| "?".to_string(), |l| l.to_string()))]
    NonPositiveWidth { line: Option<usize>, width: f64 },
    #[error(
        "empty band: lower edge {lo} GHz must be below upper edge {hi} GHz (and non-negative)"
    )]
    EmptyBand { lo: f64, hi: f64 },
    #[error("failed to read catalog: {0}")]
    Io(String),
}

impl SpectroscopyError {
    fn at_line(self, index: usize) -> Self {
        match self {
            Self::MalformedRecord { reason, .. } => Self::MalformedRecord {
                line: Some(index),
                reason,
            },
            Self::NonPositiveWidth { width, .. } => Self::NonPositiveWidth {
                line: Some(index),
                width,
            },
            other => other,
        }
    }
}

/// Spectroscopic parameters of one absorption line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub molecule_id: u8,
    pub isotopologue_id: u8,
    /// Line centre in GHz.
    pub center_frequency_ghz: f64,
    /// Intensity at 296 K, cm⁻¹/(molecule·cm⁻²).
    pub intensity: f64,
    /// Air-broadened HWHM at 296 K, cm⁻¹/atm.
    pub air_halfwidth: f64,
    /// Self-broadened HWHM at 296 K, cm⁻¹/atm.
    pub self_halfwidth: f64,
    /// Lower-state energy, cm⁻¹.
    pub lower_state_energy: f64,
    /// Temperature exponent of the air-broadened width.
    pub temperature_exponent: f64,
}

impl SpectralLine {
    pub fn wavenumber(&self) -> f64 {
        self.center_frequency_ghz / GHZ_PER_WAVENUMBER
    }

    fn validate(&self) -> Result<(), SpectroscopyError> {
        let malformed = |reason: &str| SpectroscopyError::MalformedRecord {
            line: None,
            reason: reason.to_string(),
        };
        if !(self.center_frequency_ghz >= 0.0) || !self.center_frequency_ghz.is_finite() {
            return Err(malformed("wavenumber must be finite and non-negative"));
        }
        if !(self.intensity >= 0.0) || !self.intensity.is_finite() {
            return Err(malformed("intensity must be finite and non-negative"));
        }
        if !(self.air_halfwidth > 0.0) {
            return Err(SpectroscopyError::NonPositiveWidth {
                line: None,
                width: self.air_halfwidth,
            });
        }
        if !(self.self_halfwidth >= 0.0) {
            return Err(malformed("self-broadened half-width must be non-negative"));
        }
        if !self.lower_state_energy.is_finite() || !self.temperature_exponent.is_finite() {
            return Err(malformed(
                "non-finite lower-state energy or temperature exponent",
            ));
        }
        Ok(())
    }
}

fn field<'a>(
    record: &'a str,
    cols: Range<usize>,
    name: &str,
) -> Result<&'a str, SpectroscopyError> {
    record
        .get(cols)
        .ok_or_else(|| SpectroscopyError::MalformedRecord {
            line: None,
            reason: format!("{name} field is not on a character boundary"),
        })
}

fn numeric<T: std::str::FromStr>(
    record: &str,
    cols: Range<usize>,
    name: &str,
) -> Result<T, SpectroscopyError> {
    let raw = field(record, cols, name)?.trim();
    raw.parse().map_err(|_| SpectroscopyError::MalformedRecord {
        line: None,
        reason: format!("{name} field {raw:?} is not numeric"),
    })
}

/// Parses one 160-character HITRAN 2004 record.
pub fn parse_line_record(record: &str) -> Result<SpectralLine, SpectroscopyError> {
    let record = record.strip_suffix('\r').unwrap_or(record);
    if record.len() != RECORD_LEN || record.chars().count() != RECORD_LEN {
        return Err(SpectroscopyError::MalformedRecord {
            line: None,
            reason: format!(
                "expected {RECORD_LEN} characters, got {}",
                record.chars().count()
            ),
        });
    }
    // positional but unused
    field(record, EINSTEIN_A, "Einstein-A")?;
    field(record, PRESSURE_SHIFT, "pressure shift")?;

    let wavenumber: f64 = numeric(record, WAVENUMBER, "wavenumber")?;
    let line = SpectralLine {
        molecule_id: numeric(record, MOLECULE, "molecule id")?,
        isotopologue_id: numeric(record, ISOTOPOLOGUE, "isotopologue id")?,
        center_frequency_ghz: wavenumber * GHZ_PER_WAVENUMBER,
        intensity: numeric(record, INTENSITY, "intensity")?,
        air_halfwidth: numeric(record, AIR_WIDTH, "air half-width")?,
        self_halfwidth: numeric(record, SELF_WIDTH, "self half-width")?,
        lower_state_energy: numeric(record, LOWER_ENERGY, "lower-state energy")?,
        temperature_exponent: numeric(record, TEMP_EXPONENT, "temperature exponent")?,
    };
    line.validate()?;
    Ok(line)
}

/// Fortran `Ew.d` with a signed two-digit exponent, e.g. ` 8.269E-23`.
fn format_exp(value: f64, width: usize, precision: usize) -> String {
    let s = format!("{value:.precision$E}");
    let (mantissa, exp) = s.split_once('E').expect("E format");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{:>width$}", format!("{mantissa}E{exp:+03}"))
}

/// Fixed-point that drops the leading zero when it would overflow the field (`.1040`).
fn format_fixed(value: f64, width: usize, precision: usize) -> String {
    let mut s = format!("{value:.precision$}");
    if s.len() > width {
        if let Some(rest) = s.strip_prefix("0.") {
            s = format!(".{rest}");
        } else if let Some(rest) = s.strip_prefix("-0.") {
            s = format!("-.{rest}");
        }
    }
    format!("{s:>width$}")
}

/// Serializes the mandatory fields back into a 160-character record.
///
/// Ignored fields are written as zeros/blanks. Values are rounded to the
/// precision of their columns, so a parsed record round-trips exactly.
pub fn format_line_record(line: &SpectralLine) -> String {
    let mut out = String::with_capacity(RECORD_LEN);
    out.push_str(&format!("{:>2}", line.molecule_id));
    out.push_str(&format!("{:>1}", line.isotopologue_id % 10));
    out.push_str(&format!("{:>12.6}", line.wavenumber()));
    out.push_str(&format_exp(line.intensity, 10, 3));
    out.push_str(&format_exp(0.0, 10, 3));
    out.push_str(&format_fixed(line.air_halfwidth, 5, 4));
    out.push_str(&format_fixed(line.self_halfwidth, 5, 3));
    out.push_str(&format_fixed(line.lower_state_energy, 10, 4));
    out.push_str(&format_fixed(line.temperature_exponent, 4, 2));
    out.push_str(&format_fixed(0.0, 8, 6));
    out.push_str(&" ".repeat(60));
    out.push_str("000000000000000000 ");
    out.push_str(&format!("{:>7.1}{:>7.1}", 0.0, 0.0));
    debug_assert_eq!(out.len(), RECORD_LEN);
    out
}

/// Immutable, frequency-sorted set of lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LineCatalog {
    lines: Vec<SpectralLine>,
    source_label: String,
}

impl LineCatalog {
    /// Builds a catalog, validating and sorting the lines by centre frequency.
    pub fn new(
        mut lines: Vec<SpectralLine>,
        source_label: impl Into<String>,
    ) -> Result<Self, SpectroscopyError> {
        for line in &lines {
            line.validate()?;
        }
        lines.sort_by(|a, b| a.center_frequency_ghz.total_cmp(&b.center_frequency_ghz));
        Ok(Self {
            lines,
            source_label: source_label.into(),
        })
    }

    pub fn empty(source_label: impl Into<String>) -> Self {
        Self {
            lines: Vec::new(),
            source_label: source_label.into(),
        }
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// `(lowest, highest)` centre frequency, or `None` when empty.
    pub fn frequency_range(&self) -> Option<(f64, f64)> {
        Some((
            self.lines.first()?.center_frequency_ghz,
            self.lines.last()?.center_frequency_ghz,
        ))
    }
}

/// Reads records, keeping those of `molecule` whose centre lies in `band` (GHz, inclusive).
///
/// Blank lines are skipped. Any other record that fails to parse aborts the
/// load with its 1-based line number.
pub fn load_catalog<R: BufRead>(
    reader: R,
    molecule: u8,
    band: (f64, f64),
    source_label: impl Into<String>,
) -> Result<LineCatalog, SpectroscopyError> {
    let (lo, hi) = band;
    if !(lo >= 0.0) || !(lo < hi) {
        return Err(SpectroscopyError::EmptyBand { lo, hi });
    }
    let mut lines = Vec::new();
    for (index, text) in reader.lines().enumerate() {
        let text = text.map_err(|e| SpectroscopyError::Io(e.to_string()))?;
        if text.trim().is_empty() {
            continue;
        }
        let line = parse_line_record(&text).map_err(|e| e.at_line(index + 1))?;
        if line.molecule_id == molecule
            && line.center_frequency_ghz >= lo
            && line.center_frequency_ghz <= hi
        {
            lines.push(line);
        }
    }
    LineCatalog::new(lines, source_label)
}

/// Raw text of the bundled water-line fixture (34 lines, 22–988 GHz).
pub fn bundled_catalog_text() -> &'static str {
    BUNDLED_PAR
}

/// The bundled water-vapour catalog, all lines.
pub fn bundled_catalog() -> LineCatalog {
    load_catalog(
        BUNDLED_PAR.as_bytes(),
        WATER,
        (0.0, 1100.0),
        "bundled:h2o_lines.par",
    )
    .expect("bundled fixture is well-formed")
}
