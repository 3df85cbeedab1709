//! Device specification file (TOML, laboratory units).
//!
//! ```toml
//! source_impedance_ohm = 50.0
//!
//! [snail]
//! alpha = 0.18
//! n_large = 3
//! l_josephson_pH = 80.0
//!
//! [array]
//! m_snails = 67
//! capacitance_fF = 30.0
//! l_stray_pH = 0.0          # optional
//!
//! [transformer]
//! z_quarter_ohm = 87.0
//! z_half_ohm = 59.0
//! center_frequency_GHz = 6.4
//!
//! [[coil_calibration]]      # optional, exactly two entries
//! current_mA = 0.0
//! flux_fraction = 0.0
//! ```
//!
//! Unit conversion to SI happens here and nowhere else.

use std::path::Path;

use impa_core::{ArraySpec, CoilCalibration, SnailParams};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    source_impedance_ohm: f64,
    snail: RawSnail,
    array: RawArray,
    transformer: RawTransformer,
    #[serde(default)]
    coil_calibration: Vec<RawCoilPoint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSnail {
    alpha: f64,
    n_large: u32,
    #[serde(rename = "l_josephson_pH")]
    l_josephson_ph: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArray {
    m_snails: u32,
    #[serde(rename = "capacitance_fF")]
    capacitance_ff: f64,
    #[serde(rename = "l_stray_pH", default)]
    l_stray_ph: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransformer {
    z_quarter_ohm: f64,
    z_half_ohm: f64,
    #[serde(rename = "center_frequency_GHz")]
    center_frequency_ghz: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoilPoint {
    #[serde(rename = "current_mA")]
    current_ma: f64,
    flux_fraction: f64,
}

/// Validated device description in SI units.
#[derive(Debug, Clone)]
pub struct DeviceSpecFile {
    pub array: ArraySpec,
    pub z_quarter: f64,
    pub z_half: f64,
    pub center_frequency: f64,
    pub source_impedance: f64,
    /// `(current A, flux fraction)` pairs.
    pub coil_calibration: Option<[(f64, f64); 2]>,
}

impl DeviceSpecFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read spec {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| toml_error(text, &e))?;

        positive("source_impedance_ohm", raw.source_impedance_ohm)?;
        positive("snail.alpha", raw.snail.alpha)?;
        positive("snail.l_josephson_pH", raw.snail.l_josephson_ph)?;
        positive("array.capacitance_fF", raw.array.capacitance_ff)?;
        finite("array.l_stray_pH", raw.array.l_stray_ph)?;
        positive("transformer.z_quarter_ohm", raw.transformer.z_quarter_ohm)?;
        positive("transformer.z_half_ohm", raw.transformer.z_half_ohm)?;
        positive(
            "transformer.center_frequency_GHz",
            raw.transformer.center_frequency_ghz,
        )?;

        let cell = SnailParams::new(
            raw.snail.alpha,
            raw.snail.n_large,
            raw.snail.l_josephson_ph * 1e-12,
        )
        .map_err(|e| CliError::input(format!("spec: snail: {e}")))?;
        let array = ArraySpec::with_stray(
            cell,
            raw.array.m_snails,
            raw.array.capacitance_ff * 1e-15,
            raw.array.l_stray_ph * 1e-12,
        )
        .map_err(|e| CliError::input(format!("spec: array: {e}")))?;

        let coil_calibration = match raw.coil_calibration.as_slice() {
            [] => None,
            [a, b] => {
                for (i, p) in [a, b].iter().enumerate() {
                    finite(&format!("coil_calibration[{i}].current_mA"), p.current_ma)?;
                    finite(
                        &format!("coil_calibration[{i}].flux_fraction"),
                        p.flux_fraction,
                    )?;
                }
                Some([
                    (a.current_ma * 1e-3, a.flux_fraction),
                    (b.current_ma * 1e-3, b.flux_fraction),
                ])
            }
            other => {
                return Err(CliError::input(format!(
                    "spec: coil_calibration: expected exactly 2 points, got {}",
                    other.len()
                )))
            }
        };

        Ok(Self {
            array,
            z_quarter: raw.transformer.z_quarter_ohm,
            z_half: raw.transformer.z_half_ohm,
            center_frequency: raw.transformer.center_frequency_ghz * 1e9,
            source_impedance: raw.source_impedance_ohm,
            coil_calibration,
        })
    }

    pub fn coil(&self) -> Result<Option<CoilCalibration>, CliError> {
        self.coil_calibration
            .map(|[a, b]| CoilCalibration::new(a, b))
            .transpose()
            .map_err(|e| CliError::input(e.to_string()))
    }
}

/// One-line rendering of a TOML error with a 1-based line and column.
fn toml_error(text: &str, e: &toml::de::Error) -> CliError {
    let message = e.message().trim().replace('\n', " ");
    match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            CliError::input(format!("spec: line {line}, column {col}: {message}"))
        }
        None => CliError::input(format!("spec: {message}")),
    }
}

fn finite(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "spec: {field}: must be finite, got {v}"
        )))
    }
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    finite(field, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "spec: {field}: must be positive, got {v}"
        )))
    }
}
