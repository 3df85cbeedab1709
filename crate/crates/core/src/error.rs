use thiserror::Error;

/// Failures raised by the modeling and simulation routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty grid")]
    EmptyGrid,

    #[error("equilibrium phase did not converge at flux fraction {flux} (|u'| = {residual:e})")]
    ConvergenceFailure { flux: f64, residual: f64 },

    #[error("non-positive potential curvature c2 = {c2:e} at flux fraction {flux}")]
    NonPositiveStiffness { flux: f64, c2: f64 },

    #[error("c4 keeps one sign over flux fractions [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("target {target_hz} Hz outside tunable range [{min_hz}, {max_hz}] Hz")]
    OutOfTunableRange {
        target_hz: f64,
        min_hz: f64,
        max_hz: f64,
    },

    #[error("coil calibration currents coincide ({current} A)")]
    DegenerateCalibration { current: f64 },

    #[error("prototype order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("resonator at {resonator_hz} Hz is detuned from prototype center {center_hz} Hz")]
    FrequencyMismatch { resonator_hz: f64, center_hz: f64 },

    #[error("cascade of zero two-ports")]
    EmptyCascade,

    #[error("singular network at {frequency_hz} Hz")]
    SingularNetwork { frequency_hz: f64 },

    #[error("target gain needs pump at or beyond the instability point r_p = {critical_rp} ohm")]
    Unstable { critical_rp: f64 },

    #[error("pump calibration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, name: &'static str, reason: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: reason.into(),
        })
    }
}
