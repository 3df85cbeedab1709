//! Design and simulation of impedance-matched SNAIL parametric amplifiers.
//!
//! - [`snail`]: single-cell potential, Taylor coefficients, nonlinearities.
//! - [`array`]: series array resonator, flux tuning and its inverse.
//! - [`synthesis`]: λ/4 + λ/2 transformer from a Chebyshev prototype.
//! - [`network`]: chain-matrix reflection model, gain, bandwidth, pump
//!   calibration and saturation scaling.
//!
//! Sweeps go through [`sweep`], which runs on rayon when the `parallel`
//! feature is enabled (the default) and sequentially otherwise.

pub mod array;
pub mod constants;
pub mod error;
pub mod network;
pub mod snail;
pub mod sweep;
pub mod synthesis;

pub use array::{ArraySpec, CoilCalibration, TunabilityCurve};
pub use error::{Error, Result};
pub use network::{Band, DeviceDesign, GainProfile, GainSample, TwoPortMatrix};
pub use snail::{FluxBias, FluxInterval, KerrModel, SnailParams, TaylorCoefficients};
pub use synthesis::{PrototypeSpec, TransformerDesign};
