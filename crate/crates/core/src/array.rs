//! Series SNAIL array closed by a capacitor: inductance, flux-tunable
//! resonance, characteristic impedance, and the inverse flux map.

use std::f64::consts::PI;

use crate::error::{require, Error, Result};
use crate::snail::{cell_inductance, FluxBias, SnailParams};
use crate::sweep;

/// Flux-fraction tolerance of [`flux_for_frequency`].
pub const FLUX_TOL: f64 = 1e-8;
/// Absolute frequency tolerance of [`flux_for_frequency`], Hz.
pub const FREQUENCY_TOL: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArraySpec {
    pub cell: SnailParams,
    m_snails: u32,
    capacitance: f64,
    l_stray: f64,
}

impl ArraySpec {
    pub fn new(cell: SnailParams, m_snails: u32, capacitance: f64) -> Result<Self> {
        Self::with_stray(cell, m_snails, capacitance, 0.0)
    }

    /// `l_stray` is a linear series inductance (henries) added to the array.
    pub fn with_stray(
        cell: SnailParams,
        m_snails: u32,
        capacitance: f64,
        l_stray: f64,
    ) -> Result<Self> {
        require(m_snails >= 1, "m_snails", "must be at least 1")?;
        require(
            capacitance.is_finite() && capacitance > 0.0,
            "capacitance",
            format!("must be positive, got {capacitance}"),
        )?;
        require(
            l_stray.is_finite() && l_stray >= 0.0,
            "l_stray",
            format!("must be non-negative, got {l_stray}"),
        )?;
        Ok(Self {
            cell,
            m_snails,
            capacitance,
            l_stray,
        })
    }

    pub fn m_snails(&self) -> u32 {
        self.m_snails
    }

    pub fn capacitance(&self) -> f64 {
        self.capacitance
    }

    pub fn l_stray(&self) -> f64 {
        self.l_stray
    }
}

/// `M · L_s(Φ) + L_stray`, henries.
pub fn array_inductance(spec: &ArraySpec, flux: FluxBias) -> Result<f64> {
    Ok(f64::from(spec.m_snails) * cell_inductance(flux, &spec.cell)? + spec.l_stray)
}

/// Lumped resonance `1 / (2π sqrt(L_array C))`, Hz.
pub fn resonance_frequency(spec: &ArraySpec, flux: FluxBias) -> Result<f64> {
    let l = array_inductance(spec, flux)?;
    Ok(lc_frequency(l, spec.capacitance))
}

/// `sqrt(L_array / C)`, ohms.
pub fn characteristic_impedance(spec: &ArraySpec, flux: FluxBias) -> Result<f64> {
    let l = array_inductance(spec, flux)?;
    Ok((l / spec.capacitance).sqrt())
}

pub(crate) fn lc_frequency(l: f64, c: f64) -> f64 {
    1.0 / (2.0 * PI * (l * c).sqrt())
}

/// Stray inductance that places the zero-flux resonance at `target_hz`.
///
/// Useful to absorb geometric inductance when the pure junction model
/// overestimates the measured maximum frequency.
pub fn stray_for_max_frequency(spec: &ArraySpec, target_hz: f64) -> Result<f64> {
    let junction =
        f64::from(spec.m_snails) * cell_inductance(FluxBias::from_fraction(0.0), &spec.cell)?;
    let omega = 2.0 * PI * target_hz;
    let total = 1.0 / (omega * omega * spec.capacitance);
    require(
        total >= junction,
        "target_hz",
        format!("{target_hz} Hz exceeds the zero-flux resonance without stray inductance"),
    )?;
    Ok(total - junction)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunabilityCurve {
    samples: Vec<(f64, f64)>,
}

impl TunabilityCurve {
    /// `(flux fraction, resonance Hz)` in increasing flux order.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Resonance frequency over a strictly increasing grid inside `(-1/2, 1/2]`.
pub fn tunability_curve(spec: &ArraySpec, flux_grid: &[f64]) -> Result<TunabilityCurve> {
    if flux_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    require(
        flux_grid.iter().all(|&f| f > -0.5 && f <= 0.5),
        "flux_grid",
        "fractions must lie in (-0.5, 0.5]",
    )?;
    require(
        flux_grid.windows(2).all(|w| w[0] < w[1]),
        "flux_grid",
        "fractions must be strictly increasing",
    )?;
    let freqs = sweep::try_map(flux_grid, |&f| {
        resonance_frequency(spec, FluxBias::from_fraction(f))
    })?;
    Ok(TunabilityCurve {
        samples: flux_grid.iter().copied().zip(freqs).collect(),
    })
}

/// Flux fraction on the `[0, 1/2]` branch that tunes the resonator to `target_hz`.
pub fn flux_for_frequency(spec: &ArraySpec, target_hz: f64) -> Result<f64> {
    let f_at = |frac: f64| resonance_frequency(spec, FluxBias::from_fraction(frac));
    let f_max = f_at(0.0)?;
    let f_min = f_at(0.5)?;
    if !(target_hz.is_finite()
        && target_hz <= f_max + FREQUENCY_TOL
        && target_hz >= f_min - FREQUENCY_TOL)
    {
        return Err(Error::OutOfTunableRange {
            target_hz,
            min_hz: f_min,
            max_hz: f_max,
        });
    }
    if target_hz >= f_max {
        return Ok(0.0);
    }
    if target_hz <= f_min {
        return Ok(0.5);
    }

    // frequency falls with flux on this branch
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    let mut mid = 0.25;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f = f_at(mid)?;
        if hi - lo <= FLUX_TOL && (f - target_hz).abs() <= FREQUENCY_TOL {
            break;
        }
        if f > target_hz {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Affine map from coil current (amperes) to flux fraction through two
/// calibration points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoilCalibration {
    slope: f64,
    offset: f64,
    points: [(f64, f64); 2],
}

impl CoilCalibration {
    pub fn new(first: (f64, f64), second: (f64, f64)) -> Result<Self> {
        let (i1, f1) = first;
        let (i2, f2) = second;
        if i1 == i2 {
            return Err(Error::DegenerateCalibration { current: i1 });
        }
        let slope = (f2 - f1) / (i2 - i1);
        Ok(Self {
            slope,
            offset: f1 - slope * i1,
            points: [first, second],
        })
    }

    pub fn flux_at(&self, current: f64) -> f64 {
        // hit the nodes exactly
        for (i, f) in self.points {
            if current == i {
                return f;
            }
        }
        self.offset + self.slope * current
    }

    /// Inverse map; `None` when the calibration carries no flux change.
    pub fn current_at(&self, flux: f64) -> Option<f64> {
        if self.slope == 0.0 {
            return None;
        }
        for (i, f) in self.points {
            if flux == f {
                return Some(i);
            }
        }
        Some((flux - self.offset) / self.slope)
    }
}

/// One-shot form of [`CoilCalibration::flux_at`].
pub fn coil_current_map(calibration: [(f64, f64); 2], current: f64) -> Result<f64> {
    Ok(CoilCalibration::new(calibration[0], calibration[1])?.flux_at(current))
}
