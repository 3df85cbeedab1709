//! Chain-matrix model of the amplifier in reflection.
//!
//! The source sees a λ/4 section, then a λ/2 section, terminated by the
//! pumped array. The pump is represented by a frequency-independent negative
//! resistance `-r_p` in series with the array inductance and the coupling
//! capacitor, so the termination is
//!
//! ```text
//! Z_t(f) = -r_p + i 2πf L_array + 1 / (i 2πf C)
//! ```
//!
//! and the reflection gain is `|Γ|²` with `Γ = (Z_in - Z0) / (Z_in + Z0)`.

use std::f64::consts::{LN_10, PI};
use std::ops::Mul;

use num_complex::Complex64;

use crate::array::{
    array_inductance, characteristic_impedance, flux_for_frequency, lc_frequency, ArraySpec,
};
use crate::error::{require, Error, Result};
use crate::snail::FluxBias;
use crate::sweep;
use crate::synthesis::{TransformerDesign, FREQUENCY_MATCH_TOL};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Denominators below this magnitude are treated as a pole.
const SINGULAR_TOL: f64 = 1e-15;

/// ABCD (chain) matrix of a two-port. `b` is in ohms, `c` in siemens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl TwoPortMatrix {
    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Input impedance with `load` on port 2.
    pub fn input_impedance(&self, load: Complex64) -> Complex64 {
        (self.a * load + self.b) / (self.c * load + self.d)
    }

    /// Impedance seen looking into port 2 with `source` on port 1.
    pub fn output_impedance(&self, source: Complex64) -> Complex64 {
        (self.d * source + self.b) / (self.c * source + self.a)
    }
}

impl Mul for TwoPortMatrix {
    type Output = TwoPortMatrix;

    /// `self` followed by `rhs` (source side on the left).
    fn mul(self, rhs: TwoPortMatrix) -> TwoPortMatrix {
        TwoPortMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

/// Lossless line of characteristic impedance `z_char` and electrical length
/// `electrical_length` radians.
pub fn line_matrix(z_char: f64, electrical_length: f64) -> TwoPortMatrix {
    let (s, c) = electrical_length.sin_cos();
    TwoPortMatrix {
        a: Complex64::new(c, 0.0),
        b: J * (z_char * s),
        c: J * (s / z_char),
        d: Complex64::new(c, 0.0),
    }
}

/// Line with total attenuation `attenuation_np` nepers.
pub fn lossy_line_matrix(
    z_char: f64,
    electrical_length: f64,
    attenuation_np: f64,
) -> TwoPortMatrix {
    if attenuation_np == 0.0 {
        return line_matrix(z_char, electrical_length);
    }
    let gl = Complex64::new(attenuation_np, electrical_length);
    let (ch, sh) = (gl.cosh(), gl.sinh());
    TwoPortMatrix {
        a: ch,
        b: sh * z_char,
        c: sh / z_char,
        d: ch,
    }
}

pub fn series_element_matrix(impedance: Complex64) -> TwoPortMatrix {
    TwoPortMatrix {
        a: ONE,
        b: impedance,
        c: ZERO,
        d: ONE,
    }
}

pub fn shunt_element_matrix(admittance: Complex64) -> TwoPortMatrix {
    TwoPortMatrix {
        a: ONE,
        b: ZERO,
        c: admittance,
        d: ONE,
    }
}

/// Impedance of capacitor `capacitance` at `frequency`.
pub fn capacitor_impedance(capacitance: f64, frequency: f64) -> Complex64 {
    1.0 / (J * (2.0 * PI * frequency * capacitance))
}

/// Left-to-right product, source side first.
pub fn cascade(matrices: &[TwoPortMatrix]) -> Result<TwoPortMatrix> {
    let (first, rest) = matrices.split_first().ok_or(Error::EmptyCascade)?;
    Ok(rest.iter().fold(*first, |acc, m| acc * *m))
}

/// Reflection coefficient seen from a `z0` source through `network`
/// terminated by `load`.
pub fn reflection_through(
    network: &TwoPortMatrix,
    load: Complex64,
    z0: f64,
    frequency: f64,
) -> Result<Complex64> {
    let den = network.c * load + network.d;
    if den.norm() < SINGULAR_TOL {
        return Err(Error::SingularNetwork {
            frequency_hz: frequency,
        });
    }
    let num = network.a * load + network.b;
    let top = num - den * z0;
    let bottom = num + den * z0;
    if bottom.norm() < SINGULAR_TOL * (num.norm() + z0 * den.norm()) {
        return Err(Error::SingularNetwork {
            frequency_hz: frequency,
        });
    }
    Ok(top / bottom)
}

/// Complete amplifier: transformer, array at its operating flux, source, pump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceDesign {
    pub transformer: TransformerDesign,
    pub array: ArraySpec,
    pub operating_flux: FluxBias,
    pub source_impedance: f64,
    pub pump_strength: f64,
    /// Loss of each line section at the center frequency, dB.
    pub line_loss_db: f64,
    l_array: f64,
}

impl DeviceDesign {
    /// Pump off, lossless lines. The array must resonate within 1% of the
    /// transformer center at `operating_flux`.
    pub fn new(
        transformer: TransformerDesign,
        array: ArraySpec,
        operating_flux: FluxBias,
        source_impedance: f64,
    ) -> Result<Self> {
        require(
            source_impedance.is_finite() && source_impedance > 0.0,
            "source_impedance",
            "must be positive",
        )?;
        let l_array = array_inductance(&array, operating_flux)?;
        let resonator = lc_frequency(l_array, array.capacitance());
        let center = transformer.center_frequency;
        if ((resonator - center) / center).abs() > FREQUENCY_MATCH_TOL {
            return Err(Error::FrequencyMismatch {
                resonator_hz: resonator,
                center_hz: center,
            });
        }
        Ok(Self {
            transformer,
            array,
            operating_flux,
            source_impedance,
            pump_strength: 0.0,
            line_loss_db: 0.0,
            l_array,
        })
    }

    /// Tunes `array` to `center_frequency` on the `[0, 1/2]` flux branch and
    /// attaches fixed transformer sections.
    pub fn tuned(
        array: ArraySpec,
        z_quarter: f64,
        z_half: f64,
        center_frequency: f64,
        source_impedance: f64,
    ) -> Result<Self> {
        let frac = flux_for_frequency(&array, center_frequency)?;
        let flux = FluxBias::from_fraction(frac);
        let z_jpa = characteristic_impedance(&array, flux)?;
        let transformer =
            TransformerDesign::from_sections(z_quarter, z_half, z_jpa, center_frequency)?;
        Self::new(transformer, array, flux, source_impedance)
    }

    pub fn with_pump(mut self, pump_strength: f64) -> Result<Self> {
        require(
            pump_strength.is_finite() && pump_strength >= 0.0,
            "pump_strength",
            format!("must be non-negative, got {pump_strength}"),
        )?;
        self.pump_strength = pump_strength;
        Ok(self)
    }

    pub fn with_line_loss(mut self, line_loss_db: f64) -> Result<Self> {
        require(
            line_loss_db.is_finite() && line_loss_db >= 0.0,
            "line_loss_db",
            "must be non-negative",
        )?;
        self.line_loss_db = line_loss_db;
        Ok(self)
    }

    /// Array inductance at the operating flux, henries.
    pub fn l_array(&self) -> f64 {
        self.l_array
    }

    pub fn center_frequency(&self) -> f64 {
        self.transformer.center_frequency
    }

    /// Chain matrix of the λ/4 and λ/2 sections at `frequency`.
    pub fn transformer_matrix(&self, frequency: f64) -> TwoPortMatrix {
        let ratio = frequency / self.transformer.center_frequency;
        let loss_np = self.line_loss_db * LN_10 / 20.0;
        let quarter = lossy_line_matrix(self.transformer.z_quarter, 0.5 * PI * ratio, loss_np);
        let half = lossy_line_matrix(self.transformer.z_half, PI * ratio, loss_np);
        quarter * half
    }

    /// Reactance of the array branch without pump, ohms.
    fn branch_reactance(&self, frequency: f64) -> f64 {
        let omega = 2.0 * PI * frequency;
        omega * self.l_array - 1.0 / (omega * self.array.capacitance())
    }
}

/// Termination impedance presented by the pumped array branch.
pub fn jpa_termination(design: &DeviceDesign, frequency: f64) -> Complex64 {
    Complex64::new(-design.pump_strength, design.branch_reactance(frequency))
}

pub fn input_reflection(design: &DeviceDesign, frequency: f64) -> Result<Complex64> {
    let network = design.transformer_matrix(frequency);
    reflection_through(
        &network,
        jpa_termination(design, frequency),
        design.source_impedance,
        frequency,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    pub frequency: f64,
    pub gamma: Complex64,
    pub gain_db: f64,
}

impl GainSample {
    pub fn new(frequency: f64, gamma: Complex64) -> Self {
        Self {
            frequency,
            gamma,
            gain_db: 20.0 * gamma.norm().log10(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainProfile {
    samples: Vec<GainSample>,
}

impl GainProfile {
    /// Frequencies must be strictly increasing.
    pub fn from_samples(samples: Vec<GainSample>) -> Result<Self> {
        require(
            samples.windows(2).all(|w| w[0].frequency < w[1].frequency),
            "samples",
            "frequencies must be strictly increasing",
        )?;
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[GainSample] {
        &self.samples
    }

    /// Sample with the largest gain; the first one on ties.
    pub fn peak(&self) -> Option<&GainSample> {
        self.samples
            .iter()
            .reduce(|best, s| if s.gain_db > best.gain_db { s } else { best })
    }

    /// Interior local maxima with gain at or above `threshold_db`.
    pub fn local_maxima(&self, threshold_db: f64) -> Vec<&GainSample> {
        self.samples
            .windows(3)
            .filter(|w| {
                w[1].gain_db > w[0].gain_db
                    && w[1].gain_db >= w[2].gain_db
                    && w[1].gain_db >= threshold_db
            })
            .map(|w| &w[1])
            .collect()
    }
}

/// Uniform sweep of [`input_reflection`] over `[f_start, f_stop]`.
pub fn gain_profile(
    design: &DeviceDesign,
    f_start: f64,
    f_stop: f64,
    points: usize,
) -> Result<GainProfile> {
    require(
        f_start > 0.0 && f_start < f_stop,
        "band",
        format!("need 0 < f_start < f_stop, got [{f_start}, {f_stop}]"),
    )?;
    require(points >= 2, "points", "must be at least 2")?;
    let grid = sweep::linspace(f_start, f_stop, points);
    let samples = sweep::try_map(&grid, |&f| {
        input_reflection(design, f).map(|g| GainSample::new(f, g))
    })?;
    Ok(GainProfile { samples })
}

/// Default sweep: 2001 points over `f0 ± 1 GHz`.
pub fn default_band(center_frequency: f64) -> Band {
    Band {
        f_start: center_frequency - 1e9,
        f_stop: center_frequency + 1e9,
        points: 2001,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub f_start: f64,
    pub f_stop: f64,
    pub points: usize,
}

impl Band {
    pub fn profile(&self, design: &DeviceDesign) -> Result<GainProfile> {
        gain_profile(design, self.f_start, self.f_stop, self.points)
    }
}

/// Width of the largest contiguous run with gain ≥ `threshold_db`, with the
/// edges placed by linear interpolation to the neighbouring samples.
pub fn bandwidth(profile: &GainProfile, threshold_db: f64) -> f64 {
    let s = &profile.samples;
    let mut best = 0.0_f64;
    let mut i = 0;
    while i < s.len() {
        if s[i].gain_db < threshold_db {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < s.len() && s[i + 1].gain_db >= threshold_db {
            i += 1;
        }
        let end = i;
        let lower = if start > 0 {
            crossing(&s[start - 1], &s[start], threshold_db)
        } else {
            s[start].frequency
        };
        let upper = if end + 1 < s.len() {
            crossing(&s[end], &s[end + 1], threshold_db)
        } else {
            s[end].frequency
        };
        best = best.max(upper - lower);
        i += 1;
    }
    best
}

fn crossing(a: &GainSample, b: &GainSample, level: f64) -> f64 {
    let t = (level - a.gain_db) / (b.gain_db - a.gain_db);
    a.frequency + t * (b.frequency - a.frequency)
}

/// Smallest pump strength at which the loaded branch can oscillate inside
/// `band`, or `None` if the reactance never cancels there.
///
/// Looking back from the array, the transformer and source present
/// `Z_s(f)`. Oscillation needs `Im Z_s + X_branch = 0` and `r_p = Re Z_s`.
pub fn instability_threshold(design: &DeviceDesign, band: Band) -> Option<f64> {
    let z0 = Complex64::new(design.source_impedance, 0.0);
    let mismatch = |f: f64| -> (f64, f64) {
        let zs = design.transformer_matrix(f).output_impedance(z0);
        (zs.im + design.branch_reactance(f), zs.re)
    };
    let grid = sweep::linspace(band.f_start, band.f_stop, band.points.max(2) * 4);
    let values = sweep::map(&grid, |&f| mismatch(f).0);
    let mut threshold: Option<f64> = None;
    for (k, w) in values.windows(2).enumerate() {
        if w[0] == 0.0 || w[0].signum() == w[1].signum() {
            if w[0] == 0.0 {
                let r = mismatch(grid[k]).1;
                threshold = Some(threshold.map_or(r, |t: f64| t.min(r)));
            }
            continue;
        }
        let (mut lo, mut hi) = (grid[k], grid[k + 1]);
        let lo_sign = w[0].signum();
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mismatch(mid).0.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = mismatch(0.5 * (lo + hi)).1;
        threshold = Some(threshold.map_or(r, |t: f64| t.min(r)));
    }
    threshold
}

/// Gain calibration tolerance, dB.
pub const CALIBRATION_TOL_DB: f64 = 0.01;
const CALIBRATION_MAX_ITER: usize = 200;
/// Largest usable pump as a fraction of the instability point.
const STABILITY_MARGIN: f64 = 1.0 - 1e-6;

/// Pump strength whose peak gain over `band` equals `target_peak_gain_db`.
pub fn calibrate_pump(design: &DeviceDesign, target_peak_gain_db: f64, band: Band) -> Result<f64> {
    require(
        target_peak_gain_db.is_finite() && target_peak_gain_db > 0.0,
        "target_peak_gain_db",
        format!("must be positive, got {target_peak_gain_db}"),
    )?;
    let peak_at = |rp: f64| -> Result<f64> {
        let profile = band.profile(&design.with_pump(rp)?)?;
        Ok(profile.peak().map_or(f64::NEG_INFINITY, |s| s.gain_db))
    };

    let mut hi = match instability_threshold(design, band) {
        Some(critical) => {
            let hi = critical * STABILITY_MARGIN;
            if peak_at(hi)? < target_peak_gain_db {
                return Err(Error::Unstable {
                    critical_rp: critical,
                });
            }
            hi
        }
        None => {
            let mut hi = design.source_impedance;
            while peak_at(hi)? < target_peak_gain_db {
                hi *= 2.0;
                if hi > 1e6 * design.source_impedance {
                    return Err(Error::NoConvergence { iterations: 0 });
                }
            }
            hi
        }
    };
    let mut lo = 0.0;
    for _ in 0..CALIBRATION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let peak = peak_at(mid)?;
        if (peak - target_peak_gain_db).abs() < 0.1 * CALIBRATION_TOL_DB {
            return Ok(mid);
        }
        if peak < target_peak_gain_db {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: CALIBRATION_MAX_ITER,
    })
}

/// Relative saturation power `I_c² / Q³` for scaled critical current and
/// external quality factor.
pub fn saturation_scaling(ic_ratio: f64, q_ratio: f64) -> Result<f64> {
    require(
        ic_ratio.is_finite() && ic_ratio > 0.0,
        "ic_ratio",
        format!("must be positive, got {ic_ratio}"),
    )?;
    require(
        q_ratio.is_finite() && q_ratio > 0.0,
        "q_ratio",
        format!("must be positive, got {q_ratio}"),
    )?;
    Ok(ic_ratio * ic_ratio / (q_ratio * q_ratio * q_ratio))
}
