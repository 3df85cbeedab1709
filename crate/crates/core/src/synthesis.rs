//! Two-section (λ/4 + λ/2) impedance transformer from a Chebyshev
//! negative-resistance prototype.
//!
//! The prototype coefficients `g_k` and fractional bandwidth `w` set the
//! slope parameters of the resonators for a reference resistance `R`:
//!
//! ```text
//! x = g1 R / w          (impedance slope, the JPA branch)
//! b = g2 / (w R)        (admittance slope, the λ/2 section)
//! ```
//!
//! and the physical sections follow as
//!
//! ```text
//! Z_λ/4² = Z0 R0,   R0 = R / r0
//! Z_λ/2  = π / 2b
//! Z_JPA  = 2x / π
//! ```

use std::f64::consts::PI;

use crate::array::{characteristic_impedance, resonance_frequency, ArraySpec};
use crate::error::{require, Error, Result};
use crate::snail::FluxBias;
use crate::sweep;

/// Relative detuning allowed between resonator and prototype center.
pub const FREQUENCY_MATCH_TOL: f64 = 0.01;

/// Chebyshev low-pass prototype coefficients `g0..=g_{n+1}` for the given
/// passband ripple.
pub fn chebyshev_g_values(order: usize, ripple_db: f64) -> Result<Vec<f64>> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    require(
        ripple_db.is_finite() && ripple_db > 0.0,
        "ripple_db",
        format!("must be positive, got {ripple_db}"),
    )?;
    let n = order as f64;
    // ripple in nepers-squared form: 40 log10(e) = 40 / ln 10
    let beta = (1.0 / (ripple_db * std::f64::consts::LN_10 / 40.0).tanh()).ln();
    let gamma = (beta / (2.0 * n)).sinh();
    let a = |k: usize| ((2 * k - 1) as f64 * PI / (2.0 * n)).sin();
    let b = |k: usize| gamma * gamma + (k as f64 * PI / n).sin().powi(2);

    let mut g = Vec::with_capacity(order + 2);
    g.push(1.0);
    g.push(2.0 * a(1) / gamma);
    for k in 2..=order {
        let prev = g[k - 1];
        g.push(4.0 * a(k - 1) * a(k) / (b(k - 1) * prev));
    }
    g.push(if order % 2 == 1 {
        1.0
    } else {
        let c = 1.0 / (beta / 4.0).tanh();
        c * c
    });
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeSpec {
    order: usize,
    ripple_db: f64,
    g_values: Vec<f64>,
    fractional_bandwidth: f64,
    center_frequency: f64,
    source_impedance: f64,
    negative_resistance_ratio: f64,
}

impl PrototypeSpec {
    /// Chebyshev prototype with `r0 = 1`.
    pub fn chebyshev(
        order: usize,
        ripple_db: f64,
        fractional_bandwidth: f64,
        center_frequency: f64,
        source_impedance: f64,
    ) -> Result<Self> {
        Self::new(
            order,
            ripple_db,
            fractional_bandwidth,
            center_frequency,
            source_impedance,
            1.0,
        )
    }

    pub fn new(
        order: usize,
        ripple_db: f64,
        fractional_bandwidth: f64,
        center_frequency: f64,
        source_impedance: f64,
        negative_resistance_ratio: f64,
    ) -> Result<Self> {
        let g_values = chebyshev_g_values(order, ripple_db)?;
        require(
            fractional_bandwidth > 0.0 && fractional_bandwidth < 1.0,
            "fractional_bandwidth",
            format!("must lie in (0, 1), got {fractional_bandwidth}"),
        )?;
        require(
            center_frequency.is_finite() && center_frequency > 0.0,
            "center_frequency",
            "must be positive",
        )?;
        require(
            source_impedance.is_finite() && source_impedance > 0.0,
            "source_impedance",
            "must be positive",
        )?;
        require(
            negative_resistance_ratio.is_finite() && negative_resistance_ratio > 0.0,
            "negative_resistance_ratio",
            "must be positive",
        )?;
        Ok(Self {
            order,
            ripple_db,
            g_values,
            fractional_bandwidth,
            center_frequency,
            source_impedance,
            negative_resistance_ratio,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ripple_db(&self) -> f64 {
        self.ripple_db
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g_values
    }

    pub fn fractional_bandwidth(&self) -> f64 {
        self.fractional_bandwidth
    }

    pub fn center_frequency(&self) -> f64 {
        self.center_frequency
    }

    pub fn source_impedance(&self) -> f64 {
        self.source_impedance
    }

    pub fn negative_resistance_ratio(&self) -> f64 {
        self.negative_resistance_ratio
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformerDesign {
    pub z_quarter: f64,
    pub z_half: f64,
    pub z_jpa_target: f64,
    pub x_slope: f64,
    pub b_slope: f64,
    pub center_frequency: f64,
}

impl TransformerDesign {
    /// Design from known section impedances, e.g. a fabricated device.
    /// The slope parameters are back-filled from the section equations.
    pub fn from_sections(
        z_quarter: f64,
        z_half: f64,
        z_jpa: f64,
        center_frequency: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("z_quarter", z_quarter),
            ("z_half", z_half),
            ("z_jpa", z_jpa),
            ("center_frequency", center_frequency),
        ] {
            require(
                v.is_finite() && v > 0.0,
                name,
                format!("must be positive, got {v}"),
            )?;
        }
        Ok(Self {
            z_quarter,
            z_half,
            z_jpa_target: z_jpa,
            x_slope: PI * z_jpa / 2.0,
            b_slope: PI / (2.0 * z_half),
            center_frequency,
        })
    }
}

/// Impedance and admittance slope parameters for reference resistance `r_load`.
pub fn slope_parameters(proto: &PrototypeSpec, r_load: f64) -> Result<(f64, f64)> {
    require(
        r_load.is_finite() && r_load > 0.0,
        "r_load",
        "must be positive",
    )?;
    let w = proto.fractional_bandwidth;
    let g = &proto.g_values;
    Ok((g[1] * r_load / w, g[2] / (w * r_load)))
}

/// Section impedances from slope parameters and the source-side termination.
pub fn section_impedances(
    x: f64,
    b: f64,
    z0: f64,
    r0_load: f64,
    center_frequency: f64,
) -> Result<TransformerDesign> {
    for (name, v) in [
        ("x", x),
        ("b", b),
        ("z0", z0),
        ("r0_load", r0_load),
        ("center_frequency", center_frequency),
    ] {
        require(
            v.is_finite() && v > 0.0,
            name,
            format!("must be positive, got {v}"),
        )?;
    }
    Ok(TransformerDesign {
        z_quarter: (z0 * r0_load).sqrt(),
        z_half: PI / (2.0 * b),
        z_jpa_target: 2.0 * x / PI,
        x_slope: x,
        b_slope: b,
        center_frequency,
    })
}

/// Full transformer for `spec` operated at `operating_flux`.
///
/// The reference resistance is chosen so the prototype's impedance slope
/// reproduces the array's actual characteristic impedance.
pub fn synthesize(
    proto: &PrototypeSpec,
    spec: &ArraySpec,
    operating_flux: FluxBias,
) -> Result<TransformerDesign> {
    let resonator = resonance_frequency(spec, operating_flux)?;
    let center = proto.center_frequency;
    if ((resonator - center) / center).abs() > FREQUENCY_MATCH_TOL {
        return Err(Error::FrequencyMismatch {
            resonator_hz: resonator,
            center_hz: center,
        });
    }
    let z_jpa = characteristic_impedance(spec, operating_flux)?;
    let x = PI * z_jpa / 2.0;
    let r_ref = x * proto.fractional_bandwidth / proto.g_values[1];
    let (x, b) = slope_parameters(proto, r_ref)?;
    section_impedances(
        x,
        b,
        proto.source_impedance,
        r_ref / proto.negative_resistance_ratio,
        center,
    )
}

/// Best prototype found by [`search_prototype`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrototypeFit {
    pub ripple_db: f64,
    pub fractional_bandwidth: f64,
    pub design: TransformerDesign,
    /// Largest relative miss over the two target section impedances.
    pub max_rel_error: f64,
}

/// Search ranges for [`search_prototype`]; each axis is sampled uniformly
/// with `steps` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrototypeSearch {
    pub order: usize,
    pub ripple_db: (f64, f64),
    pub fractional_bandwidth: (f64, f64),
    pub steps: usize,
}

impl Default for PrototypeSearch {
    fn default() -> Self {
        Self {
            order: 2,
            ripple_db: (0.1, 3.0),
            fractional_bandwidth: (0.05, 0.4),
            steps: 59,
        }
    }
}

/// Grid search over (ripple, w) for the prototype whose synthesized
/// transformer best reproduces `(z_quarter, z_half)`.
pub fn search_prototype(
    spec: &ArraySpec,
    operating_flux: FluxBias,
    source_impedance: f64,
    targets: (f64, f64),
    search: PrototypeSearch,
) -> Result<PrototypeFit> {
    require(search.steps >= 2, "steps", "must be at least 2")?;
    let center = resonance_frequency(spec, operating_flux)?;
    let ripples = sweep::linspace(search.ripple_db.0, search.ripple_db.1, search.steps);
    let widths = sweep::linspace(
        search.fractional_bandwidth.0,
        search.fractional_bandwidth.1,
        search.steps,
    );
    let nodes: Vec<(f64, f64)> = ripples
        .iter()
        .flat_map(|&r| widths.iter().map(move |&w| (r, w)))
        .collect();

    let fits = sweep::try_map(&nodes, |&(ripple_db, w)| -> Result<PrototypeFit> {
        let proto = PrototypeSpec::chebyshev(search.order, ripple_db, w, center, source_impedance)?;
        let design = synthesize(&proto, spec, operating_flux)?;
        let err_q = ((design.z_quarter - targets.0) / targets.0).abs();
        let err_h = ((design.z_half - targets.1) / targets.1).abs();
        Ok(PrototypeFit {
            ripple_db,
            fractional_bandwidth: w,
            design,
            max_rel_error: err_q.max(err_h),
        })
    })?;
    // first minimum in grid order keeps the result deterministic
    Ok(fits
        .into_iter()
        .reduce(|best, f| {
            if f.max_rel_error < best.max_rel_error {
                f
            } else {
                best
            }
        })
        .expect("grid has at least four nodes"))
}
