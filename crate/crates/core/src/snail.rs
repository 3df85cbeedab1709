//! Single SNAIL loop: potential, equilibrium phase, Taylor coefficients and
//! the derived inductance and nonlinearities.
//!
//! A SNAIL is `n` large junctions in a loop with one small junction whose
//! critical current is `alpha` times smaller. With the external flux threaded
//! through the large-junction branch the reduced potential, in units of the
//! large-junction Josephson energy, is
//!
//! ```text
//! u(φ) = -α cos φ - n cos((φ - φ_ext) / n)
//! ```
//!
//! Expanding about its minimum `φ_min` gives the dimensionless coefficients
//! `c2`, `c3`, `c4` that set the cell inductance (`L_J / c2`) and the three-
//! and four-wave mixing strengths.

use std::f64::consts::PI;

use crate::constants::{josephson_energy, PLANCK, RESISTANCE_QUANTUM};
use crate::error::{require, Error, Result};
use crate::sweep;

/// Points per potential period used to bracket the global minimum.
const COARSE_GRID: usize = 1024;
const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;
/// Curvatures at or below this are treated as a degenerate flux point.
const STIFFNESS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnailParams {
    alpha: f64,
    n_large: u32,
    l_josephson: f64,
}

impl SnailParams {
    /// `alpha` must lie in `(0, 1/n_large)`, `l_josephson` is in henries.
    pub fn new(alpha: f64, n_large: u32, l_josephson: f64) -> Result<Self> {
        require(n_large >= 1, "n_large", "must be at least 1")?;
        require(
            alpha.is_finite() && alpha > 0.0 && alpha < 1.0 / f64::from(n_large),
            "alpha",
            format!("must lie in (0, 1/{n_large}), got {alpha}"),
        )?;
        require(
            l_josephson.is_finite() && l_josephson > 0.0,
            "l_josephson",
            format!("must be positive, got {l_josephson}"),
        )?;
        Ok(Self {
            alpha,
            n_large,
            l_josephson,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_large(&self) -> u32 {
        self.n_large
    }

    pub fn l_josephson(&self) -> f64 {
        self.l_josephson
    }

    /// Copy with a different asymmetry.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.n_large, self.l_josephson)
    }

    fn n(&self) -> f64 {
        f64::from(self.n_large)
    }
}

/// External flux bias, stored both as Φ/Φ₀ and as the reduced phase 2πΦ/Φ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBias {
    frac: f64,
    phase: f64,
}

impl FluxBias {
    pub fn from_fraction(frac: f64) -> Self {
        Self {
            frac,
            phase: 2.0 * PI * frac,
        }
    }

    pub fn frac(&self) -> f64 {
        self.frac
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoefficients {
    pub phi_min: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Which quartic coefficient defines the Kerr-free point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KerrModel {
    /// Sign change of the bare `c4`.
    #[default]
    Bare,
    /// `c4 - 5 c3² / (3 c2)`, including the second-order cubic correction.
    Hybridized,
}

impl TaylorCoefficients {
    pub fn kerr_coefficient(&self, model: KerrModel) -> f64 {
        match model {
            KerrModel::Bare => self.c4,
            KerrModel::Hybridized => self.c4 - 5.0 * self.c3 * self.c3 / (3.0 * self.c2),
        }
    }
}

/// Reduced potential `u(φ)` in units of the large-junction Josephson energy.
pub fn reduced_potential(phi: f64, flux: FluxBias, params: &SnailParams) -> f64 {
    let n = params.n();
    -params.alpha * phi.cos() - n * ((phi - flux.phase) / n).cos()
}

/// `order`-th derivative of the reduced potential with respect to φ, for
/// `order` in 1..=4.
pub fn potential_derivative(phi: f64, flux: FluxBias, params: &SnailParams, order: u8) -> f64 {
    let a = params.alpha;
    let n = params.n();
    let theta = (phi - flux.phase) / n;
    match order {
        1 => a * phi.sin() + theta.sin(),
        2 => a * phi.cos() + theta.cos() / n,
        3 => -a * phi.sin() - theta.sin() / (n * n),
        4 => -a * phi.cos() - theta.cos() / (n * n * n),
        _ => panic!("potential derivative order {order} not in 1..=4"),
    }
}

/// Global minimizer of the reduced potential.
///
/// The flux is first folded to `[-1/2, 1/2]`; the minimum of the folded
/// problem is bracketed on a coarse grid over one full `2πn` period centered
/// on zero and polished with bracketed Newton steps on `u'`. The result is
/// shifted back by whole flux quanta, so `φ_min(f + 1) = φ_min(f) + 2π`.
pub fn find_phi_min(flux: FluxBias, params: &SnailParams) -> Result<f64> {
    let turns = flux.frac.round();
    let folded = FluxBias::from_fraction(flux.frac - turns);

    let period = 2.0 * PI * params.n();
    let h = period / COARSE_GRID as f64;
    let start = -0.5 * period;
    let (best, _) = (0..COARSE_GRID)
        .map(|i| {
            let phi = start + h * i as f64;
            (phi, reduced_potential(phi, folded, params))
        })
        .fold((start, f64::INFINITY), |acc, (phi, u)| {
            if u < acc.1 {
                (phi, u)
            } else {
                acc
            }
        });

    let du = |phi: f64| potential_derivative(phi, folded, params, 1);
    let mut lo = best - h;
    let mut hi = best + h;
    let mut phi = best;
    let mut residual = du(phi);
    for _ in 0..NEWTON_MAX_ITER {
        if residual.abs() < NEWTON_TOL {
            return Ok(phi + 2.0 * PI * turns);
        }
        // u' is increasing through the minimum
        if residual < 0.0 {
            lo = phi;
        } else {
            hi = phi;
        }
        let curvature = potential_derivative(phi, folded, params, 2);
        let step = phi - residual / curvature;
        phi = if curvature > 0.0 && step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        residual = du(phi);
    }
    if residual.abs() < NEWTON_TOL {
        return Ok(phi + 2.0 * PI * turns);
    }
    Err(Error::ConvergenceFailure {
        flux: flux.frac,
        residual: residual.abs(),
    })
}

/// Analytic expansion coefficients of the potential about its minimum.
pub fn taylor_coefficients(flux: FluxBias, params: &SnailParams) -> Result<TaylorCoefficients> {
    let phi_min = find_phi_min(flux, params)?;
    Ok(TaylorCoefficients {
        phi_min,
        c2: potential_derivative(phi_min, flux, params, 2),
        c3: potential_derivative(phi_min, flux, params, 3),
        c4: potential_derivative(phi_min, flux, params, 4),
    })
}

/// Cell inductance `L_J / c2`, henries.
pub fn cell_inductance(flux: FluxBias, params: &SnailParams) -> Result<f64> {
    let coeffs = taylor_coefficients(flux, params)?;
    inductance_from_c2(coeffs.c2, flux, params)
}

pub(crate) fn inductance_from_c2(c2: f64, flux: FluxBias, params: &SnailParams) -> Result<f64> {
    if c2 <= STIFFNESS_FLOOR {
        return Err(Error::NonPositiveStiffness {
            flux: flux.frac,
            c2,
        });
    }
    Ok(params.l_josephson / c2)
}

/// Third- and fourth-order nonlinearities of an `m_snails` series array
/// resonating with `total_capacitance`, in hertz.
///
/// The zero-point phase fluctuation of the mode, `φ_zpf² = 2π Z / R_Q` with
/// `Z = sqrt(L_array / C)`, is split evenly across the `M` cells:
///
/// ```text
/// g3 = E_J c3 (φ_zpf/M)³ M / 6h
/// g4 = E_J c4 (φ_zpf/M)⁴ M / 24h
/// ```
pub fn g_coefficients(
    flux: FluxBias,
    params: &SnailParams,
    m_snails: u32,
    total_capacitance: f64,
) -> Result<(f64, f64)> {
    require(m_snails >= 1, "m_snails", "must be at least 1")?;
    require(
        total_capacitance.is_finite() && total_capacitance > 0.0,
        "total_capacitance",
        format!("must be positive, got {total_capacitance}"),
    )?;
    let coeffs = taylor_coefficients(flux, params)?;
    g_from_coefficients(&coeffs, flux, params, m_snails, total_capacitance)
}

pub(crate) fn g_from_coefficients(
    coeffs: &TaylorCoefficients,
    flux: FluxBias,
    params: &SnailParams,
    m_snails: u32,
    total_capacitance: f64,
) -> Result<(f64, f64)> {
    let m = f64::from(m_snails);
    let l_array = m * inductance_from_c2(coeffs.c2, flux, params)?;
    let z = (l_array / total_capacitance).sqrt();
    let phi_cell = (2.0 * PI * z / RESISTANCE_QUANTUM).sqrt() / m;
    let e_j = josephson_energy(params.l_josephson);
    let g3 = e_j * coeffs.c3 * phi_cell.powi(3) * m / (6.0 * PLANCK);
    let g4 = e_j * coeffs.c4 * phi_cell.powi(4) * m / (24.0 * PLANCK);
    Ok((g3, g4))
}

/// Flux fraction bracket for [`kerr_free_flux`]; both ends inside `(0, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxInterval {
    pub lo: f64,
    pub hi: f64,
}

impl FluxInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        require(
            lo > 0.0 && hi < 0.5 && lo < hi,
            "search_interval",
            format!("must satisfy 0 < lo < hi < 0.5, got ({lo}, {hi})"),
        )?;
        Ok(Self { lo, hi })
    }
}

/// Default bisection tolerance in flux fraction.
pub const KERR_FREE_TOL: f64 = 1e-8;

/// Flux fraction where the bare `c4` changes sign.
pub fn kerr_free_flux(params: &SnailParams, interval: FluxInterval) -> Result<f64> {
    kerr_free_flux_with(params, interval, KerrModel::Bare, KERR_FREE_TOL)
}

/// Sign-change search for the chosen Kerr coefficient.
///
/// The interval is scanned in 64 equal steps and the first bracket with a
/// sign change is bisected down to `tol`.
pub fn kerr_free_flux_with(
    params: &SnailParams,
    interval: FluxInterval,
    model: KerrModel,
    tol: f64,
) -> Result<f64> {
    require(tol > 0.0, "tol", "must be positive")?;
    let kerr = |f: f64| -> Result<f64> {
        Ok(taylor_coefficients(FluxBias::from_fraction(f), params)?.kerr_coefficient(model))
    };

    const SCAN: usize = 64;
    let nodes = sweep::linspace(interval.lo, interval.hi, SCAN + 1);
    let values = sweep::try_map(&nodes, |&f| kerr(f))?;
    let bracket = values
        .windows(2)
        .position(|w| w[0] == 0.0 || w[0].signum() != w[1].signum());
    let Some(i) = bracket else {
        return Err(Error::NoSignChange {
            lo: interval.lo,
            hi: interval.hi,
        });
    };
    if values[i] == 0.0 {
        return Ok(nodes[i]);
    }

    let (mut lo, mut hi) = (nodes[i], nodes[i + 1]);
    let lo_sign = values[i].signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let v = kerr(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
