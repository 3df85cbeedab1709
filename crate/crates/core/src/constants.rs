//! CODATA 2018 exact SI constants.

use std::f64::consts::PI;

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Magnetic flux quantum h/2e, Wb.
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);

/// Superconducting resistance quantum h/(2e)², Ω.
pub const RESISTANCE_QUANTUM: f64 = PLANCK / (4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);

/// Josephson energy of a junction with inductance `l_josephson` (henries), in joules.
pub fn josephson_energy(l_josephson: f64) -> f64 {
    let reduced = FLUX_QUANTUM / (2.0 * PI);
    reduced * reduced / l_josephson
}
