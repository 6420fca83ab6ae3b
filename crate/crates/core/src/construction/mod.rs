//! Lacunary sequences, amplitude schedules, the smooth cutoff and the layered
//! coefficient fields `α` (limit) and `α_j` (level `j` truncation).

mod cutoff;
mod field;
mod lacunary;
mod schedule;

pub use cutoff::{cutoff, cutoff_derivative};
pub use field::{CoefficientField, Truncation};
pub use lacunary::{make_lacunary, LacunaryPair, ValidationReport, Variant, Violation};
pub use schedule::AmplitudeSchedule;

/// `frac(h·x)` with the rounding error of the product folded back in.
///
/// For integer `h` below 2^53 the fused multiply-add recovers the exact
/// residual of `h*x`, so the phase stays accurate for very large frequencies.
pub(crate) fn phase(h: f64, x: f64) -> f64 {
    let p = h * x;
    let err = h.mul_add(x, -p);
    (p - p.floor()) + err
}

/// `1 + a·cos(2π h x)`.
pub fn phi_value(amplitude: f64, h: u64, x: f64) -> f64 {
    1.0 + amplitude * (std::f64::consts::TAU * phase(h as f64, x)).cos()
}

/// `d/dx [1 + a·cos(2π h x)] = −2π h a·sin(2π h x)`.
pub fn phi_slope(amplitude: f64, h: u64, x: f64) -> f64 {
    let w = std::f64::consts::TAU * h as f64;
    -w * amplitude * (std::f64::consts::TAU * phase(h as f64, x)).sin()
}
