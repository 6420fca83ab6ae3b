use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// How the oscillation amplitude `a_j` of the factor `φ_j` decays with `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeSchedule {
    /// `a_j = 1/(4π√j)`.
    Sqrt,
    /// `a_j = 1/(4πj)`.
    Linear,
    /// `a_j = scale/√j` with `0 < scale < 1`; used for desk-scale stress runs.
    Scaled(f64),
    /// `a_j = 0`: every factor is identically one.
    Zero,
}

impl AmplitudeSchedule {
    /// Amplitude of the `j`-th factor (1-indexed).
    pub fn amplitude(&self, j: usize) -> f64 {
        assert!(j >= 1, "amplitudes are 1-indexed");
        let j = j as f64;
        match *self {
            AmplitudeSchedule::Sqrt => 1.0 / (4.0 * PI * j.sqrt()),
            AmplitudeSchedule::Linear => 1.0 / (4.0 * PI * j),
            AmplitudeSchedule::Scaled(s) => s / j.sqrt(),
            AmplitudeSchedule::Zero => 0.0,
        }
    }

    /// `A₀` when the schedule has the form `a_j = A₀/√j`.
    pub fn sqrt_scale(&self) -> Option<f64> {
        match *self {
            AmplitudeSchedule::Sqrt => Some(1.0 / (4.0 * PI)),
            AmplitudeSchedule::Scaled(s) => Some(s),
            AmplitudeSchedule::Zero => Some(0.0),
            AmplitudeSchedule::Linear => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AmplitudeSchedule::Zero)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AmplitudeSchedule::Scaled(s) if !(s > 0.0 && s < 1.0) => Err(invalid(format!(
                "scaled amplitude must lie in (0, 1), got {s}"
            ))),
            _ => Ok(()),
        }
    }

    /// `∏_{i≤j} (1 + a_i²/2)`, the squared L² norm of the order-`j` Riesz product.
    pub fn l2_squared_product(&self, j: usize) -> f64 {
        (1..=j)
            .map(|i| {
                let a = self.amplitude(i);
                1.0 + 0.5 * a * a
            })
            .product()
    }
}

impl fmt::Display for AmplitudeSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmplitudeSchedule::Sqrt => f.write_str("sqrt"),
            AmplitudeSchedule::Linear => f.write_str("linear"),
            AmplitudeSchedule::Scaled(s) => write!(f, "scaled:{s}"),
            AmplitudeSchedule::Zero => f.write_str("zero"),
        }
    }
}

impl FromStr for AmplitudeSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let schedule = match s {
            "sqrt" => AmplitudeSchedule::Sqrt,
            "linear" => AmplitudeSchedule::Linear,
            "zero" => AmplitudeSchedule::Zero,
            _ => {
                let scale = s
                    .strip_prefix("scaled:")
                    .ok_or_else(|| invalid(format!("unknown schedule `{s}`")))?;
                let scale: f64 = scale
                    .parse()
                    .map_err(|_| invalid(format!("bad scale in `{s}`")))?;
                AmplitudeSchedule::Scaled(scale)
            }
        };
        schedule.validate()?;
        Ok(schedule)
    }
}
