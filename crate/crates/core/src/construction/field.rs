use super::{cutoff, cutoff_derivative, phi_slope, phi_value, AmplitudeSchedule, LacunaryPair};
use crate::error::{invalid, Error, Result};

/// Which member of the family is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// The limit field `α`, equal to 1 on the axis `y = 0`.
    Limit,
    /// `α_j`: equals `α` on `|y| ≥ 1/k_j` and `φ_j(x)` below.
    Level(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layer {
    /// `|y| ≥ 1/k_1`.
    Top,
    /// `1/k_{j+1} ≤ |y| < 1/k_j`.
    Blend(usize),
    /// `|y| < 1/k_j` for a level-`j` field.
    Bottom(usize),
    /// `y = 0` for the limit field.
    Axis,
}

/// The scalar entry `α` (or `α_j`) of `diag(1, α)`.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    pair: LacunaryPair,
    schedule: AmplitudeSchedule,
    truncation: Truncation,
    amplitudes: Vec<f64>,
}

impl CoefficientField {
    pub fn new(pair: LacunaryPair, schedule: AmplitudeSchedule, truncation: Truncation) -> Result<Self> {
        schedule.validate()?;
        if pair.is_empty() {
            return Err(invalid("coefficient field needs a nonempty lacunary pair"));
        }
        if let Truncation::Level(j) = truncation {
            pair.check_index(j)?;
        }
        let amplitudes = (1..=pair.len()).map(|j| schedule.amplitude(j)).collect();
        Ok(Self {
            pair,
            schedule,
            truncation,
            amplitudes,
        })
    }

    pub fn limit(pair: LacunaryPair, schedule: AmplitudeSchedule) -> Result<Self> {
        Self::new(pair, schedule, Truncation::Limit)
    }

    pub fn level(pair: LacunaryPair, schedule: AmplitudeSchedule, j: usize) -> Result<Self> {
        Self::new(pair, schedule, Truncation::Level(j))
    }

    pub fn pair(&self) -> &LacunaryPair {
        &self.pair
    }

    pub fn schedule(&self) -> AmplitudeSchedule {
        self.schedule
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Deepest factor index the field uses.
    pub fn depth(&self) -> usize {
        match self.truncation {
            Truncation::Level(j) => j,
            Truncation::Limit => self.pair.len(),
        }
    }

    /// `a_1`; the field stays inside `[1 − a_1, 1 + a_1]`.
    pub fn max_amplitude(&self) -> f64 {
        self.amplitudes[0]
    }

    /// `φ_j(x)`.
    pub fn phi(&self, j: usize, x: f64) -> Result<f64> {
        self.pair.check_index(j)?;
        Ok(phi_value(self.amplitudes[j - 1], self.pair.h()[j - 1], x))
    }

    /// `φ_j'(x)`.
    pub fn phi_derivative(&self, j: usize, x: f64) -> Result<f64> {
        self.pair.check_index(j)?;
        Ok(phi_slope(self.amplitudes[j - 1], self.pair.h()[j - 1], x))
    }

    fn layer(&self, y: f64) -> Result<Layer> {
        let ay = y.abs();
        let k = self.pair.k();
        if let Truncation::Level(j) = self.truncation {
            if ay * (k[j - 1] as f64) < 1.0 {
                return Ok(Layer::Bottom(j));
            }
        } else if ay == 0.0 {
            return Ok(Layer::Axis);
        }
        if ay * (k[0] as f64) >= 1.0 {
            return Ok(Layer::Top);
        }
        // level fields have already returned below 1/k_j, so j + 1 ≤ level here
        for j in 1..k.len() {
            if ay * (k[j] as f64) >= 1.0 {
                return Ok(Layer::Blend(j));
            }
        }
        Err(invalid(format!(
            "y = {y} lies below 1/k_{n}; the limit field needs more terms there",
            n = k.len()
        )))
    }

    fn phi_at(&self, j: usize, x: f64) -> f64 {
        phi_value(self.amplitudes[j - 1], self.pair.h()[j - 1], x)
    }

    fn slope_at(&self, j: usize, x: f64) -> f64 {
        phi_slope(self.amplitudes[j - 1], self.pair.h()[j - 1], x)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(match self.layer(y)? {
            Layer::Axis => 1.0,
            Layer::Top => self.phi_at(1, x),
            Layer::Bottom(j) => self.phi_at(j, x),
            Layer::Blend(j) => {
                let s = cutoff(self.pair.k()[j] as f64 * y);
                s * self.phi_at(j + 1, x) + (1.0 - s) * self.phi_at(j, x)
            }
        })
    }

    /// `(∂α/∂x, ∂α/∂y)` from the closed-form layer formulas.
    pub fn gradient(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Ok(match self.layer(y)? {
            Layer::Axis => return Err(Error::UndefinedGradient { x, y }),
            Layer::Top => (self.slope_at(1, x), 0.0),
            Layer::Bottom(j) => (self.slope_at(j, x), 0.0),
            Layer::Blend(j) => {
                let kn = self.pair.k()[j] as f64;
                let s = cutoff(kn * y);
                let ds = kn * cutoff_derivative(kn * y);
                let dx = s * self.slope_at(j + 1, x) + (1.0 - s) * self.slope_at(j, x);
                let dy = ds * (self.phi_at(j + 1, x) - self.phi_at(j, x));
                (dx, dy)
            }
        })
    }

    /// `|∇α|²`.
    pub fn gradient_norm_squared(&self, x: f64, y: f64) -> Result<f64> {
        let (gx, gy) = self.gradient(x, y)?;
        Ok(gx * gx + gy * gy)
    }
}
